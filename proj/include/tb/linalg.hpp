#pragma once
// Exact span membership over sparse polynomial columns.

#include "tb/poly.hpp"

#include <optional>

namespace tb {

// Exact elimination of target against the span of gens: always satisfies
// target = sum coefficients_i * gens_i + residual, with the residual free of
// the span's pivot monomials; residual is zero exactly when target lies in
// the span.
struct SpanReduction {
  std::vector<QI> coefficients;
  SparsePoly residual;
};
SpanReduction span_reduce(const SparsePoly& target, const std::vector<SparsePoly>& gens);

// Exact coefficients c with target = sum c_i * gens_i, or nullopt with a
// certified nonzero residual after elimination. All inputs must share one
// context and be homogeneous of equal degree (enforced).
std::optional<std::vector<QI>> span_membership(const SparsePoly& target,
                                               const std::vector<SparsePoly>& gens);

}  // namespace tb
