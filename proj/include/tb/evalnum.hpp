#pragma once
// Bridge from exact polynomials to certified numerics.

#include "tb/mp.hpp"
#include "tb/poly.hpp"

#include <vector>

namespace tb {

// round-to-nearest conversions with the usual slop inflation
Real q_to_real(const Q& v);
CC qi_to_cc(const QI& v);

// evaluate p at the given certified variable values (per-variable power cache)
CertifiedComplex eval_certified(const SparsePoly& p, const std::vector<CertifiedComplex>& vals);

}  // namespace tb
