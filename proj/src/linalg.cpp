#include "tb/linalg.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace tb {

namespace {

using TermMap = std::map<ExpVec, QI, GrlexLess>;

struct Column {
  TermMap terms;
  std::vector<QI> comb;  // expression in original generator coordinates
  ExpVec pivot;
};

// col -= factor * basis (both terms and bookkeeping).
void axpy(Column& col, const QI& factor, const Column& basis) {
  if (factor.is_zero()) return;
  for (const auto& [e, c] : basis.terms) {
    auto it = col.terms.find(e);
    if (it == col.terms.end()) {
      col.terms.emplace(e, QI{} - factor * c);
    } else {
      it->second = it->second - factor * c;
      if (it->second.is_zero()) col.terms.erase(it);
    }
  }
  for (size_t i = 0; i < basis.comb.size(); ++i)
    col.comb[i] = col.comb[i] - factor * basis.comb[i];
}

void reduce(Column& col, const std::vector<Column>& basis) {
  for (const auto& b : basis) {
    auto it = col.terms.find(b.pivot);
    if (it == col.terms.end()) continue;
    QI factor = it->second / b.terms.at(b.pivot);
    axpy(col, factor, b);
  }
}

}  // namespace

SpanReduction span_reduce(const SparsePoly& target, const std::vector<SparsePoly>& gens) {
  const size_t k = gens.size();
  for (const auto& g : gens)
    if (!(g.ctx() == target.ctx()))
      throw std::invalid_argument("span_membership: mixed variable contexts");

  // Eliminate generator columns, widest support first, so later columns reduce
  // against the monomial-richest pivots.
  std::vector<size_t> order(k);
  for (size_t i = 0; i < k; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return gens[a].terms().size() > gens[b].terms().size();
  });

  std::vector<Column> basis;
  for (size_t j : order) {
    Column col;
    for (const auto& [e, c] : gens[j].terms()) col.terms.emplace(e, c);
    col.comb.assign(k, QI{});
    col.comb[j] = QI{1, 0};
    reduce(col, basis);
    if (col.terms.empty()) continue;  // dependent generator
    col.pivot = std::prev(col.terms.end())->first;
    basis.push_back(std::move(col));
  }

  Column rhs;
  for (const auto& [e, c] : target.terms()) rhs.terms.emplace(e, c);
  rhs.comb.assign(k, QI{});
  reduce(rhs, basis);

  SpanReduction out;
  out.coefficients.resize(k);
  for (size_t i = 0; i < k; ++i) out.coefficients[i] = QI{} - rhs.comb[i];
  out.residual = SparsePoly(target.ctx());
  for (const auto& [e, c] : rhs.terms) out.residual.add_term(e, c);

  // Certify by direct re-substitution.
  SparsePoly check = out.residual;
  for (size_t i = 0; i < k; ++i) check = check + gens[i] * out.coefficients[i];
  if (!(check == target)) throw std::logic_error("span_membership: certificate failed");
  return out;
}

std::optional<std::vector<QI>> span_membership(const SparsePoly& target,
                                               const std::vector<SparsePoly>& gens) {
  SpanReduction red = span_reduce(target, gens);
  if (!red.residual.is_zero()) return std::nullopt;
  return red.coefficients;
}

}  // namespace tb
