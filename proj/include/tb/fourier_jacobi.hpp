#pragma once
// Splitting a polynomial in the genus-(g+1) second-order thetas along the
// last modulus: the X1-count parts f_i, the q -> 0 limit F0, the degree-8
// coefficient identity 2^4 f_4 + H1, doubling rewrites, the translation-
// invariant quartic bases, and certified extraction of q-coefficients from
// evaluations at purely imaginary values of the split modulus.

#include "tb/bits.hpp"
#include "tb/mp.hpp"
#include "tb/periods.hpp"
#include "tb/poly.hpp"
#include "tb/qi.hpp"
#include "tb/theta.hpp"

#include <map>
#include <memory>
#include <utility>
#include <vector>

namespace tb {

// homogeneous polynomial in the split variables X0<e>, X1<e>, e in F2^g
struct SplitPoly {
  int base_genus;
  SparsePoly poly;

  SplitPoly(int g, SparsePoly p);
};

// retag a polynomial in the genus-(g+1) second-order constants: the word's
// top bit becomes the block index, the low g bits the base index
SplitPoly lift_to_split(int base_genus, const SparsePoly& p);

// the monomials of P carrying exactly `index` X1-factors (with multiplicity)
struct FJTerm {
  int index;
  SparsePoly f;
};

// P = sum of the parts, exact; empty indices omitted
std::vector<FJTerm> split_parts(const SplitPoly& P);

// X0_d -> U_d, X1_e -> 0: the constant term of P along the last modulus
SparsePoly phi_image(const SplitPoly& P);

// whether x-variables stand for Theta[e](tau, z/2) or Theta[e](tau, z)
enum class ArgScale { HalfZ, FullZ };

struct ScaledPoly {
  SparsePoly poly;
  ArgScale scale;
};

ScaledPoly add_scaled(const ScaledPoly& a, const ScaledPoly& b);  // scales must match

// The q^8 coefficient of P along the last modulus, assembled at doubled
// argument: with U_d = Theta[d](tau,0),
//   F8(tau,2z) = quartic(U, x)|_{x_e = Theta[e](tau,z)}
//                + sum_e h1_e(U) * Theta[e](tau,2z).
// quartic = 2^4 * f_4 retagged into mixed variables; h1_e = 2 * dF0/dU_e.
struct F8Term {
  ScaledPoly quartic;                           // ctx_mixed(g), FullZ
  std::vector<std::pair<Word, SparsePoly>> h1;  // (e, 2 dF0/dU_e); zero entries omitted
};

F8Term f8_term(const SplitPoly& P);

// Theta[a](tau,2z) * Theta[b](tau,0) * lhs_scale(U) = rhs(U, x) with
// x_s = Theta[s](tau,z). rhs is quartic in x (forced by quasi-periodicity
// in z; no bilinear form with constant coefficients can match). The
// identity is validated numerically at seeded points on construction and
// construction aborts on any residual failure.
struct DoublingRewrite {
  HalfChar a, b;
  SparsePoly lhs_scale;  // ctx_second_order_const(g)
  SparsePoly rhs;        // ctx_mixed(g)
};

DoublingRewrite doubling_rewrite(const HalfChar& a, const HalfChar& b);

// orbit sums of sign-balanced quartic monomials under index translation:
// the power sums, the squared pairs per nonzero shift, and (g=3) the
// hyperplane-coset products / (g=2) the full product
struct QuarticBasis {
  int genus;
  std::vector<SparsePoly> elements;  // ctx_second_order_func(genus)
};

QuarticBasis quartic_basis(int g);  // g in {2,3}

// write an x-quartic mixed polynomial as sum_j s_j(U) * Q_j over the
// constant ring; throws with the offending monomials listed when the input
// lies outside the span
std::vector<SparsePoly> extract_quartic_coeffs(const ScaledPoly& F8, int g);

// genus g+1 period matrix [[w, z^T], [z, tau]]
PeriodMatrix embed_period(const PeriodMatrix& tau, const std::vector<CC>& z, const CC& w);

// q-exponents (q = exp(pi i w/4)) the series of P can populate, up to cap
std::vector<int> reachable_exponents(const SplitPoly& P, int cap);

// Certified q-coefficients of P evaluated on the second-order thetas of
// Z = [[w, z^T], [z, tau]], solved from evaluations at purely imaginary
// w nodes through a generalized Vandermonde system. The model keeps every
// populatable exponent up to a margin past the largest request and each
// node's discarded series tail enters the result radius through a rigorous
// majorant, so the returned radii are trustworthy. `structured` restricts
// the model to the reachable exponent set (requests outside it are exact
// zeros); otherwise every even exponent in range is modelled. Node
// workspaces persist across calls at one base point.
class FJExtractor {
 public:
  FJExtractor(PeriodMatrix tau, std::vector<CC> z, Real eval_target);

  std::vector<CertifiedComplex> extract(const SplitPoly& P, const std::vector<int>& exponents,
                                        bool structured);

  const PeriodMatrix& tau() const { return tau_; }
  const std::vector<CC>& z() const { return z_; }

 private:
  PeriodMatrix tau_;
  std::vector<CC> z_;
  Real eval_target_;
  std::unique_ptr<ThetaWorkspace> half_;  // base point (tau, z/2)
  std::vector<Real> node_u_;              // u_j = exp(-pi t_j / 2), t_j = 1.6 + 0.35 j
  std::vector<std::vector<CertifiedComplex>> node_vals_;  // second-order thetas at (Z_j, 0)
  std::map<int, std::vector<CertifiedComplex>> half_vals_;  // zs -> Theta[.](tau, zs*z/2)

  void ensure_nodes(std::size_t n);
  const std::vector<CertifiedComplex>& half_values(int zs);
  Real tail_at(const SparsePoly& p, int cap, const Real& u) ;
};

// one-shot convenience wrapper
std::vector<CertifiedComplex> fj_extract(const SplitPoly& P, const PeriodMatrix& tau,
                                         const std::vector<CC>& z,
                                         const std::vector<int>& exponents, bool structured,
                                         const Real& eval_target);

}  // namespace tb
