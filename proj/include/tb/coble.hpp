#pragma once
// Coble layer: the s1 product formula and its canonical second-order
// polynomial form, bundled exact relation tables, span membership reports,
// relation evaluation through lattice theta series, and exact divisibility.

#include "tb/codes.hpp"
#include "tb/fourier_jacobi.hpp"
#include "tb/linalg.hpp"
#include "tb/mp.hpp"
#include "tb/periods.hpp"
#include "tb/poly.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tb {

struct RelationTable {
  std::string name;
  std::string basis;
  std::vector<std::pair<std::string, Q>> entries;  // label -> exact coefficient
  std::string note;  // source flags kept verbatim, never reconciled silently

  Q coeff(const std::string& label) const;  // 0 when the label is absent
};

// text format: "relation NAME over BASIS", optional "# note: ...", then one
// "label numerator/denominator" line per entry
void write_relation(std::ostream& os, const RelationTable& t);
RelationTable read_relation(std::istream& is);

// bundled read-only tables (data/relations/*.rel)
std::vector<RelationTable> relation_tables();
const RelationTable& relation_table(const std::string& name);

// the 7-factor product of first-order constant differences, degree 28
CertifiedComplex s1_numeric(const PeriodMatrix& tau, const Real& target_err);

// the same form as a canonical polynomial in the eight second-order constants
const SparsePoly& s1_theta2_poly();

// degree-8 polynomial G with G(U(tau)) = prod_delta theta[0,delta](tau):
// the exact square root of prod_delta L_delta(U) minus the unique multiple
// of the degree-16 relation that completes the square; sign fixed and the
// whole expression validated numerically before first symbolic use
const SparsePoly& theta_product_poly();

// exact square root under graded-lex leading terms; nullopt if no root with
// rational coefficients exists
std::optional<SparsePoly> poly_sqrt(const SparsePoly& p);

struct MembershipReport {
  bool in_span = false;
  std::vector<std::pair<std::string, QI>> coefficients;
  SparsePoly residual;  // zero exactly when in_span

  std::string text() const;  // deterministic summary
};
// exact elimination of target against named generators; pre: one context,
// homogeneous of one common degree
MembershipReport membership_report(const SparsePoly& target,
                                   const std::vector<std::pair<std::string, SparsePoly>>& gens);

// sum over table entries of coefficient * theta_{Lambda(C)}(Z); throws when
// an entry with nonzero coefficient has no ingested enumerator
CertifiedComplex combine_relation(
    const RelationTable& table,
    const std::vector<std::pair<std::string, WeightEnumerator>>& enumerators,
    const PeriodMatrix& Z, const Real& target_err);

struct DivisionReport {
  bool exact = false;
  SparsePoly quotient;
  SparsePoly remainder;  // nonzero iff not exact
};
DivisionReport divisibility_check(const SparsePoly& numerator, const SparsePoly& divisor);

// quartic coefficient polynomials of the degree-8 term of a lifted relation,
// content-addressed by the input's text form.  Only the pure quartic part is
// decomposed; for relation inputs the chain-rule part of the constant term
// carries a factor of the base-genus Schottky form and vanishes on the locus.
std::vector<SparsePoly> quartic_coefficients_cached(const SplitPoly& P,
                                                    const std::string& cache_dir);

}  // namespace tb
