#pragma once
// Exact sparse multivariate polynomials over Q(i), with substitution
// homomorphisms and the canonical graded-lex text format shared by every
// symbolic pipeline and the CLI.

#include "tb/qi.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace tb {

// A variable context: an ordered list of variable names. Operations refuse
// to mix polynomials from different contexts. The name list is the context
// identity; helpers below build the standard families.
struct VarContext {
  std::string kind;                // e.g. "theta2const:g=3"
  std::vector<std::string> names;  // declared variable order

  int nvars() const { return (int)names.size(); }
  bool operator==(const VarContext& o) const { return kind == o.kind && names == o.names; }
  bool operator!=(const VarContext& o) const { return !(*this == o); }
};

// standard contexts
VarContext ctx_second_order_const(int g);   // Theta[d](tau), d in F2^g
VarContext ctx_second_order_func(int g);    // x_e = Theta[e](tau,z)
VarContext ctx_first_order8(int g);         // t_d = theta[0,d](tau)
VarContext ctx_first_order_even(int g);     // theta_m(tau), all even m
VarContext ctx_split(int base_g);           // X_{0e}, X_{1e} for the g+1 split
VarContext ctx_mixed(int g);                // U_d = Theta[d](tau) constants, then x_e functions
VarContext ctx_code(int g);                 // x_a, a in F2^g (weight enumerators)

using ExpVec = std::vector<std::uint8_t>;

inline int total_deg(const ExpVec& e) {
  int s = 0;
  for (auto v : e) s += v;
  return s;
}

// graded lexicographic: lower total degree first, then lex on exponents
struct GrlexLess {
  bool operator()(const ExpVec& a, const ExpVec& b) const {
    int da = total_deg(a), db = total_deg(b);
    if (da != db) return da < db;
    return a < b;
  }
};

class SparsePoly {
 public:
  SparsePoly() = default;
  explicit SparsePoly(VarContext c) : ctx_(std::move(c)) {}

  const VarContext& ctx() const { return ctx_; }
  const std::map<ExpVec, QI, GrlexLess>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const ExpVec& e, const QI& c);
  void set_term(const ExpVec& e, const QI& c);
  QI coeff(const ExpVec& e) const;

  SparsePoly operator+(const SparsePoly& o) const;
  SparsePoly operator-(const SparsePoly& o) const;
  SparsePoly operator*(const SparsePoly& o) const;
  SparsePoly operator*(const QI& c) const;
  SparsePoly operator-() const;
  bool operator==(const SparsePoly& o) const { return ctx_ == o.ctx_ && terms_ == o.terms_; }

  SparsePoly pow(unsigned e) const;

  // degree of the zero polynomial reported as -1
  int degree() const;
  bool homogeneous() const;

  // each variable replaced by the corresponding row-combination of variables:
  // x_j -> sum_k M[j][k] x_k  (M square over the same context)
  SparsePoly substitute_linear(const std::vector<std::vector<QI>>& M) const;
  // fast path: x_j -> sign[j] * x_{perm[j]}
  SparsePoly substitute_monomial(const std::vector<int>& perm, const std::vector<QI>& scale) const;
  // ring hom into another context: x_j -> images[j]
  SparsePoly substitute(const VarContext& target, const std::vector<SparsePoly>& images) const;

  SparsePoly partial_derivative(int var) const;

  static SparsePoly monomial(const VarContext& c, const ExpVec& e, const QI& coef);
  static SparsePoly variable(const VarContext& c, int j);

  // canonical text: header "vars n <name...>", then one term per line,
  // graded-lex sorted; bit-exact round trip
  void write_text(std::ostream& os) const;
  static SparsePoly read_text(std::istream& is);
  std::string to_text() const;
  static SparsePoly from_text(const std::string& s);

 private:
  VarContext ctx_;
  std::map<ExpVec, QI, GrlexLess> terms_;
  void check_ctx(const SparsePoly& o) const;
};

// exact division by a single homogeneous divisor under graded-lex leading
// terms; returns true and sets quotient iff remainder is zero, otherwise
// leaves the nonzero remainder in `remainder`
bool divide_exact(const SparsePoly& numerator, const SparsePoly& divisor, SparsePoly& quotient,
                  SparsePoly& remainder);

}  // namespace tb
