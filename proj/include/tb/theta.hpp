#pragma once
// Certified evaluation of first- and second-order theta functions via shared
// per-axis power tables over a scaled argument grid, plus the four addition
// identities evaluated as residuals.

#include "tb/bits.hpp"
#include "tb/mp.hpp"
#include "tb/periods.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace tb {

// target precision cannot be met by the floating layer; never silently degraded
struct UnreachableTarget : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shared evaluation context for one base point (tau, z). All evaluations at
// integer-scaled arguments (ts*tau, zs*z) reuse one axis-table family, and
// every characteristic shares the same grid: the u-parity class selects eps
// and an exact i-power phase selects delta.
class ThetaWorkspace {
 public:
  explicit ThetaWorkspace(EvalPoint p) : p_(std::move(p)) {}

  const EvalPoint& point() const { return p_; }
  int genus() const { return p_.tau.genus(); }

  // theta[eps,delta](ts*tau, zs*z); ts in {1,2}, zs >= 0
  CertifiedComplex theta(const Characteristic& m, int ts, int zs, const Real& target_err);

  // all delta for fixed eps, indexed by delta word
  std::vector<CertifiedComplex> theta_all_delta(Word eps, int ts, int zs, const Real& target_err);

  // all eps at delta = 0, indexed by eps word
  std::vector<CertifiedComplex> theta_all_eps0(int ts, int zs, const Real& target_err);

  // second-order values Theta[s](tau, zs_sec*z) for all s (= theta[s,0](2tau, 2*zs_sec*z))
  std::vector<CertifiedComplex> second_all(int zs_sec, const Real& target_err) {
    return theta_all_eps0(2, 2 * zs_sec, target_err);
  }

 private:
  struct Entry {
    int U = -1;
    Real tail;      // truncation bound for the |u_j| <= U box
    Real abs_sum;   // upper bound on sum over the grid of |term|
    std::vector<std::vector<CC>> D;  // D[j][m] = exp(pi i ts tau_jj/4)^(m^2), m in [0,U]
    std::vector<std::vector<CC>> E;  // E[idx(j,k)][m+U^2] = exp(pi i ts tau_jk/2)^m
    std::vector<std::vector<CC>> Z;  // Z[j][m+U] = exp(pi i zs z_j)^m
    bool have_full = false;
    std::vector<std::vector<CC>> full;  // full[eps][delta], one grid pass
  };

  EvalPoint p_;
  std::map<std::pair<int, int>, Entry> tables_;

  Entry& ensure_entry(int ts, int zs, const Real& target_err);
  void accumulate(Entry& t) const;  // fills t.full
};

CertifiedComplex theta_first(const Characteristic& m, const EvalPoint& p, const Real& target_err);
CertifiedComplex theta_second(const HalfChar& e, const EvalPoint& p, const Real& target_err);

enum class IdentityKind { Riem, ProdTT, Add, T8 };

struct IdentityId {
  IdentityKind kind;
  Word eps = 0, delta = 0;  // unused for T8
};

// LHS - RHS of the named identity at p; |value| <= err for a correct build
CertifiedComplex identity_residual(const IdentityId& id, const EvalPoint& p,
                                   const Real& target_err);
CertifiedComplex identity_residual(const IdentityId& id, ThetaWorkspace& ws,
                                   const Real& target_err);

}  // namespace tb
