#include "tb/theta.hpp"

#include <algorithm>

namespace tb {

namespace {

constexpr int kMaxU = 400;
// documented over-approximation: per-term arithmetic uses < 64 rounding events
const int kOpsFactor = 64;

inline CC rot_i(const CC& c, int r) {
  switch (((r % 4) + 4) % 4) {
    case 0: return c;
    case 1: return CC(-c.imag(), c.real());
    case 2: return CC(-c.real(), -c.imag());
    default: return CC(c.imag(), -c.real());
  }
}

inline CC cc_ipow(const CC& base, long e) {
  CC b = base;
  unsigned long k;
  if (e < 0) {
    b = CC(1) / b;
    k = (unsigned long)(-e);
  } else {
    k = (unsigned long)e;
  }
  CC r(1);
  while (k) {
    if (k & 1) r *= b;
    if (k >>= 1) b *= b;
  }
  return r;
}

// per-axis majorant f(a) = exp(-pi (lam a^2 - 2 a y)), a >= 0 over half steps
struct AxisBound {
  Real lam, y, pi;
  Real f(const Real& a) const { return exp(-pi * (lam * a * a - 2 * a * y)); }
  // sum of f over a in (1/2)Z with |a| >= a0 (a0 a positive half-integer multiple)
  Real tail_from(Real a0) const {
    Real s = 0, a = a0;
    for (int it = 0; it < 4000; it++) {
      Real ratio = exp(-pi * (lam * (a + Real(0.25)) - y));
      Real fa = f(a);
      if (ratio < Real(0.5)) return 2 * (s + fa / (1 - ratio));
      s += fa;
      a += Real(0.5);
    }
    throw UnreachableTarget("theta tail bound did not converge");
  }
  Real full_sum() const { return f(Real(0)) + tail_from(Real(0.5)); }
};

}  // namespace

ThetaWorkspace::Entry& ThetaWorkspace::ensure_entry(int ts, int zs, const Real& target_err) {
  const int g = genus();
  const Real pi = real_pi();
  auto key = std::make_pair(ts, zs);
  auto it = tables_.find(key);

  Real lam = Real(ts) * p_.tau.im_lambda_min_lb();
  std::vector<AxisBound> ax(g);
  for (int j = 0; j < g; j++) {
    Real y = (zs == 0) ? Real(0) : abs(Real(zs) * p_.z[j].imag());
    ax[j] = AxisBound{lam, y, pi};
  }
  std::vector<Real> S(g);
  Real prodS = 1;
  for (int j = 0; j < g; j++) {
    S[j] = ax[j].full_sum();
    prodS *= S[j];
  }
  Real round_err = prodS * kOpsFactor * round_slop();
  if (!(round_err < target_err / 2))
    throw UnreachableTarget("target_err below floating-point resolution for this point");

  auto box_tail = [&](int U) {
    Real t = 0;
    for (int j = 0; j < g; j++) {
      Real tj = ax[j].tail_from(Real(U + 1) / 2);
      Real rest = 1;
      for (int k = 0; k < g; k++)
        if (k != j) rest *= S[k];
      t += tj * rest;
    }
    return t;
  };

  if (it != tables_.end() && it->second.tail <= target_err / 4) return it->second;

  int U = it != tables_.end() ? it->second.U + 1 : 2;
  Real tail = box_tail(U);
  while (!(tail <= target_err / 4)) {
    if (++U > kMaxU) throw UnreachableTarget("truncation radius limit exceeded");
    tail = box_tail(U);
  }

  Entry t;
  t.U = U;
  t.tail = tail;
  t.abs_sum = prodS;
  const CC ipi(Real(0), pi);
  t.D.assign(g, {});
  t.Z.assign(g, {});
  t.E.assign(g * g, {});
  for (int j = 0; j < g; j++) {
    CC wd = exp(ipi * (Real(ts) * p_.tau(j, j)) / Real(4));
    t.D[j].resize(U + 1);
    CC cur(1), odd = wd;  // wd^(m^2) via wd^(2m-1) steps
    CC wd2 = wd * wd;
    for (int m = 0; m <= U; m++) {
      t.D[j][m] = cur;
      cur *= odd;
      odd *= wd2;
    }
    CC wz = (zs == 0) ? CC(1) : exp(ipi * (Real(zs) * p_.z[j]));
    auto& Zj = t.Z[j];
    Zj.resize(2 * U + 1);
    Zj[U] = CC(1);
    CC wzi = CC(1) / wz;
    for (int m = 1; m <= U; m++) {
      Zj[U + m] = Zj[U + m - 1] * wz;
      Zj[U - m] = Zj[U - m + 1] * wzi;
    }
    for (int k = j + 1; k < g; k++) {
      CC we = exp(ipi * (Real(ts) * p_.tau(j, k)) / Real(2));
      auto& Ejk = t.E[j * g + k];
      int M = U * U;
      Ejk.resize(2 * M + 1);
      Ejk[M] = CC(1);
      CC wei = CC(1) / we;
      for (int m = 1; m <= M; m++) {
        Ejk[M + m] = Ejk[M + m - 1] * we;
        Ejk[M - m] = Ejk[M - m + 1] * wei;
      }
    }
  }
  auto [pos, _] = tables_.insert_or_assign(key, std::move(t));
  return pos->second;
}

void ThetaWorkspace::accumulate(Entry& t) const {
  const int g = genus();
  const int U = t.U, M = U * U;
  const int nchar = 1 << g;
  t.full.assign(nchar, std::vector<CC>(nchar, CC(0)));
  int u[4] = {0, 0, 0, 0};
  CC partial[5];
  partial[0] = CC(1);

  auto leaf = [&](Word eps) {
    const CC& term = partial[g];
    auto& row = t.full[eps];
    for (Word d = 0; d < (Word)nchar; d++) {
      int s = 0;
      for (int k = 0; k < g; k++)
        if (coord(d, g, k)) s += u[k];
      row[d] += rot_i(term, s);
    }
  };

  auto rec = [&](auto&& self, int j, Word par) -> void {
    for (int uj = -U; uj <= U; uj++) {
      u[j] = uj;
      CC v = partial[j] * t.D[j][uj < 0 ? -uj : uj] * t.Z[j][uj + U];
      for (int k = 0; k < j; k++) v *= t.E[k * g + j][u[k] * uj + M];
      partial[j + 1] = v;
      Word par2 = par | (Word(uj & 1) << (g - 1 - j));
      if (j + 1 == g)
        leaf(par2);
      else
        self(self, j + 1, par2);
    }
  };
  rec(rec, 0, 0);
  t.have_full = true;
}

std::vector<CertifiedComplex> ThetaWorkspace::theta_all_delta(Word eps, int ts, int zs,
                                                              const Real& target_err) {
  const int nchar = 1 << genus();
  auto& t = ensure_entry(ts, zs, target_err);
  if (!t.have_full) accumulate(t);
  Real err = t.tail + t.abs_sum * kOpsFactor * round_slop();
  std::vector<CertifiedComplex> out(nchar);
  for (Word d = 0; d < (Word)nchar; d++) out[d] = CertifiedComplex(t.full[eps][d], err);
  return out;
}

std::vector<CertifiedComplex> ThetaWorkspace::theta_all_eps0(int ts, int zs,
                                                             const Real& target_err) {
  const int nchar = 1 << genus();
  auto& t = ensure_entry(ts, zs, target_err);
  if (!t.have_full) accumulate(t);
  Real err = t.tail + t.abs_sum * kOpsFactor * round_slop();
  std::vector<CertifiedComplex> out(nchar);
  for (Word e = 0; e < (Word)nchar; e++) out[e] = CertifiedComplex(t.full[e][0], err);
  return out;
}

CertifiedComplex ThetaWorkspace::theta(const Characteristic& m, int ts, int zs,
                                       const Real& target_err) {
  if (m.genus != genus()) throw std::invalid_argument("characteristic genus mismatch");
  return theta_all_delta(m.eps, ts, zs, target_err)[m.delta];
}

CertifiedComplex theta_first(const Characteristic& m, const EvalPoint& p,
                             const Real& target_err) {
  ThetaWorkspace ws(p);
  return ws.theta(m, 1, 1, target_err);
}

CertifiedComplex theta_second(const HalfChar& e, const EvalPoint& p, const Real& target_err) {
  ThetaWorkspace ws(p);
  return ws.theta(Characteristic(e.genus, e.eps, 0), 2, 2, target_err);
}

namespace {

CertifiedComplex residual_once(const IdentityId& id, ThetaWorkspace& ws, const Real& budget) {
  const int g = ws.genus();
  const Word n = Word(1) << g;
  auto sgn = [](int parity) { return parity ? CC(-1) : CC(1); };

  switch (id.kind) {
    case IdentityKind::Riem: {
      // theta[e,d](tau,z)^2 = sum_s (-1)^{d.s} Theta[s](tau,z) Theta[s+e](tau,0)
      CertifiedComplex th = ws.theta(Characteristic(g, id.eps, id.delta), 1, 1, budget);
      auto Tz = ws.second_all(1, budget);
      auto T0 = ws.second_all(0, budget);
      CertifiedComplex rhs;
      for (Word s = 0; s < n; s++)
        rhs = rhs + (Tz[s] * T0[s ^ id.eps]) * sgn(dot2(id.delta, s));
      return cpow(th, 2) - rhs;
    }
    case IdentityKind::ProdTT: {
      // Theta[d](tau,z) Theta[d+e](tau,z) = 2^-g sum_s (-1)^{d.s} theta[e,s](tau,2z) theta[e,s](tau,0)
      auto Tz = ws.second_all(1, budget);
      auto t2z = ws.theta_all_delta(id.eps, 1, 2, budget);
      auto t0 = ws.theta_all_delta(id.eps, 1, 0, budget);
      CertifiedComplex rhs;
      for (Word s = 0; s < n; s++) rhs = rhs + (t2z[s] * t0[s]) * sgn(dot2(id.delta, s));
      CC half = CC(1) / CC(Real(n));
      return Tz[id.delta] * Tz[id.delta ^ id.eps] - rhs * half;
    }
    case IdentityKind::Add: {
      // theta[e,d](tau,2z) theta[e,d](tau,0) = sum_s (-1)^{d.s} Theta[s](tau,z) Theta[s+e](tau,z)
      auto t2z = ws.theta_all_delta(id.eps, 1, 2, budget);
      auto t0 = ws.theta_all_delta(id.eps, 1, 0, budget);
      auto Tz = ws.second_all(1, budget);
      CertifiedComplex rhs;
      for (Word s = 0; s < n; s++)
        rhs = rhs + (Tz[s] * Tz[s ^ id.eps]) * sgn(dot2(id.delta, s));
      return t2z[id.delta] * t0[id.delta] - rhs;
    }
    case IdentityKind::T8: {
      // sum over all characteristics of theta^8(tau,z) = sum of theta^6(tau,0) theta^2(tau,2z)
      CertifiedComplex lhs, rhs;
      for (Word e = 0; e < n; e++) {
        auto tz = ws.theta_all_delta(e, 1, 1, budget);
        auto t2z = ws.theta_all_delta(e, 1, 2, budget);
        auto t0 = ws.theta_all_delta(e, 1, 0, budget);
        for (Word d = 0; d < n; d++) {
          lhs = lhs + cpow(tz[d], 8);
          rhs = rhs + cpow(t0[d], 6) * cpow(t2z[d], 2);
        }
      }
      return lhs - rhs;
    }
  }
  throw std::invalid_argument("unknown identity id");
}

}  // namespace

CertifiedComplex identity_residual(const IdentityId& id, ThetaWorkspace& ws,
                                   const Real& target_err) {
  Real budget = target_err / (Real(16) * Real(1 << ws.genus()));
  for (int attempt = 0; attempt < 5; attempt++) {
    CertifiedComplex r = residual_once(id, ws, budget);
    if (r.err <= target_err) return r;
    budget /= 256;
  }
  throw UnreachableTarget("identity residual error bound exceeds target");
}

CertifiedComplex identity_residual(const IdentityId& id, const EvalPoint& p,
                                   const Real& target_err) {
  ThetaWorkspace ws(p);
  return identity_residual(id, ws, target_err);
}

}  // namespace tb
