#include "tb/fourier_jacobi.hpp"

#include "tb/evalnum.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tb {

namespace {

int block_count(const VarContext& ctx) { return int(ctx.names.size()) / 2; }

// number of X1-factors of a split monomial
int x1_degree(const ExpVec& e, int n) {
  int s = 0;
  for (int i = n; i < 2 * n; i++) s += e[i];
  return s;
}

}  // namespace

SplitPoly::SplitPoly(int g, SparsePoly p) : base_genus(g), poly(std::move(p)) {
  if (g < 1) throw std::invalid_argument("SplitPoly: base genus must be positive");
  if (!(poly.ctx() == ctx_split(g)))
    throw std::invalid_argument("SplitPoly: wrong variable context");
  if (!poly.homogeneous()) throw std::invalid_argument("SplitPoly: not homogeneous");
}

SplitPoly lift_to_split(int base_genus, const SparsePoly& p) {
  if (!(p.ctx() == ctx_second_order_const(base_genus + 1)))
    throw std::invalid_argument("lift_to_split: input is not in the genus g+1 constants");
  SparsePoly out{ctx_split(base_genus)};
  for (const auto& [e, c] : p.terms()) out.add_term(e, c);
  return SplitPoly(base_genus, out);
}

std::vector<FJTerm> split_parts(const SplitPoly& P) {
  int n = block_count(P.poly.ctx());
  std::map<int, SparsePoly> parts;
  for (const auto& [e, c] : P.poly.terms()) {
    int i = x1_degree(e, n);
    auto it = parts.find(i);
    if (it == parts.end()) it = parts.emplace(i, SparsePoly{P.poly.ctx()}).first;
    it->second.add_term(e, c);
  }
  std::vector<FJTerm> out;
  for (auto& [i, f] : parts) out.push_back({i, std::move(f)});
  return out;
}

SparsePoly phi_image(const SplitPoly& P) {
  int n = block_count(P.poly.ctx());
  SparsePoly out{ctx_second_order_const(P.base_genus)};
  for (const auto& [e, c] : P.poly.terms()) {
    if (x1_degree(e, n) != 0) continue;
    ExpVec low(e.begin(), e.begin() + n);
    out.add_term(low, c);
  }
  return out;
}

ScaledPoly add_scaled(const ScaledPoly& a, const ScaledPoly& b) {
  if (a.scale != b.scale)
    throw std::invalid_argument("add_scaled: mismatched argument scales");
  return {a.poly + b.poly, a.scale};
}

F8Term f8_term(const SplitPoly& P) {
  int g = P.base_genus;
  int n = 1 << g;
  VarContext mixed = ctx_mixed(g);
  SparsePoly quartic{mixed};
  for (const auto& [e, c] : P.poly.terms()) {
    if (x1_degree(e, n) != 4) continue;
    quartic.add_term(e, c * QI(16));
  }
  F8Term out{{std::move(quartic), ArgScale::FullZ}, {}};
  SparsePoly f0 = phi_image(P);
  for (Word eps = 0; eps < Word(n); eps++) {
    SparsePoly d = f0.partial_derivative(int(eps)) * QI(2);
    if (!d.is_zero()) out.h1.emplace_back(eps, std::move(d));
  }
  return out;
}

namespace {

// L_d = sum_s (-1)^<d,s> v_s^2 over the given variable offset of a context
SparsePoly char_sum_of_squares(const VarContext& ctx, int g, Word d, int offset) {
  SparsePoly out{ctx};
  for (Word s = 0; s < (Word(1) << g); s++) {
    ExpVec e(ctx.names.size(), 0);
    e[offset + s] = 2;
    out.add_term(e, dot2(d, s) ? QI(-1) : QI(1));
  }
  return out;
}

void validate_doubling(const DoublingRewrite& r) {
  int g = r.a.genus;
  Sampler smp(7500101 + std::uint64_t(g) * 256 + std::uint64_t(r.a.eps) * 16 + r.b.eps);
  Real tgt("1e-28");
  for (int trial = 0; trial < 2; trial++) {
    EvalPoint p = smp.sample_point(g);
    ThetaWorkspace ws(p);
    auto U = ws.second_all(0, tgt);
    auto x = ws.second_all(1, tgt);
    auto d2 = ws.second_all(2, tgt);
    CertifiedComplex lhs = d2[r.a.eps] * U[r.b.eps] * eval_certified(r.lhs_scale, U);
    std::vector<CertifiedComplex> vals = U;
    vals.insert(vals.end(), x.begin(), x.end());
    CertifiedComplex rhs = eval_certified(r.rhs, vals);
    CertifiedComplex diff = lhs - rhs;
    if (diff.abs_lb() > 0 || diff.err > Real("1e-9"))
      throw std::logic_error("doubling_rewrite: numeric validation failed");
  }
}

}  // namespace

DoublingRewrite doubling_rewrite(const HalfChar& a, const HalfChar& b) {
  if (a.genus != b.genus) throw std::invalid_argument("doubling_rewrite: genus mismatch");
  int g = a.genus;
  int n = 1 << g;
  VarContext cst = ctx_second_order_const(g);
  VarContext mixed = ctx_mixed(g);

  SparsePoly lhs_scale = SparsePoly::variable(cst, int(a.eps));
  for (Word d = 0; d < Word(n); d++) lhs_scale = lhs_scale * char_sum_of_squares(cst, g, d, 0);

  SparsePoly rhs{mixed};
  for (Word d = 0; d < Word(n); d++) {
    SparsePoly Lx = char_sum_of_squares(mixed, g, d, n);
    SparsePoly term = Lx * Lx;
    for (Word d2 = 0; d2 < Word(n); d2++)
      if (d2 != d) term = term * char_sum_of_squares(mixed, g, d2, 0);
    rhs = rhs + term * (dot2(d, a.eps) ? QI(-1) : QI(1));
  }
  rhs = rhs * SparsePoly::variable(mixed, int(b.eps)) * QI(Q(1, n));

  DoublingRewrite out{a, b, std::move(lhs_scale), std::move(rhs)};
  validate_doubling(out);
  return out;
}

QuarticBasis quartic_basis(int g) {
  if (g != 2 && g != 3) throw std::invalid_argument("quartic_basis: unsupported genus");
  VarContext ctx = ctx_second_order_func(g);
  int n = 1 << g;
  QuarticBasis out{g, {}};

  SparsePoly pow4{ctx};
  for (Word s = 0; s < Word(n); s++) {
    ExpVec e(n, 0);
    e[s] = 4;
    pow4.add_term(e, QI(1));
  }
  out.elements.push_back(std::move(pow4));

  for (Word t = 1; t < Word(n); t++) {
    SparsePoly pair{ctx};
    for (Word s = 0; s < Word(n); s++) {
      if (s > (s ^ t)) continue;
      ExpVec e(n, 0);
      e[s] = 2;
      e[s ^ t] = 2;
      pair.add_term(e, QI(1));
    }
    out.elements.push_back(std::move(pair));
  }

  if (g == 3) {
    for (Word t = 1; t < Word(n); t++) {
      SparsePoly cosets{ctx};
      for (int side = 0; side < 2; side++) {
        ExpVec e(n, 0);
        for (Word s = 0; s < Word(n); s++)
          if (dot2(s, t) == side) e[s] = 1;
        cosets.add_term(e, QI(1));
      }
      out.elements.push_back(std::move(cosets));
    }
  } else {
    ExpVec e(n, 1);
    out.elements.push_back(SparsePoly::monomial(ctx, e, QI(1)));
  }
  return out;
}

std::vector<SparsePoly> extract_quartic_coeffs(const ScaledPoly& F8, int g) {
  int n = 1 << g;
  if (!(F8.poly.ctx() == ctx_mixed(g)))
    throw std::invalid_argument("extract_quartic_coeffs: input is not in mixed variables");
  QuarticBasis basis = quartic_basis(g);
  VarContext cst = ctx_second_order_const(g);

  // the basis supports are pairwise disjoint, so each x-monomial names its element
  std::map<ExpVec, std::size_t> owner;
  for (std::size_t j = 0; j < basis.elements.size(); j++)
    for (const auto& [e, c] : basis.elements[j].terms()) owner.emplace(e, j);

  std::map<ExpVec, SparsePoly> groups;  // x-part -> constant-variable coefficient
  for (const auto& [e, c] : F8.poly.terms()) {
    ExpVec xe(e.begin() + n, e.end());
    if (total_deg(xe) != 4) {
      std::ostringstream os;
      os << "extract_quartic_coeffs: monomial is not quartic in the function variables:";
      for (int i = 0; i < 2 * n; i++)
        if (e[i]) os << " " << F8.poly.ctx().names[i] << "^" << int(e[i]);
      throw std::invalid_argument(os.str());
    }
    ExpVec ue(e.begin(), e.begin() + n);
    auto it = groups.find(xe);
    if (it == groups.end()) it = groups.emplace(xe, SparsePoly{cst}).first;
    it->second.add_term(ue, c);
  }

  std::vector<SparsePoly> coeffs(basis.elements.size(), SparsePoly{cst});
  std::vector<bool> seen(basis.elements.size(), false);
  std::vector<ExpVec> residual;
  for (const auto& [xe, cpoly] : groups) {
    auto it = owner.find(xe);
    if (it == owner.end()) {
      residual.push_back(xe);
      continue;
    }
    std::size_t j = it->second;
    if (!seen[j]) {
      coeffs[j] = cpoly;
      seen[j] = true;
    } else if (!(coeffs[j] == cpoly)) {
      residual.push_back(xe);
    }
  }
  // an element partially covered disagrees with its absent monomials
  for (std::size_t j = 0; j < basis.elements.size(); j++) {
    if (!seen[j] || coeffs[j].is_zero()) continue;
    for (const auto& [e, c] : basis.elements[j].terms())
      if (groups.find(e) == groups.end()) residual.push_back(e);
  }
  if (!residual.empty()) {
    std::ostringstream os;
    os << "extract_quartic_coeffs: input is outside the quartic span; residual monomials:";
    VarContext fn = ctx_second_order_func(g);
    for (const auto& xe : residual) {
      os << " ";
      bool first = true;
      for (int i = 0; i < n; i++)
        if (xe[i]) {
          if (!first) os << "*";
          os << fn.names[i] << "^" << int(xe[i]);
          first = false;
        }
    }
    throw std::runtime_error(os.str());
  }
  return coeffs;
}

PeriodMatrix embed_period(const PeriodMatrix& tau, const std::vector<CC>& z, const CC& w) {
  int g = tau.genus();
  if (int(z.size()) != g) throw std::invalid_argument("embed_period: z has wrong length");
  std::vector<CC> full((g + 1) * (g + 1));
  full[0] = w;
  for (int i = 0; i < g; i++) {
    full[i + 1] = z[i];
    full[(i + 1) * (g + 1)] = z[i];
    for (int j = 0; j < g; j++) full[(i + 1) * (g + 1) + j + 1] = tau(i, j);
  }
  return PeriodMatrix(g + 1, full);
}

namespace {

// per-block series exponents in q = exp(pi i w/4): X0 -> 8k^2, X1 -> 2(2k+1)^2
std::vector<int> block_menu(int block, int cap) {
  std::vector<int> out;
  for (int k = 0;; k++) {
    long e = block == 0 ? 8L * k * k : 2L * (2 * k + 1) * (2 * k + 1);
    if (e > cap) break;
    out.push_back(int(e));
  }
  return out;
}

}  // namespace

std::vector<int> reachable_exponents(const SplitPoly& P, int cap) {
  int n = 1 << P.base_genus;
  std::vector<std::vector<int>> menus = {block_menu(0, cap), block_menu(1, cap)};
  std::set<int> out;
  for (const auto& [e, c] : P.poly.terms()) {
    std::set<int> sums = {0};
    for (int v = 0; v < 2 * n; v++) {
      const auto& menu = menus[v / n];
      for (int r = 0; r < e[v]; r++) {
        std::set<int> next;
        for (int s : sums)
          for (int m : menu)
            if (s + m <= cap) next.insert(s + m);
        sums = std::move(next);
        if (sums.empty()) break;
      }
      if (sums.empty()) break;
    }
    out.insert(sums.begin(), sums.end());
  }
  return std::vector<int>(out.begin(), out.end());
}

FJExtractor::FJExtractor(PeriodMatrix tau, std::vector<CC> z, Real eval_target)
    : tau_(std::move(tau)), z_(std::move(z)), eval_target_(std::move(eval_target)) {
  if (int(z_.size()) != tau_.genus())
    throw std::invalid_argument("FJExtractor: z has wrong length");
  std::vector<CC> zh(z_);
  for (auto& v : zh) v /= 2;
  half_ = std::make_unique<ThetaWorkspace>(EvalPoint(tau_, zh));
}

const std::vector<CertifiedComplex>& FJExtractor::half_values(int zs) {
  auto it = half_vals_.find(zs);
  if (it == half_vals_.end())
    it = half_vals_.emplace(zs, half_->second_all(zs, eval_target_)).first;
  return it->second;
}

void FJExtractor::ensure_nodes(std::size_t count) {
  int g = tau_.genus();
  while (node_u_.size() < count) {
    std::size_t j = node_u_.size();
    Real t = Real(32 + 7 * int(j)) / 20;  // 1.6 + 0.35 j
    Real u = exp(-real_pi() * t / 2);     // u = q^2 at w = i t
    PeriodMatrix Z = embed_period(tau_, z_, CC(Real(0), t));
    ThetaWorkspace ws(EvalPoint(Z, std::vector<CC>(g + 1, CC(0))));
    node_vals_.push_back(ws.second_all(0, eval_target_));
    node_u_.push_back(std::move(u));
  }
}

namespace {

// truncated majorant series: magnitudes by exponent up to the cap, plus the
// value at the working u of everything past the cap
struct Majorant {
  std::vector<std::pair<int, Real>> poly;  // (q-exponent, coefficient bound)
  Real over{0};
};

Real maj_value(const Majorant& m, const std::vector<Real>& upow) {
  Real v = 0;
  for (const auto& [e, c] : m.poly) v += c * upow[e / 2];
  return v;
}

Majorant maj_mul(const Majorant& a, const Majorant& b, int cap, const std::vector<Real>& upow) {
  Majorant out;
  std::map<int, Real> conv;
  for (const auto& [ea, ca] : a.poly)
    for (const auto& [eb, cb] : b.poly) {
      int e = ea + eb;
      Real c = ca * cb;
      if (e <= cap)
        conv[e] += c;
      else
        out.over += c * upow[e / 2];
    }
  out.poly.assign(conv.begin(), conv.end());
  out.over += maj_value(a, upow) * b.over + a.over * maj_value(b, upow) + a.over * b.over;
  return out;
}

Real theta3_real(const Real& x) {
  Real s = 1, lim("1e-48");
  for (int k = 1;; k++) {
    Real t = 2 * pow(x, k * k);
    s += t;
    if (t < lim) break;
  }
  return s;
}

}  // namespace

Real FJExtractor::tail_at(const SparsePoly& p, int cap, const Real& u) {
  int g = tau_.genus();
  int n = 1 << g;
  std::vector<Real> upow(cap + 2, Real(1));
  for (int k = 1; k <= cap + 1; k++) upow[k] = upow[k - 1] * u;

  Real lam = tau_.im_lambda_min_lb();
  Real musq = 0;
  for (const CC& v : z_) musq += v.imag() * v.imag();
  musq /= lam;
  Real G = exp(2 * real_pi() * musq);
  Real T0 = pow(3 * theta3_real(exp(-real_pi() * lam / 2)), g);
  Real rho = G * upow[4];  // factor per +8 in the q-exponent
  if (rho > Real("0.5"))
    throw UnreachableTarget("fj_extract: node too coarse for the tail majorant");

  std::vector<Majorant> vars(2 * n);
  for (int v = 0; v < 2 * n; v++) {
    int block = v / n, e = v % n;
    auto menu = block_menu(block, cap);
    int k = 0, first_out = -1;
    for (;; k++) {
      long ex = block == 0 ? 8L * k * k : 2L * (2 * k + 1) * (2 * k + 1);
      if (ex > cap) {
        first_out = int(ex);
        break;
      }
    }
    Majorant m;
    for (std::size_t ki = 0; ki < menu.size(); ki++) {
      int zs = block == 0 ? 2 * int(ki) : 2 * int(ki) + 1;
      Real c = half_values(zs)[e].abs_ub();
      if (!(block == 0 && ki == 0)) c *= 2;
      m.poly.emplace_back(menu[ki], c);
    }
    m.over = 2 * T0 * pow(G, Real(first_out) / 8) * pow(u, Real(first_out) / 2) / (1 - rho);
    vars[v] = std::move(m);
  }

  Real total = 0;
  for (const auto& [e, c] : p.terms()) {
    Majorant m;
    m.poly.emplace_back(0, Real(1));
    for (int v = 0; v < 2 * n; v++)
      for (int r = 0; r < e[v]; r++) m = maj_mul(m, vars[v], cap, upow);
    Real cb = q_to_real(Q(abs(c.re))) + q_to_real(Q(abs(c.im)));
    total += cb * m.over;
  }
  return 2 * total;  // doubled to cover the floating slop of the majorant arithmetic
}

namespace {

// Verified solve: an approximate inverse R of the midpoint matrix gives the
// candidate x~ = R b; the certified residual r = b - A x~ and a contraction
// bound eta >= ||I - R A||_inf then enclose the true solution as
// x~ + R r with an extra radius eta/(1-eta) * ||R r||_inf.  Interval
// elimination is useless here: the graded node powers make its radii explode
// far past the true inverse amplification.
std::vector<CertifiedComplex> solve_certified(const std::vector<std::vector<CertifiedComplex>>& A,
                                              const std::vector<CertifiedComplex>& b) {
  std::size_t n = b.size();

  std::vector<std::vector<CC>> M(n, std::vector<CC>(2 * n, CC(0)));
  for (std::size_t i = 0; i < n; i++) {
    for (std::size_t j = 0; j < n; j++) M[i][j] = A[i][j].value;
    M[i][n + i] = CC(1);
  }
  for (std::size_t col = 0; col < n; col++) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; r++)
      if (abs(M[r][col]) > abs(M[piv][col])) piv = r;
    if (abs(M[piv][col]) == 0)
      throw UnreachableTarget("fj_extract: node system is numerically singular");
    std::swap(M[piv], M[col]);
    CC d = M[col][col];
    for (std::size_t k = 0; k < 2 * n; k++) M[col][k] /= d;
    for (std::size_t r = 0; r < n; r++) {
      if (r == col || M[r][col] == CC(0)) continue;
      CC f = M[r][col];
      for (std::size_t k = col; k < 2 * n; k++) M[r][k] -= f * M[col][k];
    }
  }

  std::vector<CC> xt(n, CC(0));
  for (std::size_t i = 0; i < n; i++)
    for (std::size_t j = 0; j < n; j++) xt[i] += M[i][n + j] * b[j].value;

  std::vector<CertifiedComplex> res(n);
  for (std::size_t i = 0; i < n; i++) {
    CertifiedComplex s = b[i];
    for (std::size_t j = 0; j < n; j++) s = s - A[i][j] * xt[j];
    res[i] = s;
  }

  std::vector<CertifiedComplex> y(n);
  Real ynorm = 0;
  for (std::size_t i = 0; i < n; i++) {
    CertifiedComplex s{CC(0)};
    for (std::size_t j = 0; j < n; j++) s = s + res[j] * M[i][n + j];
    y[i] = s;
    if (s.abs_ub() > ynorm) ynorm = s.abs_ub();
  }

  Real eta = 0;
  for (std::size_t i = 0; i < n; i++) {
    Real row = 0;
    for (std::size_t j = 0; j < n; j++) {
      CertifiedComplex s{CC(i == j ? 1 : 0)};
      for (std::size_t k = 0; k < n; k++) s = s - A[k][j] * M[i][n + k];
      row += s.abs_ub();
    }
    if (row > eta) eta = row;
  }
  if (!(eta < Real("0.5")))
    throw UnreachableTarget("fj_extract: node system is too ill-conditioned to certify");

  Real extra = eta / (1 - eta) * ynorm;
  std::vector<CertifiedComplex> x(n);
  for (std::size_t i = 0; i < n; i++) {
    CertifiedComplex s = CertifiedComplex(xt[i]) + y[i];
    x[i] = CertifiedComplex(s.value, s.err + extra);
  }
  return x;
}

}  // namespace

std::vector<CertifiedComplex> FJExtractor::extract(const SplitPoly& P,
                                                   const std::vector<int>& exponents,
                                                   bool structured) {
  if (P.base_genus != tau_.genus())
    throw std::invalid_argument("fj_extract: base genus mismatch");
  std::vector<int> req(exponents);
  std::sort(req.begin(), req.end());
  req.erase(std::unique(req.begin(), req.end()), req.end());
  if (req.empty()) return {};
  for (int e : req)
    if (e < 0 || e % 2 != 0)
      throw std::invalid_argument("fj_extract: exponents must be even and non-negative");

  // model margin past the last request keeps the discarded tail harmless
  int cap = req.back() + (structured ? 32 : 16);
  std::vector<int> model;
  if (structured) {
    model = reachable_exponents(P, cap);
  } else {
    for (int e = 0; e <= cap; e += 2) model.push_back(e);
  }

  std::vector<CertifiedComplex> out;
  if (model.empty()) {
    out.assign(exponents.size(), CertifiedComplex(CC(0)));
    return out;
  }

  std::size_t n = model.size();
  ensure_nodes(n);
  std::vector<std::vector<CertifiedComplex>> V(n, std::vector<CertifiedComplex>(n));
  std::vector<CertifiedComplex> rhs(n);
  for (std::size_t j = 0; j < n; j++) {
    CertifiedComplex uj(CC(node_u_[j]), node_u_[j] * round_slop());
    for (std::size_t k = 0; k < n; k++) V[j][k] = cpow(uj, unsigned(model[k] / 2));
    rhs[j] = eval_certified(P.poly, node_vals_[j]);
    rhs[j].err += tail_at(P.poly, cap, node_u_[j]);
  }
  std::vector<CertifiedComplex> phi = solve_certified(std::move(V), std::move(rhs));

  for (int e : exponents) {
    auto it = std::lower_bound(model.begin(), model.end(), e);
    if (it != model.end() && *it == e)
      out.push_back(phi[std::size_t(it - model.begin())]);
    else
      out.push_back(CertifiedComplex(CC(0)));  // structurally impossible exponent
  }
  return out;
}

std::vector<CertifiedComplex> fj_extract(const SplitPoly& P, const PeriodMatrix& tau,
                                         const std::vector<CC>& z,
                                         const std::vector<int>& exponents, bool structured,
                                         const Real& eval_target) {
  FJExtractor ex(tau, z, eval_target);
  return ex.extract(P, exponents, structured);
}

}  // namespace tb
