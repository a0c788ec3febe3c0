#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tb/evalnum.hpp"
#include "tb/fourier_jacobi.hpp"
#include "tb/invariants.hpp"
#include "tb/periods.hpp"
#include "tb/theta.hpp"

#include <algorithm>
#include <set>
#include <string>

using namespace tb;

namespace {

SparsePoly mono(const VarContext& ctx, const std::vector<std::pair<int, int>>& ve,
                const QI& c = QI(1)) {
  ExpVec e(ctx.names.size(), 0);
  for (auto [i, k] : ve) e[i] += k;
  return SparsePoly::monomial(ctx, e, c);
}

std::vector<CertifiedComplex> concat_vals(const std::vector<CertifiedComplex>& a,
                                          const std::vector<CertifiedComplex>& b) {
  std::vector<CertifiedComplex> out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// value of the assembled degree-8 term with x at half argument: the raw
// q^8 coefficient extracted with z-block z equals
// quartic(U, Theta(tau,z/2)) + sum_e h1_e(U) Theta[e](tau,z)
CertifiedComplex eval_f8_half(const F8Term& t, const std::vector<CertifiedComplex>& U,
                              const std::vector<CertifiedComplex>& xh,
                              const std::vector<CertifiedComplex>& xf, const Q& h1_factor = Q(1)) {
  CertifiedComplex v = eval_certified(t.quartic.poly, concat_vals(U, xh));
  for (const auto& [eps, d] : t.h1) {
    CertifiedComplex term = eval_certified(d, U) * xf[eps];
    v = v + term * CC(q_to_real(h1_factor));
  }
  return v;
}

int x1_count(const ExpVec& e, int n) {
  int s = 0;
  for (int i = n; i < 2 * n; i++) s += e[i];
  return s;
}

// independent oracle: shift-orbit sums of sign-balanced quartic monomials
std::vector<SparsePoly> orbit_quartics(int g) {
  int n = 1 << g;
  VarContext ctx = ctx_second_order_func(g);
  std::set<ExpVec> done;
  std::vector<SparsePoly> out;
  for (int a = 0; a < n; a++)
    for (int b = a; b < n; b++)
      for (int c = b; c < n; c++) {
        int d = a ^ b ^ c;
        if (d < c) continue;
        ExpVec e(n, 0);
        e[a]++;
        e[b]++;
        e[c]++;
        e[d]++;
        if (done.count(e)) continue;
        std::set<ExpVec> orbit;
        for (int t = 0; t < n; t++) {
          ExpVec et(n, 0);
          for (int v = 0; v < n; v++) et[v ^ t] += e[v];
          orbit.insert(et);
        }
        SparsePoly s{ctx};
        for (const auto& et : orbit) {
          done.insert(et);
          s.add_term(et, QI(1));
        }
        out.push_back(std::move(s));
      }
  return out;
}

std::set<std::string> poly_text_set(const std::vector<SparsePoly>& v) {
  std::set<std::string> out;
  for (const auto& p : v) out.insert(p.to_text());
  return out;
}

std::vector<CC> translated_z(const PeriodMatrix& tau, const std::vector<CC>& z, Word a, Word b) {
  int g = tau.genus();
  std::vector<CC> out(z);
  for (int i = 0; i < g; i++) {
    CC s(0);
    for (int j = 0; j < g; j++)
      if (coord(a, g, j)) s += tau(i, j);
    out[i] += s / 2 + CC(Real(coord(b, g, i))) / 2;
  }
  return out;
}

// retag a constant-variable or function-variable polynomial into ctx_mixed(g)
SparsePoly to_mixed(const SparsePoly& p, int g, bool upper_block) {
  VarContext mixed = ctx_mixed(g);
  int n = 1 << g;
  std::vector<SparsePoly> images;
  for (int j = 0; j < n; j++)
    images.push_back(SparsePoly::variable(mixed, upper_block ? n + j : j));
  return p.substitute(mixed, images);
}

}  // namespace

TEST_CASE("mixed context and split type checks") {
  VarContext m2 = ctx_mixed(2);
  REQUIRE(m2.names.size() == 8);
  CHECK(m2.names[0] == "U00");
  CHECK(m2.names[3] == "U11");
  CHECK(m2.names[4] == "x00");
  CHECK(m2.names[7] == "x11");

  VarContext s1 = ctx_split(1);
  REQUIRE(s1.names.size() == 4);
  CHECK(s1.names[0] == "X00");
  CHECK(s1.names[1] == "X01");
  CHECK(s1.names[2] == "X10");
  CHECK(s1.names[3] == "X11");

  CHECK_NOTHROW(SplitPoly(1, mono(s1, {{0, 4}})));
  CHECK_THROWS_AS(SplitPoly(1, mono(ctx_second_order_const(1), {{0, 4}})), std::invalid_argument);
  CHECK_THROWS_AS(SplitPoly(1, mono(s1, {{0, 4}}) + mono(s1, {{1, 1}})), std::invalid_argument);
}

TEST_CASE("split parts partition") {
  VarContext s1 = ctx_split(1);

  auto single = split_parts(SplitPoly(1, mono(s1, {{0, 4}})));
  REQUIRE(single.size() == 1);
  CHECK(single[0].index == 0);

  auto cubic = split_parts(SplitPoly(1, mono(s1, {{2, 3}, {1, 1}})));
  REQUIRE(cubic.size() == 1);
  CHECK(cubic[0].index == 3);

  SplitPoly lifted = lift_to_split(2, schottky_poly(SchottkyRepr::SecondOrder));
  REQUIRE(lifted.poly.term_count() == 471);
  CHECK(lifted.poly.degree() == 16);
  CHECK(lifted.poly.homogeneous());

  auto parts = split_parts(lifted);
  REQUIRE(parts.size() == 3);
  CHECK(parts[0].index == 4);
  CHECK(parts[0].f.term_count() == 127);
  CHECK(parts[1].index == 8);
  CHECK(parts[1].f.term_count() == 217);
  CHECK(parts[2].index == 12);
  CHECK(parts[2].f.term_count() == 127);

  SparsePoly sum{lifted.poly.ctx()};
  for (const auto& t : parts) {
    for (const auto& [e, c] : t.f.terms()) CHECK(x1_count(e, 4) == t.index);
    sum = sum + t.f;
  }
  CHECK(sum == lifted.poly);

  CHECK_THROWS_AS(lift_to_split(2, schottky_poly(SchottkyRepr::FirstOrder)),
                  std::invalid_argument);
}

TEST_CASE("constant term image") {
  VarContext s1 = ctx_split(1);
  VarContext c1 = ctx_second_order_const(1);

  CHECK(phi_image(SplitPoly(1, mono(s1, {{2, 2}, {3, 2}}))).is_zero());

  SparsePoly p = mono(s1, {{0, 2}}) + mono(s1, {{2, 2}});
  CHECK(phi_image(SplitPoly(1, p)) == mono(c1, {{0, 2}}));

  // the large-Im w limit reproduces the constant term
  Sampler smp(99101);
  PeriodMatrix tau = smp.sample_tau(1);
  std::vector<CC> z = smp.sample_z(1);
  Real tgt("1e-30");
  ThetaWorkspace big(EvalPoint(embed_period(tau, z, CC(Real(0), Real(20))), {CC(0), CC(0)}));
  CertifiedComplex lhs = eval_certified(p, big.second_all(0, tgt));
  ThetaWorkspace base(EvalPoint(tau, z));
  CertifiedComplex rhs = eval_certified(phi_image(SplitPoly(1, p)), base.second_all(0, tgt));
  CHECK((lhs - rhs).abs_ub() <= Real("1e-10"));
}

TEST_CASE("argument scale flags") {
  VarContext m1 = ctx_mixed(1);
  ScaledPoly a{mono(m1, {{2, 4}}), ArgScale::FullZ};
  ScaledPoly b{mono(m1, {{3, 4}}), ArgScale::FullZ};
  ScaledPoly c{mono(m1, {{3, 4}}), ArgScale::HalfZ};
  CHECK(add_scaled(a, b).poly == mono(m1, {{2, 4}}) + mono(m1, {{3, 4}}));
  CHECK_THROWS_AS(add_scaled(a, c), std::invalid_argument);
}

TEST_CASE("degree eight term assembly") {
  VarContext s1 = ctx_split(1);
  VarContext m1 = ctx_mixed(1);
  VarContext c1 = ctx_second_order_const(1);

  F8Term pure4 = f8_term(SplitPoly(1, mono(s1, {{2, 4}})));
  CHECK(pure4.quartic.poly == mono(m1, {{2, 4}}, QI(16)));
  CHECK(pure4.quartic.scale == ArgScale::FullZ);
  CHECK(pure4.h1.empty());

  F8Term pure0 = f8_term(SplitPoly(1, mono(s1, {{0, 4}})));
  CHECK(pure0.quartic.poly.is_zero());
  REQUIRE(pure0.h1.size() == 1);
  CHECK(pure0.h1[0].first == 0);
  CHECK(pure0.h1[0].second == mono(c1, {{0, 3}}, QI(8)));

  SplitPoly lifted = lift_to_split(2, schottky_poly(SchottkyRepr::SecondOrder));
  F8Term fs = f8_term(lifted);
  CHECK(fs.h1.empty());
  REQUIRE(fs.quartic.poly.term_count() == 127);
  for (const auto& [e, c] : fs.quartic.poly.terms()) {
    CHECK(x1_count(e, 4) == 4);
    CHECK(total_deg(e) == 16);
  }

  // numeric check of the assembled coefficient against independent extraction
  SparsePoly p1 = mono(s1, {{2, 2}, {3, 2}}) + mono(s1, {{0, 4}});
  SparsePoly p2 = (mono(s1, {{0, 1}}) + mono(s1, {{1, 1}})).pow(4);
  int idx = 0;
  for (const SparsePoly& p : {p1, p2}) {
    Sampler smp(515051 + idx++);
    PeriodMatrix tau = smp.sample_tau(1);
    std::vector<CC> z = smp.sample_z(1);
    SplitPoly P(1, p);
    CertifiedComplex phi8 = fj_extract(P, tau, z, {8}, true, Real("1e-34"))[0];

    std::vector<CC> zh(z);
    for (auto& v : zh) v /= 2;
    ThetaWorkspace half(EvalPoint(tau, zh));
    Real tgt("1e-30");
    auto U = half.second_all(0, tgt);
    auto xh = half.second_all(1, tgt);
    auto xf = half.second_all(2, tgt);
    F8Term t = f8_term(P);
    CertifiedComplex diff = phi8 - eval_f8_half(t, U, xh, xf);
    CHECK(diff.abs_lb() == 0);
    CHECK(diff.err <= Real("1e-8"));

    if (!t.h1.empty()) {
      // halving the chain-rule factor must break the identity
      CertifiedComplex wrong = phi8 - eval_f8_half(t, U, xh, xf, Q(1, 2));
      CHECK(wrong.abs_lb() > 0);
    }
  }
}

TEST_CASE("doubling rewrites") {
  VarContext c1 = ctx_second_order_const(1);
  VarContext m1 = ctx_mixed(1);

  DoublingRewrite r00 = doubling_rewrite(HalfChar(1, 0), HalfChar(1, 0));
  SparsePoly want_scale = mono(c1, {{0, 5}}) + mono(c1, {{0, 1}, {1, 4}}, QI(-1));
  CHECK(r00.lhs_scale == want_scale);
  SparsePoly want_rhs = mono(m1, {{0, 3}, {2, 4}}) + mono(m1, {{0, 3}, {3, 4}}) +
                        mono(m1, {{0, 1}, {1, 2}, {2, 2}, {3, 2}}, QI(-2));
  CHECK(r00.rhs == want_rhs);

  Real tgt("1e-28");
  for (int g = 1; g <= 2; g++) {
    int n = 1 << g;
    for (Word a = 0; a < Word(n); a++)
      for (Word b = 0; b < Word(n); b++) {
        DoublingRewrite r = doubling_rewrite(HalfChar(g, a), HalfChar(g, b));

        // the conversion is quartic in the functions and even in each monomial
        for (const auto& [e, c] : r.rhs.terms()) {
          int xd = 0;
          bool even = true;
          for (int i = n; i < 2 * n; i++) {
            xd += e[i];
            if (e[i] % 2) even = false;
          }
          CHECK(xd == 4);
          CHECK(even);
        }

        int points = g == 1 ? (a == 0 && b == 0 ? 50 : 10) : 4;
        Sampler smp(616001 + g * 1000 + a * 16 + b);
        for (int trial = 0; trial < points; trial++) {
          EvalPoint pt = smp.sample_point(g);
          ThetaWorkspace ws(pt);
          auto U = ws.second_all(0, tgt);
          auto x = ws.second_all(1, tgt);
          auto d2 = ws.second_all(2, tgt);
          CertifiedComplex lhs = d2[a] * U[b] * eval_certified(r.lhs_scale, U);
          CertifiedComplex rhs = eval_certified(r.rhs, concat_vals(U, x));
          CertifiedComplex diff = lhs - rhs;
          CHECK(diff.abs_lb() == 0);
          CHECK(diff.err <= Real("1e-9"));
        }

        // z = 0 degeneration: both sides collapse to constants
        Sampler smp0(616901 + g * 100 + a * 16 + b);
        ThetaWorkspace ws0(EvalPoint(smp0.sample_tau(g), std::vector<CC>(g, CC(0))));
        auto U0 = ws0.second_all(0, tgt);
        CertifiedComplex lhs0 = U0[a] * U0[b] * eval_certified(r.lhs_scale, U0);
        CertifiedComplex rhs0 = eval_certified(r.rhs, concat_vals(U0, U0));
        CHECK((lhs0 - rhs0).abs_lb() == 0);
      }
  }

  CHECK_THROWS_AS(doubling_rewrite(HalfChar(1, 0), HalfChar(2, 0)), std::invalid_argument);
}

TEST_CASE("translation quartic bases") {
  QuarticBasis b3 = quartic_basis(3);
  REQUIRE(b3.elements.size() == 15);
  VarContext f3 = ctx_second_order_func(3);

  SparsePoly q1{f3};
  for (int s = 0; s < 8; s++) q1 = q1 + mono(f3, {{s, 4}});
  CHECK(b3.elements[0] == q1);

  CHECK(b3.elements[1] == mono(f3, {{0, 2}, {1, 2}}) + mono(f3, {{2, 2}, {3, 2}}) +
                              mono(f3, {{4, 2}, {5, 2}}) + mono(f3, {{6, 2}, {7, 2}}));
  CHECK(b3.elements[4] == mono(f3, {{0, 2}, {4, 2}}) + mono(f3, {{1, 2}, {5, 2}}) +
                              mono(f3, {{2, 2}, {6, 2}}) + mono(f3, {{3, 2}, {7, 2}}));
  CHECK(b3.elements[8] ==
        mono(f3, {{0, 1}, {2, 1}, {4, 1}, {6, 1}}) + mono(f3, {{1, 1}, {3, 1}, {5, 1}, {7, 1}}));
  CHECK(b3.elements[11] ==
        mono(f3, {{0, 1}, {1, 1}, {2, 1}, {3, 1}}) + mono(f3, {{4, 1}, {5, 1}, {6, 1}, {7, 1}}));
  CHECK(b3.elements[14] ==
        mono(f3, {{0, 1}, {3, 1}, {5, 1}, {6, 1}}) + mono(f3, {{1, 1}, {2, 1}, {4, 1}, {7, 1}}));

  for (const auto& e : b3.elements) {
    CHECK(e.degree() == 4);
    CHECK(e.homogeneous());
    for (const auto& [m, c] : e.terms()) CHECK(c == QI(1));
  }

  // independent enumeration: all shift-orbits of sign-balanced quartics
  CHECK(poly_text_set(b3.elements) == poly_text_set(orbit_quartics(3)));

  QuarticBasis b2 = quartic_basis(2);
  REQUIRE(b2.elements.size() == 5);
  VarContext f2 = ctx_second_order_func(2);
  SparsePoly p1{f2};
  for (int s = 0; s < 4; s++) p1 = p1 + mono(f2, {{s, 4}});
  CHECK(b2.elements[0] == p1);
  CHECK(b2.elements[1] == mono(f2, {{0, 2}, {1, 2}}) + mono(f2, {{2, 2}, {3, 2}}));
  CHECK(b2.elements[2] == mono(f2, {{0, 2}, {2, 2}}) + mono(f2, {{1, 2}, {3, 2}}));
  CHECK(b2.elements[3] == mono(f2, {{0, 2}, {3, 2}}) + mono(f2, {{1, 2}, {2, 2}}));
  CHECK(b2.elements[4] == mono(f2, {{0, 1}, {1, 1}, {2, 1}, {3, 1}}));
  CHECK(poly_text_set(b2.elements) == poly_text_set(orbit_quartics(2)));

  CHECK_THROWS_AS(quartic_basis(1), std::invalid_argument);
  CHECK_THROWS_AS(quartic_basis(4), std::invalid_argument);
}

TEST_CASE("two torsion translation equivariance") {
  Real tgt("1e-26");
  for (int g = 2; g <= 3; g++) {
    Sampler smp(717001 + g);
    PeriodMatrix tau = smp.sample_tau(g);
    std::vector<CC> z = smp.sample_z(g);
    ThetaWorkspace ws(EvalPoint(tau, z));
    auto x = ws.second_all(1, tgt);
    QuarticBasis basis = quartic_basis(g);

    std::vector<std::pair<Word, Word>> shifts;
    if (g == 2) {
      for (Word a = 0; a < 4; a++)
        for (Word b = 0; b < 4; b++)
          if (a || b) shifts.emplace_back(a, b);
    } else {
      shifts = {{1, 0}, {2, 3}, {7, 5}};
    }

    for (auto [a, b] : shifts) {
      ThetaWorkspace wst(EvalPoint(tau, translated_z(tau, z, a, b)));
      auto xt = wst.second_all(1, tgt);
      CertifiedComplex ratio;
      bool have = false;
      for (std::size_t j = 0; j < basis.elements.size(); j++) {
        CertifiedComplex at = eval_certified(basis.elements[j], xt);
        CertifiedComplex base = eval_certified(basis.elements[j], x);
        REQUIRE(base.abs_lb() > 0);
        CertifiedComplex r = at / base;
        if (!have) {
          ratio = r;
          have = true;
        } else {
          CHECK((r - ratio).abs_lb() == 0);
        }
      }
    }
  }
}

TEST_CASE("quartic coefficient extraction") {
  int g = 2;
  VarContext m2 = ctx_mixed(2);
  QuarticBasis basis = quartic_basis(g);

  SparsePoly u0_12 = mono(ctx_second_order_const(g), {{0, 12}});
  SparsePoly f8 = to_mixed(basis.elements[0], g, true) * to_mixed(u0_12, g, false);
  auto s = extract_quartic_coeffs({f8, ArgScale::FullZ}, g);
  REQUIRE(s.size() == 5);
  CHECK(s[0] == u0_12);
  for (int j = 1; j < 5; j++) CHECK(s[j].is_zero());

  CHECK_THROWS_AS(extract_quartic_coeffs({mono(m2, {{0, 12}, {4, 3}, {5, 1}}), ArgScale::FullZ}, g),
                  std::runtime_error);
  CHECK_THROWS_AS(extract_quartic_coeffs({mono(m2, {{0, 12}, {4, 4}}), ArgScale::FullZ}, g),
                  std::runtime_error);
  CHECK_THROWS_AS(extract_quartic_coeffs({mono(m2, {{0, 13}, {4, 3}}), ArgScale::FullZ}, g),
                  std::invalid_argument);
}

TEST_CASE("second order relation pipeline") {
  SplitPoly lifted = lift_to_split(2, schottky_poly(SchottkyRepr::SecondOrder));
  F8Term fs = f8_term(lifted);
  REQUIRE(fs.h1.empty());
  auto s = extract_quartic_coeffs(fs.quartic, 2);
  REQUIRE(s.size() == 5);
  for (const auto& sj : s) {
    REQUIRE(!sj.is_zero());
    CHECK(sj.degree() == 12);
    CHECK(sj.homogeneous());
    CHECK(sj.ctx().names.size() == 4);
  }

  // exact reconstruction
  QuarticBasis basis = quartic_basis(2);
  SparsePoly rebuilt{ctx_mixed(2)};
  for (int j = 0; j < 5; j++)
    rebuilt = rebuilt + to_mixed(s[j], 2, false) * to_mixed(basis.elements[j], 2, true);
  CHECK(rebuilt == fs.quartic.poly);

  // the assembled quartic vanishes identically on the base locus
  Real tgt("1e-28");
  Sampler smp(909001);
  for (int trial = 0; trial < 3; trial++) {
    EvalPoint pt = smp.sample_point(2);
    ThetaWorkspace ws(pt);
    auto U = ws.second_all(0, tgt);
    auto x = ws.second_all(1, tgt);
    CertifiedComplex v;
    for (int j = 0; j < 5; j++)
      v = v + eval_certified(s[j], U) * eval_certified(basis.elements[j], x);
    CHECK(v.abs_lb() == 0);
    CHECK(v.err <= Real("1e-9"));
  }
}

TEST_CASE("certified coefficient extraction at seeded points") {
  VarContext s1 = ctx_split(1);

  // base genus 1: leading structure of both variable families
  {
    Sampler smp(818001);
    PeriodMatrix tau = smp.sample_tau(1);
    std::vector<CC> z = smp.sample_z(1);
    FJExtractor ex(tau, z, Real("1e-34"));

    std::vector<CC> zh(z);
    for (auto& v : zh) v /= 2;
    ThetaWorkspace half(EvalPoint(tau, zh));
    Real tgt("1e-30");
    auto U = half.second_all(0, tgt);
    auto xh = half.second_all(1, tgt);
    auto xf = half.second_all(2, tgt);

    for (Word d = 0; d < 2; d++) {
      SplitPoly P(1, mono(s1, {{int(d), 1}}));
      auto c = ex.extract(P, {0, 8}, true);
      CHECK((c[0] - U[d]).abs_lb() == 0);
      CHECK(c[0].err <= Real("1e-9"));
      CHECK((c[1] - xf[d] * CC(2)).abs_lb() == 0);
      CHECK(c[1].err <= Real("1e-9"));

      auto all = ex.extract(P, {0, 2, 4, 6, 8}, false);
      CHECK((all[0] - U[d]).abs_lb() == 0);
      CHECK(all[1].abs_ub() <= Real("1e-9"));
      CHECK(all[2].abs_ub() <= Real("1e-9"));
      CHECK(all[3].abs_ub() <= Real("1e-9"));
      CHECK((all[4] - xf[d] * CC(2)).abs_lb() == 0);
    }
    for (Word e = 0; e < 2; e++) {
      SplitPoly P(1, mono(s1, {{2 + int(e), 1}}));
      auto c = ex.extract(P, {2}, true);
      CHECK((c[0] - xh[e] * CC(2)).abs_lb() == 0);
      CHECK(c[0].err <= Real("1e-9"));

      auto all = ex.extract(P, {0, 2, 4, 6, 8}, false);
      CHECK(all[0].abs_ub() <= Real("1e-9"));
      CHECK((all[1] - xh[e] * CC(2)).abs_lb() == 0);
      CHECK(all[2].abs_ub() <= Real("1e-9"));
      CHECK(all[3].abs_ub() <= Real("1e-9"));
      CHECK(all[4].abs_ub() <= Real("1e-9"));
    }
  }

  // base genus 2: one shared extractor covers variable pins, the relation's
  // vanishing coefficients, and the symbolic assembly
  {
    Sampler smp(818002);
    PeriodMatrix tau = smp.sample_tau(2);
    std::vector<CC> z = smp.sample_z(2);
    FJExtractor ex(tau, z, Real("1e-34"));
    VarContext s2 = ctx_split(2);

    std::vector<CC> zh(z);
    for (auto& v : zh) v /= 2;
    ThetaWorkspace half(EvalPoint(tau, zh));
    Real tgt("1e-30");
    auto U = half.second_all(0, tgt);
    auto xh = half.second_all(1, tgt);
    auto xf = half.second_all(2, tgt);

    {
      SplitPoly P(2, mono(s2, {{0, 1}}));
      auto c = ex.extract(P, {0, 8}, true);
      CHECK((c[0] - U[0]).abs_lb() == 0);
      CHECK((c[1] - xf[0] * CC(2)).abs_lb() == 0);
      CHECK(c[1].err <= Real("1e-9"));
    }
    {
      SplitPoly P(2, mono(s2, {{7, 1}}));
      auto c = ex.extract(P, {2}, true);
      CHECK((c[0] - xh[3] * CC(2)).abs_lb() == 0);
      CHECK(c[0].err <= Real("1e-9"));
    }

    SplitPoly lifted = lift_to_split(2, schottky_poly(SchottkyRepr::SecondOrder));
    F8Term fs = f8_term(lifted);

    CertifiedComplex phi8 = ex.extract(lifted, {8}, true)[0];
    CertifiedComplex assembled = eval_f8_half(fs, U, xh, xf);
    CHECK((phi8 - assembled).abs_lb() == 0);
    CHECK((phi8 - assembled).err <= Real("1e-8"));
    CHECK(phi8.abs_ub() <= Real("1e-8"));  // the relation vanishes identically

    auto low = ex.extract(lifted, {0, 2, 4, 6, 8}, false);
    for (const auto& c : low) {
      CHECK(c.abs_lb() == 0);
      CHECK(c.abs_ub() <= Real("1e-8"));
    }
  }
}

TEST_CASE("reachable exponent sets") {
  VarContext s1 = ctx_split(1);
  SplitPoly x0(1, mono(s1, {{0, 1}}));
  CHECK(reachable_exponents(x0, 40) == std::vector<int>({0, 8, 32}));
  SplitPoly x1(1, mono(s1, {{2, 1}}));
  CHECK(reachable_exponents(x1, 40) == std::vector<int>({2, 18}));
  SplitPoly x0p4(1, mono(s1, {{0, 4}}));
  CHECK(reachable_exponents(x0p4, 40) == std::vector<int>({0, 8, 16, 24, 32, 40}));

  SplitPoly lifted = lift_to_split(2, schottky_poly(SchottkyRepr::SecondOrder));
  CHECK(reachable_exponents(lifted, 32) == std::vector<int>({8, 16, 24, 32}));
}

TEST_CASE("period embedding") {
  Sampler smp(313001);
  PeriodMatrix tau = smp.sample_tau(2);
  std::vector<CC> z = smp.sample_z(2);
  CC w(Real(0), Real(2));
  PeriodMatrix Z = embed_period(tau, z, w);
  REQUIRE(Z.genus() == 3);
  CHECK(Z(0, 0) == w);
  for (int i = 0; i < 2; i++) {
    CHECK(Z(0, i + 1) == z[i]);
    CHECK(Z(i + 1, 0) == z[i]);
    for (int j = 0; j < 2; j++) CHECK(Z(i + 1, j + 1) == tau(i, j));
  }
  CHECK(Z.im_lambda_min_lb() > 0);
  CHECK_THROWS_AS(embed_period(tau, {CC(0)}, w), std::invalid_argument);
}
