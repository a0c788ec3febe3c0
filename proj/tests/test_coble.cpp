#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tb/cache.hpp"
#include "tb/coble.hpp"
#include "tb/evalnum.hpp"
#include "tb/invariants.hpp"
#include "tb/theta.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace tb;

namespace {

std::string file_bytes(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(bool(is));
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

SparsePoly random_homog(const VarContext& ctx, int degree, int terms, std::mt19937& rng) {
  SparsePoly p{ctx};
  std::uniform_int_distribution<int> var(0, ctx.nvars() - 1);
  std::uniform_int_distribution<int> coef(1, 9);
  std::uniform_int_distribution<int> sign(0, 1);
  for (int t = 0; t < terms; t++) {
    ExpVec e(ctx.nvars(), 0);
    for (int d = 0; d < degree; d++) e[var(rng)]++;
    long c = coef(rng) * (sign(rng) ? 1 : -1);
    p.add_term(e, QI(c));
  }
  return p;
}

}  // namespace

TEST_CASE("relation tables round trip exactly") {
  auto tables = relation_tables();
  REQUIRE(tables.size() == 12);

  CHECK(relation_table("Rtilde2").coeff("C1") == Q(-5));
  CHECK(relation_table("Rtilde1").entries.size() == 7);
  CHECK(relation_table("Rtilde2").entries.size() == 8);
  CHECK(relation_table("Rtilde3").entries.size() == 15);
  CHECK(relation_table("Rtilde4").entries.size() == 16);
  CHECK(relation_table("Rtilde5").entries.size() == 19);
  CHECK(relation_table("Rtilde5").coeff("C44") == Q(409600));
  CHECK(relation_table("Rtilde4").coeff("C82") == Q(21504));

  const RelationTable& bn = relation_table("BigNorm");
  CHECK(bn.coeff("Rt1") == Q(151595494160));
  CHECK(bn.coeff("Rt5") == Q(230972544));
  CHECK(bn.note.find("573102233555") != std::string::npos);

  const RelationTable& ar = relation_table("alphaR");
  CHECK(ar.entries.size() == 19);
  CHECK(ar.coeff("C1") == Q(5765253288));
  CHECK(ar.coeff("C82") == Q(127956347904));
  CHECK(ar.note.find("608164983684720") != std::string::npos);

  CHECK(relation_table("R1").coeff("Rt4") == Q(-29481, 500158));
  CHECK(relation_table("R4").coeff("Rt5") == Q(77, 6001896));
  CHECK(!relation_table("R4").note.empty());
  CHECK(relation_table("R5").coeff("Rt1") == Q(-1, 32));
  CHECK(relation_table("R5").note.find("R0") != std::string::npos);
  CHECK(relation_table("R3").coeff("Rt1") == Q(1));

  CHECK_THROWS_AS(relation_table("nonexistent"), std::invalid_argument);

  // byte-exact round trip through the text format
  for (const auto& t : tables) {
    std::string orig = file_bytes(data_file("relations/" + t.name + ".rel"));
    std::istringstream is(orig);
    RelationTable back = read_relation(is);
    std::ostringstream os;
    write_relation(os, back);
    CHECK(os.str() == orig);
    CHECK(back.name == t.name);
    CHECK(back.basis == t.basis);
    CHECK(back.entries == t.entries);
  }
}

TEST_CASE("polynomial square roots") {
  VarContext c1 = ctx_second_order_const(2);

  SparsePoly f{c1};
  f.add_term({2, 0, 0, 0}, QI(1));
  f.add_term({0, 1, 1, 0}, QI(-3));
  f.add_term({0, 0, 0, 2}, QI(2));
  auto r = poly_sqrt(f * f);
  REQUIRE(r.has_value());
  CHECK((*r) * (*r) == f * f);

  CHECK(!poly_sqrt(SparsePoly::monomial(c1, {1, 0, 0, 0}, QI(1))).has_value());
  CHECK(!poly_sqrt(SparsePoly::monomial(c1, {2, 0, 0, 0}, QI(2))).has_value());
  CHECK(!poly_sqrt(SparsePoly::monomial(c1, {2, 0, 0, 0}, QI(-1))).has_value());
  SparsePoly notsq = SparsePoly::monomial(c1, {2, 0, 0, 0}, QI(1)) +
                     SparsePoly::monomial(c1, {0, 0, 0, 2}, QI(1));
  CHECK(!poly_sqrt(notsq).has_value());

  auto zero = poly_sqrt(SparsePoly(c1));
  REQUIRE(zero.has_value());
  CHECK(zero->is_zero());
}

TEST_CASE("theta constant product expression") {
  const SparsePoly& g8 = theta_product_poly();
  CHECK(g8.degree() == 8);
  CHECK(g8.homogeneous());
  CHECK(g8.ctx().nvars() == 8);

  // its square equals the product of the eight square-table forms up to a constant
  // multiple of the degree-16 relation (the square tracks the product only on the
  // constants' locus, where the relation vanishes)
  VarContext ctx = ctx_second_order_const(3);
  SparsePoly prod = SparsePoly::monomial(ctx, ExpVec(8, 0), QI(1));
  for (const auto& [m, p] : square_table(3))
    if (m.eps == 0) prod = prod * p;
  SparsePoly gap = prod - g8 * g8;
  CHECK(!gap.is_zero());
  DivisionReport dr = divisibility_check(gap, schottky_poly(SchottkyRepr::SecondOrder));
  CHECK(dr.exact);
  CHECK(dr.quotient.degree() == 0);

  // independent numeric spot checks away from the construction gate's seeds
  Sampler smp(121007);
  Real tgt("1e-24");
  for (int trial = 0; trial < 3; trial++) {
    PeriodMatrix tau = smp.sample_tau(3);
    ThetaWorkspace ws(EvalPoint(tau, std::vector<CC>(3, CC(0))));
    auto th = ws.theta_all_delta(0, 1, 0, tgt);
    CertifiedComplex direct(CC(1));
    for (Word d = 0; d < 8; d++) direct = direct * th[d];
    CertifiedComplex viaU = eval_certified(g8, ws.second_all(0, tgt));
    CertifiedComplex diff = direct - viaU;
    CHECK(diff.abs_lb() == 0);
    CHECK(diff.err <= Real("1e-10"));
  }
}

TEST_CASE("s1 symbolic form agrees with the product") {
  const SparsePoly& p28 = s1_theta2_poly();
  CHECK(p28.degree() == 28);
  CHECK(p28.homogeneous());
  CHECK(p28.term_count() == 11848);  // frozen canonical count of this reduction

  // canonical-form idempotence through the text codec
  CHECK(SparsePoly::from_text(p28.to_text()) == p28);

  Sampler smp(121009);
  Real tgt("1e-26");
  for (int trial = 0; trial < 5; trial++) {
    PeriodMatrix tau = smp.sample_tau(3);
    CertifiedComplex direct = s1_numeric(tau, tgt);
    ThetaWorkspace ws(EvalPoint(tau, std::vector<CC>(3, CC(0))));
    CertifiedComplex viaU = eval_certified(p28, ws.second_all(0, tgt));
    CertifiedComplex diff = direct - viaU;
    CHECK(diff.abs_lb() == 0);
    CHECK(diff.err <= Real("1e-8"));
  }

  CHECK_THROWS_AS(s1_numeric(Sampler(121011).sample_tau(2), tgt), std::invalid_argument);
}

TEST_CASE("membership reports") {
  SparsePoly S = schottky_poly(SchottkyRepr::SecondOrder);
  auto F = invariant_basis(3, 12);
  REQUIRE(F.size() == 6);
  std::vector<std::pair<std::string, SparsePoly>> gens;
  for (std::size_t i = 0; i < F.size(); i++)
    gens.emplace_back("SF" + std::to_string(i + 1), S * F[i]);

  MembershipReport rep = membership_report(gens[0].second, gens);
  CHECK(rep.in_span);
  CHECK(rep.coefficients[0].second == QI(1));
  for (std::size_t i = 1; i < gens.size(); i++) CHECK(rep.coefficients[i].second == QI(0));
  CHECK(rep.residual.is_zero());
  CHECK(rep.text().find("in-span") != std::string::npos);

  // synthetic construct-then-solve instances
  VarContext ctx = ctx_second_order_const(3);
  std::mt19937 rng(900913);
  for (int inst = 0; inst < 4; inst++) {
    std::vector<std::pair<std::string, SparsePoly>> g;
    for (int j = 0; j < 8; j++)
      g.emplace_back("g" + std::to_string(j), random_homog(ctx, 28, 24, rng));
    std::uniform_int_distribution<int> num(-20, 20);
    std::uniform_int_distribution<int> den(1, 12);
    std::vector<QI> chosen;
    SparsePoly target{ctx};
    for (int j = 0; j < 8; j++) {
      Q f(num(rng), den(rng));
      f.canonicalize();
      QI c{f};
      chosen.push_back(c);
      target = target + g[j].second * c;
    }
    MembershipReport r = membership_report(target, g);
    REQUIRE(r.in_span);
    for (int j = 0; j < 8; j++) CHECK(r.coefficients[j].second == chosen[j]);
  }

  // certified failure with residual
  std::vector<std::pair<std::string, SparsePoly>> small;
  small.emplace_back("a", SparsePoly::monomial(ctx, [] {
                       ExpVec e(8, 0);
                       e[1] = 28;
                       return e;
                     }(), QI(1)));
  SparsePoly off = SparsePoly::monomial(ctx, [] {
    ExpVec e(8, 0);
    e[0] = 28;
    return e;
  }(), QI(1));
  MembershipReport miss = membership_report(off, small);
  CHECK(!miss.in_span);
  CHECK(miss.residual == off);
  CHECK(miss.text().find("not-in-span") != std::string::npos);

  CHECK_THROWS_AS(membership_report(S, gens), std::invalid_argument);  // degree mismatch
}

TEST_CASE("combined relations through lattice thetas") {
  RelationTable empty{"empty", "codes", {}, ""};
  CertifiedComplex z0 = combine_relation(empty, {}, Sampler(121013).sample_tau(2), Real("1e-10"));
  CHECK(z0.value == CC(0));
  CHECK(z0.err == 0);

  RelationTable diff{"schottky_pair", "codes", {{"e8e8", Q(1)}, {"d16plus", Q(-1)}}, ""};
  CHECK_THROWS_AS(combine_relation(diff, {}, Sampler(121013).sample_tau(3), Real("1e-10")),
                  std::invalid_argument);

  std::vector<std::pair<std::string, WeightEnumerator>> ens;
  ens.emplace_back("e8e8",
                   weight_enumerator(load_code_file(data_file("e8e8.code")), 3,
                                     default_work_budget()));
  ens.emplace_back("d16plus",
                   weight_enumerator(load_code_file(data_file("d16plus.code")), 3,
                                     default_work_budget()));

  Sampler smp(121017);
  PeriodMatrix tau = smp.sample_tau(3);
  CertifiedComplex via_codes = combine_relation(diff, ens, tau, Real("1e-12"));
  ThetaWorkspace ws(EvalPoint(tau, std::vector<CC>(3, CC(0))));
  CertifiedComplex via_poly =
      eval_certified(schottky_poly(SchottkyRepr::SecondOrder), ws.second_all(0, Real("1e-26")));
  CertifiedComplex d = via_codes - via_poly;
  CHECK(d.abs_lb() == 0);
  CHECK(d.err <= Real("1e-9"));
}

TEST_CASE("divisibility reports") {
  VarContext fx = ctx_second_order_func(1);
  SparsePoly x0 = SparsePoly::variable(fx, 0), x1 = SparsePoly::variable(fx, 1);

  DivisionReport r1 = divisibility_check(x0 * x0 - x1 * x1, x0 - x1);
  CHECK(r1.exact);
  CHECK(r1.quotient == x0 + x1);
  CHECK(r1.remainder.is_zero());

  SparsePoly p = (x0 + x1 * QI(3)).pow(3);
  DivisionReport r2 = divisibility_check(p, p);
  CHECK(r2.exact);
  CHECK(r2.quotient == SparsePoly::monomial(fx, {0, 0}, QI(1)));

  VarContext c3 = ctx_second_order_const(3);
  std::mt19937 rng(121019);
  for (int t = 0; t < 3; t++) {
    SparsePoly a = random_homog(c3, 4, 6, rng);
    SparsePoly b = random_homog(c3, 5, 7, rng);
    if (a.is_zero() || b.is_zero()) continue;
    DivisionReport r = divisibility_check(a * b, a);
    CHECK(r.exact);
    CHECK(r.quotient == b);
  }

  DivisionReport fail = divisibility_check(x0 * x0 + x1 * x1, x0 - x1);
  CHECK(!fail.exact);
  CHECK(!fail.remainder.is_zero());
  CHECK(fail.quotient * (x0 - x1) + fail.remainder == x0 * x0 + x1 * x1);

  CHECK_THROWS_AS(divisibility_check(x0 + x0 * x1, x0), std::invalid_argument);
}

TEST_CASE("cached pipeline stages") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

  std::string dir = (std::filesystem::temp_directory_path() / "tb_coble_stage_test").string();
  std::filesystem::remove_all(dir);

  StageCache cache(dir);
  CHECK(!cache.load("key1").has_value());
  cache.store("key1", "payload contents\n");
  auto back = cache.load("key1");
  REQUIRE(back.has_value());
  CHECK(*back == "payload contents\n");

  StageCache off("");
  off.store("k", "v");
  CHECK(!off.load("k").has_value());

  SplitPoly lifted = lift_to_split(2, schottky_poly(SchottkyRepr::SecondOrder));
  auto first = quartic_coefficients_cached(lifted, dir);
  auto second = quartic_coefficients_cached(lifted, dir);
  auto direct = extract_quartic_coeffs(f8_term(lifted).quartic, 2);
  REQUIRE(first.size() == 5);
  CHECK(first == second);
  for (int j = 0; j < 5; j++) CHECK(first[j] == direct[j]);

  std::size_t stage_files = 0;
  for (auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".stage") stage_files++;
  CHECK(stage_files == 2);

  std::filesystem::remove_all(dir);
}
