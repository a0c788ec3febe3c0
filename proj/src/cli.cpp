#include "tb/cli.hpp"

#include "tb/bits.hpp"
#include "tb/cache.hpp"
#include "tb/coble.hpp"
#include "tb/codes.hpp"
#include "tb/evalnum.hpp"
#include "tb/fourier_jacobi.hpp"
#include "tb/invariants.hpp"
#include "tb/linalg.hpp"
#include "tb/periods.hpp"
#include "tb/poly.hpp"
#include "tb/theta.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace tb {

namespace {

// config or input problem: exit status 2, as opposed to a failed gate (1)
struct JobError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Report {
  std::vector<std::string> lines;
  bool gate_failed = false;

  void add(std::string s) { lines.push_back(std::move(s)); }
  void fail(std::string s) {
    gate_failed = true;
    lines.push_back(std::move(s));
  }
};

std::string num(const CertifiedComplex& v) {
  return real_str(v.value.real()) + " " + real_str(v.value.imag()) + " err " + real_str(v.err);
}

Word parse_bits(const std::string& s, int g, const char* what) {
  if (int(s.size()) != g)
    throw JobError(std::string(what) + ": expected " + std::to_string(g) + " bits, got '" + s +
                   "'");
  Word w = 0;
  for (char c : s) {
    if (c != '0' && c != '1') throw JobError(std::string(what) + ": bad bit character in '" + s + "'");
    w = (w << 1) | Word(c - '0');
  }
  return w;
}

SparsePoly read_poly_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw JobError("cannot open polynomial file " + path);
  try {
    return SparsePoly::read_text(is);
  } catch (const std::exception& e) {
    throw JobError(path + ": " + e.what());
  }
}

void dump_poly(Report& rep, const SparsePoly& p) {
  std::ostringstream os;
  p.write_text(os);
  std::istringstream is(os.str());
  std::string line;
  while (std::getline(is, line)) rep.add(line);
}

// point file: "genus g", then "tau i j re im" upper-triangle entries and
// optional "z i re im" lines; '#' comments
EvalPoint read_point_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw JobError("cannot open point file " + path);
  int g = 0, lineno = 0;
  std::map<std::pair<int, int>, CC> tau;
  std::map<int, CC> zent;
  std::string line;
  auto fail = [&](const std::string& msg, int field = 0) -> JobError {
    std::string where = path + ":" + std::to_string(lineno);
    if (field) where += ":field " + std::to_string(field);
    return JobError(where + ": " + msg);
  };
  auto read_cc = [&](std::istringstream& ls, int first_field) {
    std::string re, im;
    if (!(ls >> re)) throw fail("missing real part", first_field);
    if (!(ls >> im)) throw fail("missing imaginary part", first_field + 1);
    try {
      return CC(Real(re), Real(im));
    } catch (const std::exception&) {
      throw fail("bad number '" + re + " " + im + "'", first_field);
    }
  };
  while (std::getline(is, line)) {
    lineno++;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "genus") {
      if (!(ls >> g) || g < 1 || g > 4) throw fail("bad genus", 2);
    } else if (tag == "tau") {
      if (g == 0) throw fail("genus line must come first");
      int i, j;
      if (!(ls >> i >> j) || i < 0 || j < 0 || i >= g || j >= g) throw fail("bad tau index", 2);
      tau[{std::min(i, j), std::max(i, j)}] = read_cc(ls, 4);
    } else if (tag == "z") {
      if (g == 0) throw fail("genus line must come first");
      int i;
      if (!(ls >> i) || i < 0 || i >= g) throw fail("bad z index", 2);
      zent[i] = read_cc(ls, 3);
    } else {
      throw fail("unknown tag '" + tag + "'", 1);
    }
  }
  if (g == 0) throw JobError(path + ": missing genus line");
  for (int i = 0; i < g; i++)
    for (int j = i; j < g; j++)
      if (!tau.count({i, j}))
        throw JobError(path + ": tau entry " + std::to_string(i) + " " + std::to_string(j) +
                       " missing");
  std::vector<CC> full(g * g);
  for (int i = 0; i < g; i++)
    for (int j = 0; j < g; j++) full[i * g + j] = tau[{std::min(i, j), std::max(i, j)}];
  std::vector<CC> z(g, CC(0));
  for (const auto& [i, v] : zent) z[i] = v;
  try {
    return EvalPoint(PeriodMatrix(g, full), z);
  } catch (const std::exception& e) {
    throw JobError(path + ": " + e.what());
  }
}

void cmd_theta_eval(const JobConfig& cfg, const Real& tgt, Report& rep) {
  if (cfg.ts != 1 && cfg.ts != 2) throw JobError("ts must be 1 or 2");
  if (cfg.zs < 0) throw JobError("zs must be >= 0");
  std::optional<EvalPoint> p;
  if (!cfg.input_path.empty()) {
    p.emplace(read_point_file(cfg.input_path));
    rep.add("point file genus " + std::to_string(p->tau.genus()));
  } else {
    Sampler smp(cfg.seed);
    p.emplace(smp.sample_point(cfg.genus));
    rep.add("point seeded genus " + std::to_string(cfg.genus));
  }
  int g = p->tau.genus();
  Word e = cfg.eps.empty() ? 0 : parse_bits(cfg.eps, g, "eps");
  Word d = cfg.delta.empty() ? 0 : parse_bits(cfg.delta, g, "delta");
  ThetaWorkspace ws(*p);
  CertifiedComplex v = ws.theta(Characteristic(g, e, d), cfg.ts, cfg.zs, tgt);
  rep.add("theta " + bits_str(e, g) + " " + bits_str(d, g) + " ts " + std::to_string(cfg.ts) +
          " zs " + std::to_string(cfg.zs) + " value " + num(v));
}

void cmd_identity_check(const JobConfig& cfg, const Real& tgt, Report& rep) {
  if (cfg.genus < 1 || cfg.genus > 3) throw JobError("identity-check supports genus 1..3");
  IdentityKind kind;
  if (cfg.id == "riem") kind = IdentityKind::Riem;
  else if (cfg.id == "tt") kind = IdentityKind::ProdTT;
  else if (cfg.id == "add") kind = IdentityKind::Add;
  else if (cfg.id == "t8") kind = IdentityKind::T8;
  else throw JobError("unknown identity id '" + cfg.id + "' (riem|tt|add|t8)");

  const int g = cfg.genus;
  std::vector<IdentityId> ids;
  if (kind == IdentityKind::T8) {
    ids.push_back({kind, 0, 0});
  } else {
    std::vector<Word> es, ds;
    if (cfg.eps.empty())
      for (Word w = 0; w < (Word(1) << g); w++) es.push_back(w);
    else
      es.push_back(parse_bits(cfg.eps, g, "eps"));
    if (cfg.delta.empty())
      for (Word w = 0; w < (Word(1) << g); w++) ds.push_back(w);
    else
      ds.push_back(parse_bits(cfg.delta, g, "delta"));
    for (Word e : es)
      for (Word d : ds) ids.push_back({kind, e, d});
  }

  Sampler smp(cfg.seed);
  bool all_ok = true;
  for (int k = 0; k < cfg.samples; k++) {
    EvalPoint p = smp.sample_point(g);
    ThetaWorkspace ws(p);
    Real max_abs(0), max_err(0);
    bool ok = true;
    for (const auto& id : ids) {
      CertifiedComplex r = identity_residual(id, ws, tgt);
      Real a = abs(r.value);
      if (a > max_abs) max_abs = a;
      if (r.err > max_err) max_err = r.err;
      ok = ok && r.abs_lb() == 0;
    }
    rep.add("sample " + std::to_string(k) + " residuals " + std::to_string(ids.size()) +
            " max_abs " + real_str(max_abs) + " max_err " + real_str(max_err) +
            (ok ? " ok" : " FAIL"));
    all_ok = all_ok && ok;
  }
  std::string sum = "identity " + cfg.id + " genus " + std::to_string(g) + " samples " +
                    std::to_string(cfg.samples) + (all_ok ? " ok" : " FAIL");
  if (all_ok) rep.add(sum);
  else rep.fail(sum);
}

void cmd_wenum(const JobConfig& cfg, Report& rep) {
  if (cfg.code_path.empty()) throw JobError("wenum requires --code");
  BinaryCode c;
  try {
    c = load_code_file(cfg.code_path);
  } catch (const std::exception& e) {
    throw JobError(e.what());
  }
  rep.add("code " + c.name + " n " + std::to_string(c.n) + " k " + std::to_string(c.k));
  CodeCheck chk = validate_type2(c);
  if (!chk.ok) {
    rep.fail("type2 FAIL " + chk.reason + " witness " + chk.witness);
    return;
  }
  rep.add("type2 ok");
  WeightEnumerator w = weight_enumerator(c, cfg.genus, cfg.work_budget);
  rep.add("enumerator genus " + std::to_string(cfg.genus) + " terms " +
          std::to_string(w.poly.term_count()) + " degree " + std::to_string(w.poly.degree()));
  dump_poly(rep, w.poly);
}

void cmd_lattice_theta(const JobConfig& cfg, const Real& tgt, Report& rep) {
  if (cfg.code_path.empty()) throw JobError("lattice-theta requires --code");
  if (cfg.genus < 1 || cfg.genus > 2) throw JobError("lattice-theta supports genus 1..2");
  BinaryCode c;
  try {
    c = load_code_file(cfg.code_path);
  } catch (const std::exception& e) {
    throw JobError(e.what());
  }
  CodeCheck chk = validate_type2(c);
  if (!chk.ok) {
    rep.fail("type2 FAIL " + chk.reason + " witness " + chk.witness);
    return;
  }
  WeightEnumerator w = weight_enumerator(c, cfg.genus, cfg.work_budget);
  rep.add("code " + c.name + " genus " + std::to_string(cfg.genus));
  Sampler smp(cfg.seed);
  bool all_ok = true;
  for (int k = 0; k < cfg.samples; k++) {
    PeriodMatrix Z = smp.sample_tau(cfg.genus);
    CertifiedComplex direct = lattice_theta_direct(c, Z, tgt, cfg.work_budget);
    CertifiedComplex via = theta_via_enumerator(w, Z, tgt);
    CertifiedComplex diff = via - direct;
    bool ok = diff.abs_lb() == 0;
    rep.add("sample " + std::to_string(k) + " direct " + num(direct) + " enum " + num(via) +
            (ok ? " ok" : " FAIL"));
    all_ok = all_ok && ok;
  }
  std::string sum = std::string("cross-oracle ") + (all_ok ? "ok" : "FAIL");
  if (all_ok) rep.add(sum);
  else rep.fail(sum);
}

void cmd_invariant_basis(const JobConfig& cfg, Report& rep) {
  if (cfg.genus < 1 || cfg.genus > 3) throw JobError("invariant-basis supports genus 1..3");
  if (cfg.degree < 1 || cfg.degree > 40) throw JobError("degree out of range");
  std::vector<SparsePoly> els = invariant_basis(cfg.genus, cfg.degree);
  rep.add("basis genus " + std::to_string(cfg.genus) + " degree " + std::to_string(cfg.degree) +
          " elements " + std::to_string(els.size()));
  for (std::size_t i = 0; i < els.size(); i++) {
    const auto& lead = *els[i].terms().rbegin();
    std::vector<int> ms = mult_string(lead.first);
    while (!ms.empty() && ms.back() == 0) ms.pop_back();
    std::string m;
    for (std::size_t j = 0; j < ms.size(); j++) m += (j ? "," : "") + std::to_string(ms[j]);
    rep.add("element " + std::to_string(i + 1) + " terms " + std::to_string(els[i].term_count()) +
            " mult " + m);
    if (cfg.full) dump_poly(rep, els[i]);
  }
}

void cmd_schottky(const JobConfig& cfg, const Real& tgt, Report& rep) {
  SchottkyRepr repr;
  if (cfg.repr == "second") repr = SchottkyRepr::SecondOrder;
  else if (cfg.repr == "first") repr = SchottkyRepr::FirstOrder;
  else throw JobError("repr must be first|second");
  SparsePoly poly = schottky_poly(repr);
  rep.add("relation repr " + cfg.repr + " terms " + std::to_string(poly.term_count()));
  if (cfg.full) dump_poly(rep, poly);

  std::optional<WeightEnumerator> wd, we;
  if (repr == SchottkyRepr::SecondOrder) {
    wd = weight_enumerator(load_code_file(data_file("d16plus.code")), 3, cfg.work_budget);
    we = weight_enumerator(load_code_file(data_file("e8e8.code")), 3, cfg.work_budget);
  }
  Sampler smp(cfg.seed);
  bool all_ok = true;
  for (int k = 0; k < cfg.samples; k++) {
    PeriodMatrix tau = smp.sample_tau(3);
    ThetaWorkspace ws(EvalPoint(tau, std::vector<CC>(3, CC(0))));
    CertifiedComplex v;
    if (repr == SchottkyRepr::SecondOrder) {
      v = eval_certified(poly, ws.second_all(0, tgt));
    } else {
      std::vector<CertifiedComplex> vals;
      for (Word e = 0; e < 8; e++)
        for (Word d = 0; d < 8; d++)
          if (dot2(e, d) == 0) vals.push_back(ws.theta(Characteristic(3, e, d), 1, 0, tgt));
      v = eval_certified(poly, vals);
    }
    bool ok = v.abs_lb() == 0;
    std::string line = "sample " + std::to_string(k) + " value " + num(v);
    if (repr == SchottkyRepr::SecondOrder) {
      CertifiedComplex lat =
          theta_via_enumerator(*wd, tau, tgt) - theta_via_enumerator(*we, tau, tgt);
      CertifiedComplex diff = v - lat;
      ok = ok && diff.abs_lb() == 0;
      line += " latdiff " + num(diff);
    }
    rep.add(line + (ok ? " ok" : " FAIL"));
    all_ok = all_ok && ok;
  }
  std::string sum = std::string("schottky ") + (all_ok ? "ok" : "FAIL");
  if (all_ok) rep.add(sum);
  else rep.fail(sum);
}

void cmd_fj_pipeline(const JobConfig& cfg, const Real& tgt, Report& rep) {
  SparsePoly poly =
      cfg.input_path.empty() ? schottky_poly(SchottkyRepr::SecondOrder) : read_poly_file(cfg.input_path);
  if (poly.ctx().kind != "theta2const:g=3")
    throw JobError("fj-pipeline input must be a polynomial in the eight genus-3 constants");
  SplitPoly split = lift_to_split(2, poly);
  for (const auto& part : split_parts(split))
    rep.add("part index " + std::to_string(part.index) + " terms " +
            std::to_string(part.f.term_count()));
  F8Term f8 = f8_term(split);
  rep.add("quartic terms " + std::to_string(f8.quartic.poly.term_count()) + " h1 entries " +
          std::to_string(f8.h1.size()));
  std::vector<SparsePoly> coeffs = quartic_coefficients_cached(split, cfg.cache_dir);
  QuarticBasis qb = quartic_basis(2);
  rep.add("coefficients " + std::to_string(coeffs.size()));
  for (std::size_t j = 0; j < coeffs.size(); j++) {
    rep.add("coeff " + std::to_string(j + 1) + " terms " + std::to_string(coeffs[j].term_count()) +
            " degree " + std::to_string(coeffs[j].degree()));
    if (cfg.full) dump_poly(rep, coeffs[j]);
  }

  Sampler smp(cfg.seed);
  bool all_ok = true;
  for (int k = 0; k < cfg.samples; k++) {
    EvalPoint p = smp.sample_point(2);
    ThetaWorkspace ws(p);
    auto U = ws.second_all(0, tgt);
    auto x = ws.second_all(1, tgt);
    CertifiedComplex acc(CC(0));
    for (std::size_t j = 0; j < coeffs.size(); j++)
      acc = acc + eval_certified(coeffs[j], U) * eval_certified(qb.elements[j], x);
    bool ok = acc.abs_lb() == 0;
    rep.add("sample " + std::to_string(k) + " assembled " + num(acc) + (ok ? " ok" : " FAIL"));
    all_ok = all_ok && ok;
  }
  std::string sum = std::string("pipeline ") + (all_ok ? "ok" : "FAIL");
  if (all_ok) rep.add(sum);
  else rep.fail(sum);
}

void cmd_coble_s1(const JobConfig& cfg, const Real& tgt, Report& rep) {
  Sampler smp(cfg.seed);
  if (cfg.symbolic) {
    const SparsePoly& p = s1_theta2_poly();
    rep.add("s1 terms " + std::to_string(p.term_count()) + " degree " +
            std::to_string(p.degree()));
    if (cfg.full) dump_poly(rep, p);
    bool all_ok = true;
    int checks = std::min(cfg.samples, 3);
    for (int k = 0; k < checks; k++) {
      PeriodMatrix tau = smp.sample_tau(3);
      ThetaWorkspace ws(EvalPoint(tau, std::vector<CC>(3, CC(0))));
      CertifiedComplex direct = s1_numeric(tau, tgt);
      CertifiedComplex via = eval_certified(p, ws.second_all(0, tgt));
      CertifiedComplex diff = direct - via;
      bool ok = diff.abs_lb() == 0;
      rep.add("sample " + std::to_string(k) + " crosscheck " + num(diff) + (ok ? " ok" : " FAIL"));
      all_ok = all_ok && ok;
    }
    std::string sum = std::string("s1 symbolic ") + (all_ok ? "ok" : "FAIL");
    if (all_ok) rep.add(sum);
    else rep.fail(sum);
  } else {
    for (int k = 0; k < cfg.samples; k++) {
      PeriodMatrix tau = smp.sample_tau(3);
      CertifiedComplex v = s1_numeric(tau, tgt);
      rep.add("sample " + std::to_string(k) + " value " + num(v));
    }
  }
}

void cmd_membership(const JobConfig& cfg, Report& rep) {
  if (cfg.target_path.empty() || cfg.gen_paths.empty())
    throw JobError("membership requires --target and at least one --gen");
  SparsePoly target = read_poly_file(cfg.target_path);
  std::vector<std::pair<std::string, SparsePoly>> gens;
  for (const auto& gp : cfg.gen_paths)
    gens.emplace_back(std::filesystem::path(gp).stem().string(), read_poly_file(gp));
  MembershipReport mr;
  try {
    mr = membership_report(target, gens);
  } catch (const std::invalid_argument& e) {
    throw JobError(e.what());
  }
  std::istringstream is(mr.text());
  std::string line;
  while (std::getline(is, line)) rep.add(line);
}

void cmd_relation_check(const JobConfig& cfg, const Real& tgt, Report& rep) {
  std::vector<RelationTable> tables;
  if (cfg.table.empty()) {
    tables = relation_tables();
  } else {
    try {
      tables.push_back(relation_table(cfg.table));
    } catch (const std::exception& e) {
      throw JobError(e.what());
    }
  }

  // expansion of rtilde-basis rows into the copy32 basis for numeric checks
  auto expand = [&](const RelationTable& t) -> RelationTable {
    if (t.basis != "rtilde") return t;
    RelationTable out;
    out.name = t.name;
    out.basis = "copy32";
    std::map<std::string, Q> acc;
    for (const auto& [label, c] : t.entries) {
      std::string src = "Rtilde" + label.substr(2);  // Rt3 -> Rtilde3
      for (const auto& [clabel, cc] : relation_table(src).entries) acc[clabel] += c * cc;
    }
    for (const auto& [label, c] : acc)
      if (c != 0) out.entries.emplace_back(label, c);
    return out;
  };

  bool all_ok = true;
  for (const auto& t : tables) {
    std::string path = data_file("relations/" + t.name + ".rel");
    std::ifstream is(path, std::ios::binary);
    std::ostringstream raw;
    raw << is.rdbuf();
    std::ostringstream ser;
    write_relation(ser, t);
    bool ok = ser.str() == raw.str();
    all_ok = all_ok && ok;
    std::string line = "table " + t.name + " basis " + t.basis + " entries " +
                       std::to_string(t.entries.size()) + (ok ? " roundtrip ok" : " roundtrip FAIL");
    if (ok) rep.add(line);
    else rep.fail(line);

    if (cfg.enum_dir.empty()) {
      rep.add("table " + t.name + " combined skipped no-enumerators");
      continue;
    }
    RelationTable ct = expand(t);
    std::vector<std::pair<std::string, WeightEnumerator>> enums;
    std::vector<std::string> missing;
    for (const auto& [label, c] : ct.entries) {
      if (c == 0) continue;
      std::string f = cfg.enum_dir + "/" + label + ".wenum";
      if (!std::filesystem::exists(f)) {
        missing.push_back(label);
        continue;
      }
      enums.emplace_back(label, WeightEnumerator{4, read_poly_file(f)});
    }
    if (!missing.empty()) {
      std::string m;
      for (std::size_t i = 0; i < missing.size(); i++) m += (i ? "," : "") + missing[i];
      rep.add("table " + t.name + " combined skipped missing " + m);
      continue;
    }
    Sampler smp(cfg.seed);
    bool cok = true;
    for (int k = 0; k < std::min(cfg.samples, 5); k++) {
      PeriodMatrix Z = smp.sample_tau(4);
      CertifiedComplex v = combine_relation(ct, enums, Z, tgt);
      bool sok = v.abs_lb() == 0;
      rep.add("table " + t.name + " combined sample " + std::to_string(k) + " value " + num(v) +
              (sok ? " ok" : " FAIL"));
      cok = cok && sok;
    }
    if (!cok) {
      rep.fail("table " + t.name + " combined FAIL");
      all_ok = false;
    }
  }
  if (all_ok) rep.add("relation-check ok");
}

void cmd_divide(const JobConfig& cfg, Report& rep) {
  if (cfg.numerator_path.empty() || cfg.divisor_path.empty())
    throw JobError("divide requires --numerator and --divisor");
  SparsePoly n = read_poly_file(cfg.numerator_path);
  SparsePoly d = read_poly_file(cfg.divisor_path);
  DivisionReport dr;
  try {
    dr = divisibility_check(n, d);
  } catch (const std::invalid_argument& e) {
    throw JobError(e.what());
  }
  rep.add(std::string("division ") + (dr.exact ? "exact" : "inexact") + " quotient-terms " +
          std::to_string(dr.quotient.term_count()) + " remainder-terms " +
          std::to_string(dr.remainder.term_count()));
  if (cfg.full) {
    rep.add("quotient");
    dump_poly(rep, dr.quotient);
    if (!dr.exact) {
      rep.add("remainder");
      dump_poly(rep, dr.remainder);
    }
  }
}

}  // namespace

JobResult run_job(const JobConfig& cfg_in) {
  JobConfig cfg = cfg_in;
  Report rep;
  int status = 0;
  try {
    Real tgt;
    try {
      tgt = Real(cfg.target_err);
    } catch (const std::exception&) {
      throw JobError("target_err is not a number: '" + cfg.target_err + "'");
    }
    if (!(tgt > 0)) throw JobError("target_err must be > 0");
    if (cfg.work_budget < (std::uint64_t(1) << 16)) throw JobError("work_budget must be >= 2^16");
    if (cfg.samples < 1) throw JobError("samples must be >= 1");
    if (cfg.genus < 1 || cfg.genus > 4) throw JobError("genus must be in 1..4");
    if (cfg.cache_dir.empty())
      if (const char* env = std::getenv("TB_CACHE_DIR")) cfg.cache_dir = env;

    rep.add("job " + cfg.subcommand + " genus " + std::to_string(cfg.genus) + " seed " +
            std::to_string(cfg.seed) + " samples " + std::to_string(cfg.samples) +
            " target-err " + cfg.target_err + " budget " + std::to_string(cfg.work_budget));

    if (cfg.subcommand == "theta-eval") cmd_theta_eval(cfg, tgt, rep);
    else if (cfg.subcommand == "identity-check") cmd_identity_check(cfg, tgt, rep);
    else if (cfg.subcommand == "wenum") cmd_wenum(cfg, rep);
    else if (cfg.subcommand == "lattice-theta") cmd_lattice_theta(cfg, tgt, rep);
    else if (cfg.subcommand == "invariant-basis") cmd_invariant_basis(cfg, rep);
    else if (cfg.subcommand == "schottky") cmd_schottky(cfg, tgt, rep);
    else if (cfg.subcommand == "fj-pipeline") cmd_fj_pipeline(cfg, tgt, rep);
    else if (cfg.subcommand == "coble-s1") cmd_coble_s1(cfg, tgt, rep);
    else if (cfg.subcommand == "membership") cmd_membership(cfg, rep);
    else if (cfg.subcommand == "relation-check") cmd_relation_check(cfg, tgt, rep);
    else if (cfg.subcommand == "divide") cmd_divide(cfg, rep);
    else throw JobError("unknown subcommand '" + cfg.subcommand + "'");

    if (rep.gate_failed) status = 1;
  } catch (const JobError& e) {
    rep.add(std::string("error ") + e.what());
    status = 2;
  } catch (const UnreachableTarget& e) {
    rep.add(std::string("error precision-or-budget ") + e.what());
    status = 1;
  } catch (const std::exception& e) {
    rep.add(std::string("error ") + e.what());
    status = 2;
  }
  rep.add(status == 0 ? "status ok" : (status == 1 ? "status gate-failed" : "status error"));

  std::string out;
  if (cfg.format == JobConfig::Format::Text) out = "# " + cfg.subcommand + " report\n";
  for (const auto& l : rep.lines) out += l + "\n";
  return {status, out};
}

}  // namespace tb
