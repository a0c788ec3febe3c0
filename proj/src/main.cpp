#include "tb/cli.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Certified theta-function toolbox: identities, code enumerators, "
               "the genus-3 relation, its coefficient pipeline, and exact reports"};
  app.require_subcommand(1);

  tb::JobConfig cfg;
  std::string format = "text";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--genus", cfg.genus, "ambient genus");
    sub->add_option("--target-err", cfg.target_err, "evaluation error target (default 1e-10)");
    sub->add_option("--budget", cfg.work_budget, "work budget, >= 2^16 (default 2^32)");
    sub->add_option("--seed", cfg.seed, "sampling seed (default 1)");
    sub->add_option("--samples", cfg.samples, "number of sampled points (default 20)");
    sub->add_option("--cache-dir", cfg.cache_dir, "stage cache directory (default $TB_CACHE_DIR)");
    sub->add_option("--format", format, "report format: text | lines");
    sub->add_flag("--dump", cfg.full, "include full polynomials in the report");
    return sub;
  };

  auto* te = add_common(app.add_subcommand("theta-eval", "certified theta value at a point"));
  te->add_option("--eps", cfg.eps, "characteristic eps bits");
  te->add_option("--delta", cfg.delta, "characteristic delta bits");
  te->add_option("--ts", cfg.ts, "tau scale, 1 or 2");
  te->add_option("--zs", cfg.zs, "z scale, >= 0");
  te->add_option("--point", cfg.input_path, "point file (defaults to a seeded sample)");

  auto* ic = add_common(app.add_subcommand("identity-check", "residuals of an addition identity"));
  ic->add_option("--id", cfg.id, "riem | tt | add | t8")->required();
  ic->add_option("--eps", cfg.eps, "restrict to one eps word");
  ic->add_option("--delta", cfg.delta, "restrict to one delta word");

  auto* we = add_common(app.add_subcommand("wenum", "genus-g complete weight enumerator"));
  we->add_option("--code", cfg.code_path, "code file")->required();

  auto* lt = add_common(app.add_subcommand("lattice-theta", "lattice theta two ways"));
  lt->add_option("--code", cfg.code_path, "code file")->required();

  auto* ib = add_common(app.add_subcommand("invariant-basis", "half-weight invariant basis"));
  ib->add_option("--degree", cfg.degree, "homogeneous degree (default 12)");

  auto* sc = add_common(app.add_subcommand("schottky", "degree-16 relation at sampled points"));
  sc->add_option("--repr", cfg.repr, "first | second (default second)");

  auto* fj = add_common(app.add_subcommand("fj-pipeline", "split, degree-8 term, coefficients"));
  fj->add_option("--input", cfg.input_path, "genus-3 constant polynomial (default: the relation)");

  auto* cs = add_common(app.add_subcommand("coble-s1", "the 7-factor product form"));
  cs->add_flag("--symbolic", cfg.symbolic, "build and cross-check the canonical polynomial");

  auto* mb = add_common(app.add_subcommand("membership", "exact span membership report"));
  mb->add_option("--target", cfg.target_path, "target polynomial file")->required();
  mb->add_option("--gen", cfg.gen_paths, "generator polynomial file (repeatable)")->required();

  auto* rc = add_common(app.add_subcommand("relation-check", "bundled table integrity"));
  rc->add_option("--table", cfg.table, "restrict to one table");
  rc->add_option("--enum-dir", cfg.enum_dir, "directory of ingested <label>.wenum files");

  auto* dv = add_common(app.add_subcommand("divide", "exact divisibility report"));
  dv->add_option("--numerator", cfg.numerator_path, "numerator polynomial file")->required();
  dv->add_option("--divisor", cfg.divisor_path, "divisor polynomial file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (format == "lines") cfg.format = tb::JobConfig::Format::Lines;
  else if (format != "text") {
    std::cerr << "error unknown format '" << format << "'\n";
    return 2;
  }
  // subcommands with a fixed ambient genus
  if (cfg.subcommand == "schottky" || cfg.subcommand == "fj-pipeline" ||
      cfg.subcommand == "coble-s1")
    cfg.genus = 3;

  tb::JobResult r = tb::run_job(cfg);
  std::cout << r.report;
  return r.status;
}
