#pragma once
// Command-line front end: one JobConfig per process, each subcommand mapped
// 1:1 to a library operation, deterministic line-oriented reports.

#include <cstdint>
#include <string>
#include <vector>

namespace tb {

struct JobConfig {
  std::string subcommand;

  // shared knobs
  int genus = 1;
  std::string target_err = "1e-10";
  std::uint64_t work_budget = std::uint64_t(1) << 32;
  std::uint64_t seed = 1;
  std::string cache_dir;  // empty: TB_CACHE_DIR env, else caching disabled
  enum class Format { Text, Lines } format = Format::Text;
  int samples = 20;
  bool full = false;  // dump full polynomials instead of summaries

  // per-subcommand inputs
  std::string id;          // identity-check: riem | tt | add | t8
  std::string eps, delta;  // bit strings; empty = every characteristic
  int ts = 1, zs = 1;      // theta-eval argument scales
  std::string code_path;   // wenum, lattice-theta
  std::string input_path;  // theta-eval point file, fj-pipeline polynomial
  int degree = 12;         // invariant-basis
  std::string repr = "second";  // schottky: first | second
  bool symbolic = false;        // coble-s1: build the canonical polynomial
  std::string target_path;      // membership
  std::vector<std::string> gen_paths;
  std::string table;     // relation-check: restrict to one table
  std::string enum_dir;  // relation-check: ingested enumerator directory
  std::string numerator_path, divisor_path;  // divide
};

struct JobResult {
  int status = 0;  // 0 ok, 1 failed gate, 2 invalid config or input
  std::string report;
};

// Runs one job; never throws. All randomness flows from cfg.seed, so equal
// configs produce byte-identical reports.
JobResult run_job(const JobConfig& cfg);

// Parses argv into a JobConfig, runs it, prints the report to stdout.
int run_cli(int argc, char** argv);

}  // namespace tb
