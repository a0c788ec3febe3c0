#pragma once
// Binary self-dual codes, genus-g complete weight enumerators, and two
// independent evaluations of the Construction-A lattice theta series.

#include "tb/evalnum.hpp"
#include "tb/periods.hpp"
#include "tb/poly.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tb {

struct BinaryCode {
  int n = 0, k = 0;
  std::vector<std::uint32_t> gen;  // k rows, bit j (from MSB side: column j = bit n-1-j)
  std::string name;

  int row_bit(int row, int col) const { return (gen[row] >> (n - 1 - col)) & 1u; }
};

// text format: header "n k name", then k rows of n characters over {0,1};
// '#' starts a comment line
BinaryCode read_code(std::istream& is);
BinaryCode load_code_file(const std::string& path);

// resolves a bundled data file (TB_DATA_DIR env overrides the build-time root)
std::string data_file(const std::string& name);

struct CodeCheck {
  bool ok;
  std::string reason;   // empty when ok
  std::string witness;  // offending codeword / generator pair, printable
};

// self-dual + doubly-even, verified exhaustively over all 2^k codewords
CodeCheck validate_type2(const BinaryCode& c);

struct WeightEnumerator {
  int genus;
  SparsePoly poly;  // ctx_code(genus), homogeneous of degree n
};

// W(x) = sum over codeword g-tuples of the product over columns of x_profile;
// Gray-code single-toggle sweep with incremental column-profile counts
WeightEnumerator weight_enumerator(const BinaryCode& c, int g, std::uint64_t work_budget);

std::uint64_t default_work_budget();  // 2^32: admits k*g <= 32

// theta of Lambda(C) = {x/sqrt2 : x mod 2 in C} at Z in H_g, g <= 2, by direct
// vector enumeration: exact shell / pair-correlation counts, then a short
// certified exponential sum with a rigorous lattice tail bound
CertifiedComplex lattice_theta_direct(const BinaryCode& c, const PeriodMatrix& Z,
                                      const Real& target_err, std::uint64_t work_budget);

// theta via W^g_C evaluated at the second-order theta constants of Z
CertifiedComplex theta_via_enumerator(const WeightEnumerator& w, const PeriodMatrix& Z,
                                      const Real& target_err);

}  // namespace tb
