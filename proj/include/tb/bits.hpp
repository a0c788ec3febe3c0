#pragma once
// F2 vector-space machinery: characteristics, parities, pairings, and the
// finite groups GL(g,F2) / AGL(g,F2) acting on characteristic indices.
//
// Convention (single source of truth for every ordering in the project):
// a length-g bit vector (c_0,...,c_{g-1}) is stored as the machine word
// whose bit (g-1-i) is coordinate c_i, i.e. the word equals the integer
// value of the string "c_0 c_1 ... c_{g-1}" read as binary. Enumerating
// words 0..2^g-1 therefore enumerates vectors in lexicographic order of
// their printed form, and the printed form matches subscripts like x_011.

#include <cstdint>
#include <string>
#include <vector>
#include <array>
#include <bit>
#include <stdexcept>

namespace tb {

using Word = std::uint32_t;

inline int popcount(Word w) { return std::popcount(w); }

// coordinate i of a length-g vector stored as word w
inline int coord(Word w, int g, int i) { return (w >> (g - 1 - i)) & 1u; }

inline Word set_coord(Word w, int g, int i, int v) {
  Word m = Word(1) << (g - 1 - i);
  return v ? (w | m) : (w & ~m);
}

inline int dot2(Word a, Word b) { return popcount(a & b) & 1; }

inline std::string bits_str(Word w, int g) {
  std::string s(g, '0');
  for (int i = 0; i < g; i++) s[i] = char('0' + coord(w, g, i));
  return s;
}

struct HalfChar {
  int genus;
  Word eps;
  HalfChar(int g, Word e) : genus(g), eps(e) {
    if (g < 1 || e >= (Word(1) << g)) throw std::invalid_argument("HalfChar out of range");
  }
};

enum class Parity { Even, Odd };

struct Characteristic {
  int genus;
  Word eps, delta;
  Characteristic(int g, Word e, Word d) : genus(g), eps(e), delta(d) {
    if (g < 1 || e >= (Word(1) << g) || d >= (Word(1) << g))
      throw std::invalid_argument("Characteristic out of range");
  }
  Parity parity() const { return dot2(eps, delta) ? Parity::Odd : Parity::Even; }
};

inline Parity parity(const Characteristic& m) { return m.parity(); }

enum class CharFilter { All, Even, Odd };

std::vector<Characteristic> enumerate_chars(int g, CharFilter f);

// Invertible linear map + shift on F2^g, acting as delta -> M*delta + shift.
struct AffineMap {
  int genus;
  std::array<Word, 8> cols;  // cols[i] = image of basis vector e_i (coordinate i)
  Word shift;

  AffineMap(int g, const std::vector<Word>& columns, Word s);
  Word apply_linear(Word v) const {
    Word r = 0;
    for (int i = 0; i < genus; i++)
      if (coord(v, genus, i)) r ^= cols[i];
    return r;
  }
  Word operator()(Word v) const { return apply_linear(v) ^ shift; }
  bool operator==(const AffineMap& o) const;
};

AffineMap compose(const AffineMap& a, const AffineMap& b);  // x -> a(b(x))

std::vector<AffineMap> enumerate_gl_group(int g);      // shift = 0 members
std::vector<AffineMap> enumerate_affine_group(int g);  // 2^g * |GL(g,2)|

// All AGL(g,F2) maps as index permutations perm[v] = image of v.
std::vector<std::vector<Word>> affine_permutations(int g);

}  // namespace tb
