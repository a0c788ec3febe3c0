#include "tb/bits.hpp"

#include <algorithm>
#include <set>

namespace tb {

std::vector<Characteristic> enumerate_chars(int g, CharFilter f) {
  if (g < 1) throw std::invalid_argument("genus must be positive");
  std::vector<Characteristic> out;
  Word n = Word(1) << g;
  for (Word e = 0; e < n; e++)
    for (Word d = 0; d < n; d++) {
      Characteristic m(g, e, d);
      if (f == CharFilter::All || (f == CharFilter::Even) == (m.parity() == Parity::Even))
        out.push_back(m);
    }
  return out;
}

AffineMap::AffineMap(int g, const std::vector<Word>& columns, Word s) : genus(g), shift(s) {
  if (g < 1 || g > 8 || (int)columns.size() != g) throw std::invalid_argument("AffineMap size");
  cols.fill(0);
  for (int i = 0; i < g; i++) cols[i] = columns[i];
  // invertibility: the g column images must span F2^g
  std::set<Word> span{0};
  for (int i = 0; i < g; i++) {
    std::set<Word> next = span;
    for (Word v : span) next.insert(v ^ cols[i]);
    span = next;
  }
  if ((int)span.size() != (1 << g)) throw std::invalid_argument("AffineMap linear part singular");
}

bool AffineMap::operator==(const AffineMap& o) const {
  if (genus != o.genus || shift != o.shift) return false;
  for (int i = 0; i < genus; i++)
    if (cols[i] != o.cols[i]) return false;
  return true;
}

AffineMap compose(const AffineMap& a, const AffineMap& b) {
  if (a.genus != b.genus) throw std::invalid_argument("genus mismatch");
  int g = a.genus;
  std::vector<Word> cols(g);
  for (int i = 0; i < g; i++) cols[i] = a.apply_linear(b.cols[i]);
  return AffineMap(g, cols, a.apply_linear(b.shift) ^ a.shift);
}

namespace {

struct MapLess {
  bool operator()(const AffineMap& x, const AffineMap& y) const {
    if (x.shift != y.shift) return x.shift < y.shift;
    for (int i = 0; i < x.genus; i++)
      if (x.cols[i] != y.cols[i]) return x.cols[i] < y.cols[i];
    return false;
  }
};

// breadth-first closure from generators
std::vector<AffineMap> closure(int g, std::vector<AffineMap> gens) {
  std::set<AffineMap, MapLess> seen(gens.begin(), gens.end());
  std::vector<AffineMap> frontier(gens.begin(), gens.end());
  while (!frontier.empty()) {
    std::vector<AffineMap> next;
    for (const auto& f : frontier)
      for (const auto& h : gens) {
        AffineMap c = compose(f, h);
        if (seen.insert(c).second) next.push_back(c);
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

std::vector<Word> identity_cols(int g) {
  std::vector<Word> cols(g);
  for (int i = 0; i < g; i++) cols[i] = Word(1) << (g - 1 - i);
  return cols;
}

}  // namespace

std::vector<AffineMap> enumerate_gl_group(int g) {
  if (g < 1 || g > 4) throw std::invalid_argument("group enumeration limited to g <= 4");
  std::vector<AffineMap> gens;
  gens.emplace_back(g, identity_cols(g), 0);
  // transvections: e_j += e_i for all i != j
  for (int i = 0; i < g; i++)
    for (int j = 0; j < g; j++) {
      if (i == j) continue;
      auto cols = identity_cols(g);
      cols[j] ^= Word(1) << (g - 1 - i);
      gens.emplace_back(g, cols, 0);
    }
  return closure(g, gens);
}

std::vector<AffineMap> enumerate_affine_group(int g) {
  if (g < 1 || g > 4) throw std::invalid_argument("group enumeration limited to g <= 4");
  std::vector<AffineMap> gens;
  gens.emplace_back(g, identity_cols(g), 0);
  for (int i = 0; i < g; i++)
    for (int j = 0; j < g; j++) {
      if (i == j) continue;
      auto cols = identity_cols(g);
      cols[j] ^= Word(1) << (g - 1 - i);
      gens.emplace_back(g, cols, 0);
    }
  for (int i = 0; i < g; i++) gens.emplace_back(g, identity_cols(g), Word(1) << i);
  return closure(g, gens);
}

std::vector<std::vector<Word>> affine_permutations(int g) {
  auto grp = enumerate_affine_group(g);
  std::vector<std::vector<Word>> perms;
  perms.reserve(grp.size());
  Word n = Word(1) << g;
  for (const auto& m : grp) {
    std::vector<Word> p(n);
    for (Word v = 0; v < n; v++) p[v] = m(v);
    perms.push_back(std::move(p));
  }
  return perms;
}

}  // namespace tb
