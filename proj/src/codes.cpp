#include "tb/codes.hpp"

#include "tb/bits.hpp"
#include "tb/theta.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace tb {

namespace {

int f2_rank(std::vector<std::uint32_t> rows) {
  int rank = 0;
  for (std::size_t i = 0; i < rows.size(); i++) {
    std::size_t p = i;
    while (p < rows.size() && rows[p] == 0) p++;
    if (p == rows.size()) break;
    std::swap(rows[i], rows[p]);
    std::uint32_t lead = std::uint32_t(1) << (31 - std::countl_zero(rows[i]));
    for (std::size_t j = 0; j < rows.size(); j++)
      if (j != i && (rows[j] & lead)) rows[j] ^= rows[i];
    rank++;
  }
  return rank;
}

std::string word_bits(std::uint32_t w, int n) {
  std::string s(n, '0');
  for (int j = 0; j < n; j++)
    if ((w >> (n - 1 - j)) & 1u) s[j] = '1';
  return s;
}

}  // namespace

BinaryCode read_code(std::istream& is) {
  BinaryCode c;
  std::string line;
  auto next = [&]() -> std::string {
    while (std::getline(is, line)) {
      auto h = line.find('#');
      if (h != std::string::npos) line.erase(h);
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
      if (!line.empty()) return line;
    }
    throw std::runtime_error("code file: unexpected end");
  };
  {
    std::istringstream hs(next());
    if (!(hs >> c.n >> c.k >> c.name)) throw std::runtime_error("code file: bad header");
  }
  if (c.n < 1 || c.n > 32 || c.k < 0 || c.k > c.n) throw std::runtime_error("code file: bad size");
  for (int r = 0; r < c.k; r++) {
    std::string row = next();
    if ((int)row.size() != c.n) throw std::runtime_error("code file: row length");
    std::uint32_t w = 0;
    for (int j = 0; j < c.n; j++) {
      if (row[j] != '0' && row[j] != '1') throw std::runtime_error("code file: row chars");
      w = (w << 1) | std::uint32_t(row[j] - '0');
    }
    c.gen.push_back(w);
  }
  if (f2_rank(c.gen) != c.k) throw std::runtime_error("code file: generator rank deficient");
  return c;
}

BinaryCode load_code_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open code file " + path);
  return read_code(f);
}

std::string data_file(const std::string& name) {
  if (const char* env = std::getenv("TB_DATA_DIR")) return std::string(env) + "/" + name;
#ifdef TB_DATA_DIR_DEFAULT
  return std::string(TB_DATA_DIR_DEFAULT) + "/" + name;
#else
  return "data/" + name;
#endif
}

CodeCheck validate_type2(const BinaryCode& c) {
  if (f2_rank(c.gen) != c.k) throw std::invalid_argument("generator matrix rank deficient");
  if (c.n != 2 * c.k)
    return {false, "self-dual", "dimension " + std::to_string(c.k) + " != n/2"};
  for (int i = 0; i < c.k; i++)
    for (int j = i; j < c.k; j++)
      if (std::popcount(c.gen[i] & c.gen[j]) & 1)
        return {false, "self-dual",
                "generators " + std::to_string(i) + "," + std::to_string(j) + " not orthogonal"};
  // exhaustive doubly-even sweep over all codewords
  for (std::uint32_t m = 0; m < (std::uint32_t(1) << c.k); m++) {
    std::uint32_t w = 0;
    for (int r = 0; r < c.k; r++)
      if ((m >> r) & 1u) w ^= c.gen[r];
    if (std::popcount(w) % 4 != 0) return {false, "doubly-even", word_bits(w, c.n)};
  }
  return {true, "", ""};
}

std::uint64_t default_work_budget() { return std::uint64_t(1) << 32; }

WeightEnumerator weight_enumerator(const BinaryCode& c, int g, std::uint64_t work_budget) {
  if (g < 1 || g > 8) throw std::invalid_argument("weight_enumerator genus");
  const int K = c.k * g;
  if (K >= 64 || (std::uint64_t(1) << K) > work_budget)
    throw UnreachableTarget("weight_enumerator: work budget exceeded (2^" + std::to_string(K) +
                             " tuples)");
  const int np = 1 << g;
  // support columns per generator row
  std::vector<std::vector<int>> sup(c.k);
  for (int r = 0; r < c.k; r++)
    for (int j = 0; j < c.n; j++)
      if (c.row_bit(r, j)) sup[r].push_back(j);

  std::vector<std::uint8_t> prof(c.n, 0);      // column profiles
  std::vector<int> cnt(np, 0);                 // multiset of profiles
  cnt[0] = c.n;

  const bool packed = g <= 3;
  std::unordered_map<std::uint64_t, std::uint64_t> acc_packed;
  std::map<ExpVec, std::uint64_t, GrlexLess> acc_map;

  auto key_now = [&]() {
    std::uint64_t key = 0;
    for (int a = 0; a < np; a++) key |= std::uint64_t(cnt[a]) << (5 * a);
    return key;
  };
  auto record = [&]() {
    if (packed) {
      acc_packed[key_now()]++;
    } else {
      ExpVec e(np);
      for (int a = 0; a < np; a++) e[a] = std::uint8_t(cnt[a]);
      acc_map[e]++;
    }
  };

  record();
  const std::uint64_t total = std::uint64_t(1) << K;
  for (std::uint64_t i = 1; i < total; i++) {
    int t = std::countr_zero(i);
    int slot = t / c.k, row = t % c.k;
    std::uint8_t flip = std::uint8_t(1) << (g - 1 - slot);
    for (int j : sup[row]) {
      std::uint8_t oldp = prof[j];
      std::uint8_t newp = oldp ^ flip;
      prof[j] = newp;
      cnt[oldp]--;
      cnt[newp]++;
    }
    record();
  }

  SparsePoly p(ctx_code(g));
  if (packed) {
    ExpVec e(np);
    for (auto& [key, mult] : acc_packed) {
      for (int a = 0; a < np; a++) e[a] = std::uint8_t((key >> (5 * a)) & 31u);
      p.set_term(e, QI(long(mult)));
    }
  } else {
    for (auto& [e, mult] : acc_map) p.set_term(e, QI(long(mult)));
  }

  // contract checks: homogeneous of degree n, total mass 2^{kg}
  if (!p.homogeneous() || p.degree() != c.n)
    throw std::logic_error("weight enumerator not homogeneous of degree n");
  Q mass = 0;
  for (const auto& [e, q] : p.terms()) mass += q.re;
  if (mass != Q(mpz_class(1) << K)) throw std::logic_error("weight enumerator mass mismatch");
  return WeightEnumerator{g, std::move(p)};
}

namespace {

// sum over m of r^(m^2), with a rigorous geometric remainder
Real theta3_bound(const Real& r) {
  if (!(r < 1)) throw std::domain_error("theta3_bound needs r < 1");
  Real s = 1;
  Real p;
  for (int m = 1; m <= 64; m++) {
    p = pow(r, m * m);
    s += 2 * p;
    if (p < Real("1e-60")) break;
  }
  return s + 2 * p * r / (1 - r);
}

// tail of the lattice sum outside the truncation set, valid for any subset of
// Lambda(C)^g containing all tuples with total norm^2 <= T: for each split
// parameter s, sum_{excluded} |term| <= exp(-pi lam (1-s) T) * th3(e^{-pi lam s/2})^{gn}
Real lattice_tail(const Real& lam, const Real& T, int n, int g) {
  Real pi = real_pi();
  Real best = -1;
  for (int i = 1; i <= 19; i++) {
    Real s = Real(i) / 20;
    Real b = exp(-pi * lam * (1 - s) * T) * pow(theta3_bound(exp(-pi * lam * s / 2)), n * g);
    if (best < 0 || b < best) best = b;
  }
  return best;
}

struct ShellData {
  int M = -1;                                    // includes all x with |x|^2 <= M
  std::map<int, std::uint64_t> cnt1;             // |x|^2 -> count
  std::map<std::tuple<int, int, int>, std::uint64_t> cnt2;  // (|x|^2, |y|^2, x.y) -> count
  bool pairs_done = false;
};

// enumerate all x in Z^n with x mod 2 in C and |x|^2 <= M (depth-first with
// norm budget); calls visit(x, norm2)
template <class F>
void enumerate_vectors(const BinaryCode& c, int M, std::uint64_t budget, F&& visit) {
  std::vector<int> x(c.n);
  std::uint64_t seen = 0;
  for (std::uint32_t m = 0; m < (std::uint32_t(1) << c.k); m++) {
    std::uint32_t w = 0;
    for (int r = 0; r < c.k; r++)
      if ((m >> r) & 1u) w ^= c.gen[r];
    // per-coordinate minimum contribution: parity 1 costs at least 1
    int wt = std::popcount(w);
    if (wt > M) continue;
    auto rec = [&](auto&& self, int j, int rem) -> void {
      if (j == c.n) {
        if (++seen > budget) throw UnreachableTarget("lattice enumeration budget exceeded");
        visit(x, M - rem);
        return;
      }
      int par = (w >> (c.n - 1 - j)) & 1u;
      for (int v = par;; v += 2) {
        if (v * v > rem) break;
        for (int sgn = 0; sgn < (v == 0 ? 1 : 2); sgn++) {
          x[j] = sgn ? -v : v;
          self(self, j + 1, rem - v * v);
        }
      }
    };
    rec(rec, 0, M);
  }
}

std::string code_cache_key(const BinaryCode& c) {
  std::string k = c.name + "/" + std::to_string(c.n) + "/" + std::to_string(c.k);
  for (auto w : c.gen) k += ":" + std::to_string(w);
  return k;
}

// process-local profile cache; profiles depend only on (code, M), not on Z
std::map<std::string, ShellData>& shell_cache() {
  static std::map<std::string, ShellData> cache;
  return cache;
}

void build_shells(const BinaryCode& c, ShellData& sd, int M, bool need_pairs,
                  std::uint64_t budget) {
  if (sd.M < M || (need_pairs && !sd.pairs_done)) {
    sd.cnt1.clear();
    sd.cnt2.clear();
    sd.M = M;
    if (!need_pairs) {
      enumerate_vectors(c, M, budget, [&](const std::vector<int>&, int n2) { sd.cnt1[n2]++; });
      sd.pairs_done = false;
      return;
    }
    // vectors grouped into norm shells; pair profiles only for admissible shell
    // pairs. Count before storing: the stored set must fit in memory, and the
    // pair pass below is quadratic in it anyway.
    std::uint64_t total = 0;
    enumerate_vectors(c, M, budget, [&](const std::vector<int>&, int) { total++; });
    std::uint64_t store_cap = std::min<std::uint64_t>(budget, std::uint64_t(1) << 22);
    if (total > store_cap)
      throw UnreachableTarget("lattice pair enumeration budget exceeded (" +
                              std::to_string(total) + " vectors)");
    std::map<int, std::vector<std::vector<int>>> shells;
    enumerate_vectors(c, M, budget, [&](const std::vector<int>& x, int n2) {
      shells[n2].push_back(x);
      sd.cnt1[n2]++;
    });
    std::uint64_t pair_work = 0;
    for (auto& [na, va] : shells)
      for (auto& [nb, vb] : shells)
        if (na + nb <= M) pair_work += std::uint64_t(va.size()) * vb.size();
    if (pair_work > budget) throw UnreachableTarget("lattice pair enumeration budget exceeded");
    const int n = c.n;
    for (auto& [na, va] : shells) {
      for (auto& [nb, vb] : shells) {
        if (na + nb > M) continue;
        for (const auto& xa : va) {
          std::map<int, std::uint64_t> by_dot;
          for (const auto& xb : vb) {
            int dot = 0;
            for (int j = 0; j < n; j++) dot += xa[j] * xb[j];
            by_dot[dot]++;
          }
          for (auto& [dot, cnt] : by_dot) sd.cnt2[{na, nb, dot}] += cnt;
        }
      }
    }
    sd.pairs_done = true;
  }
}

}  // namespace

CertifiedComplex lattice_theta_direct(const BinaryCode& c, const PeriodMatrix& Z,
                                      const Real& target_err, std::uint64_t work_budget) {
  const int g = Z.genus();
  if (g < 1 || g > 2)
    throw std::invalid_argument("lattice_theta_direct: direct oracle supports genus <= 2");
  const Real lam = Z.im_lambda_min_lb();
  const Real pi = real_pi();

  // smallest integer norm^2 cutoff M (in |x|^2 units; vector norm^2 = M/2)
  int M = 2;
  Real tail = lattice_tail(lam, Real(M) / 2, c.n, g);
  while (!(tail <= target_err / 4)) {
    M += 1;
    if (M > 600) throw UnreachableTarget("lattice truncation radius limit");
    tail = lattice_tail(lam, Real(M) / 2, c.n, g);
  }

  auto& sd = shell_cache()[code_cache_key(c) + (g == 2 ? "/p" : "/s")];
  build_shells(c, sd, M, g == 2, work_budget);

  CC acc(0);
  Real mass = 0;
  std::uint64_t terms = 0;
  const CC ipi(Real(0), pi);
  if (g == 1) {
    for (auto& [n2, count] : sd.cnt1) {
      CC t = exp(ipi * Z(0, 0) * Real(n2) / Real(2)) * Real(count);
      acc += t;
      mass += abs(t);
      terms++;
    }
  } else {
    for (auto& [key, count] : sd.cnt2) {
      auto [n2a, n2b, dot] = key;
      CC q = Z(0, 0) * Real(n2a) + Z(0, 1) * Real(2 * dot) + Z(1, 1) * Real(n2b);
      CC t = exp(ipi * q / Real(2)) * Real(count);
      acc += t;
      mass += abs(t);
      terms++;
    }
  }
  Real rounding = mass * Real(64) * round_slop();
  return CertifiedComplex(acc, tail + rounding);
}

CertifiedComplex theta_via_enumerator(const WeightEnumerator& w, const PeriodMatrix& Z,
                                      const Real& target_err) {
  if (w.genus != Z.genus()) throw std::invalid_argument("theta_via_enumerator genus mismatch");
  ThetaWorkspace ws(EvalPoint(Z, std::vector<CC>(Z.genus(), CC(0))));
  Real sub = target_err * Real("1e-12");
  for (int attempt = 0; attempt < 4; attempt++) {
    auto consts = ws.second_all(0, sub);
    auto v = eval_certified(w.poly, consts);
    if (v.err <= target_err) return v;
    sub *= Real("1e-6");
  }
  throw UnreachableTarget("theta_via_enumerator error bound exceeds target");
}

}  // namespace tb
