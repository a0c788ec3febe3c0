#include "tb/invariants.hpp"

#include "tb/evalnum.hpp"
#include "tb/periods.hpp"
#include "tb/theta.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <stdexcept>

namespace tb {

namespace {

// taSa over Z reduced mod 4 (well defined on F2 classes for symmetric S)
int quad_value(int g, const std::vector<std::vector<long>>& S, Word a) {
  long v = 0;
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) v += S[i][j] * coord(a, g, i) * coord(a, g, j);
  return static_cast<int>(((v % 4) + 4) % 4);
}

void check_assignment(const ExpVec& e, int g) {
  if (g < 1 || g > 5) throw std::invalid_argument("genus out of range");
  if (e.size() != (std::size_t{1} << g))
    throw std::invalid_argument("assignment must cover all 2^g variables");
}

std::vector<ExpVec> orbit_of(const ExpVec& e, int g,
                             const std::vector<std::vector<Word>>& perms) {
  std::set<ExpVec> orb;
  std::size_t n = e.size();
  for (const auto& p : perms) {
    ExpVec pe(n, 0);
    for (std::size_t a = 0; a < n; ++a) pe[p[a]] = e[a];
    orb.insert(std::move(pe));
  }
  return std::vector<ExpVec>(orb.begin(), orb.end());
}

}  // namespace

ActionMatrix action_matrix_ds(int g, const std::vector<std::vector<long>>& S) {
  if (g < 1 || static_cast<int>(S.size()) != g)
    throw std::invalid_argument("action_matrix_ds: S must be g x g");
  for (int i = 0; i < g; ++i) {
    if (static_cast<int>(S[i].size()) != g)
      throw std::invalid_argument("action_matrix_ds: S must be g x g");
    for (int j = 0; j < g; ++j)
      if (S[i][j] != S[j][i])
        throw std::invalid_argument("action_matrix_ds: S must be symmetric");
  }
  Word n = Word{1} << g;
  ActionMatrix out;
  out.label = "DS(S)";
  out.m.assign(n, std::vector<QI>(n, QI()));
  for (Word a = 0; a < n; ++a) out.m[a][a] = qi_ipow(quad_value(g, S, a));
  return out;
}

ActionMatrix action_matrix_tg(int g) {
  if (g < 1 || g > 5) throw std::invalid_argument("genus out of range");
  Word n = Word{1} << g;
  QI base = qi_pow(QI(Q(1, 2), Q(1, 2)), static_cast<unsigned long>(g));
  ActionMatrix out;
  out.label = "Tg";
  out.m.assign(n, std::vector<QI>(n, QI()));
  for (Word a = 0; a < n; ++a)
    for (Word b = 0; b < n; ++b) out.m[a][b] = dot2(a, b) ? -base : base;
  return out;
}

bool is_admissible(const ExpVec& e, int g) {
  check_assignment(e, g);
  long deg = 0;
  for (auto x : e) deg += x;
  if (deg % 2) throw std::invalid_argument("is_admissible: degree must be even");
  Word n = Word{1} << g;
  // diagonal elementary S = E_ii: sum of multiplicities with bit i set, mod 4
  for (int i = 0; i < g; ++i) {
    long mass = 0;
    for (Word a = 0; a < n; ++a)
      if (coord(a, g, i)) mass += e[a];
    if (mass % 4) return false;
  }
  // off-diagonal S = E_ij + E_ji contributes 2*a_i*a_j: mass mod 2
  for (int i = 0; i < g; ++i)
    for (int j = i + 1; j < g; ++j) {
      long mass = 0;
      for (Word a = 0; a < n; ++a)
        if (coord(a, g, i) && coord(a, g, j)) mass += e[a];
      if (mass % 2) return false;
    }
  return true;
}

std::vector<int> mult_string(const ExpVec& e) {
  std::vector<int> s(e.begin(), e.end());
  std::sort(s.begin(), s.end(), std::greater<int>());
  return s;
}

SparsePoly orbit_sum(const ExpVec& e, int g) {
  check_assignment(e, g);
  if (!is_admissible(e, g))
    throw std::invalid_argument("orbit_sum: monomial is not admissible");
  auto perms = affine_permutations(g);
  SparsePoly out(ctx_second_order_const(g));
  for (const auto& m : orbit_of(e, g, perms)) out.add_term(m, QI(1));
  return out;
}

std::vector<SparsePoly> invariant_basis(int g, int degree) {
  if (degree <= 0 || degree % 2)
    throw std::invalid_argument("invariant_basis: degree must be positive even");
  Word n = Word{1} << g;
  auto perms = affine_permutations(g);

  // admissible monomials of the degree, in ascending lex order
  std::vector<ExpVec> adm;
  ExpVec cur(n, 0);
  auto rec = [&](auto&& self, Word pos, int rem) -> void {
    if (pos + 1 == n) {
      if (rem > 255) return;
      cur[pos] = static_cast<std::uint8_t>(rem);
      if (is_admissible(cur, g)) adm.push_back(cur);
      cur[pos] = 0;
      return;
    }
    for (int v = 0; v <= rem && v <= 255; ++v) {
      cur[pos] = static_cast<std::uint8_t>(v);
      self(self, pos + 1, rem - v);
    }
    cur[pos] = 0;
  };
  rec(rec, 0, degree);

  // first unseen member in lex order is its orbit's canonical label
  std::set<ExpVec> seen;
  std::vector<SparsePoly> basis;
  for (const auto& e : adm) {
    if (seen.count(e)) continue;
    auto orb = orbit_of(e, g, perms);
    SparsePoly sum(ctx_second_order_const(g));
    for (const auto& m : orb) {
      seen.insert(m);
      sum.add_term(m, QI(1));
    }
    basis.push_back(std::move(sum));
  }
  return basis;
}

std::vector<std::pair<Characteristic, SparsePoly>> square_table(int g) {
  if (g < 1 || g > 4) throw std::invalid_argument("genus out of range");
  Word n = Word{1} << g;
  VarContext ctx = ctx_second_order_const(g);
  std::vector<std::pair<Characteristic, SparsePoly>> tab;
  for (const auto& m : enumerate_chars(g, CharFilter::Even)) {
    SparsePoly q(ctx);
    for (Word s = 0; s < n; ++s) {
      ExpVec e(n, 0);
      e[s] += 1;
      e[s ^ m.eps] += 1;
      q.add_term(e, dot2(m.delta, s) ? QI(-1) : QI(1));
    }
    tab.emplace_back(m, std::move(q));
  }

  // numeric gate: each entry must reproduce theta_m(tau,0)^2 at seeded points
  static std::mutex mu;
  static std::set<int> validated;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (!validated.count(g)) {
      Sampler smp(7340243);
      Real tgt("1e-28");
      for (int trial = 0; trial < 2; ++trial) {
        EvalPoint p(smp.sample_tau(g), std::vector<CC>(g, CC(0)));
        ThetaWorkspace ws(p);
        auto X = ws.second_all(0, tgt);
        std::vector<CertifiedComplex> xv(X.begin(), X.end());
        for (const auto& [m, q] : tab) {
          CertifiedComplex th = ws.theta(m, 1, 0, tgt);
          CertifiedComplex diff = th * th - eval_certified(q, xv);
          if (diff.abs_lb() > 0)
            throw std::logic_error("square_table: numeric validation failed");
        }
      }
      validated.insert(g);
    }
  }
  return tab;
}

SparsePoly schottky_poly(SchottkyRepr repr) {
  const int g = 3;
  if (repr == SchottkyRepr::FirstOrder) {
    VarContext ctx = ctx_first_order_even(g);
    std::size_t n = ctx.names.size();
    SparsePoly out(ctx);
    for (std::size_t i = 0; i < n; ++i) {
      ExpVec e(n, 0);
      e[i] = 16;
      out.add_term(e, QI(Q(7, 64)));
      for (std::size_t j = i + 1; j < n; ++j) {
        ExpVec f(n, 0);
        f[i] = 8;
        f[j] = 8;
        out.add_term(f, QI(Q(-1, 32)));
      }
    }
    return out;
  }
  auto tab = square_table(g);
  VarContext ctx = ctx_second_order_const(g);
  SparsePoly sum4(ctx), sum8(ctx);
  for (const auto& [m, q] : tab) {
    SparsePoly q2 = q * q;
    SparsePoly q4 = q2 * q2;
    sum4 = sum4 + q4;
    sum8 = sum8 + q4 * q4;
  }
  return sum8 * QI(Q(1, 8)) - sum4 * sum4 * QI(Q(1, 64));
}

}  // namespace tb
