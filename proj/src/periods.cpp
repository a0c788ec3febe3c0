#include "tb/periods.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tb {

namespace {

using RMat = std::vector<std::vector<Real>>;

RMat im_part(int g, const std::vector<CC>& full) {
  RMat b(g, std::vector<Real>(g));
  for (int i = 0; i < g; i++)
    for (int j = 0; j < g; j++) b[i][j] = full[i * g + j].imag();
  return b;
}

// smallest eigenvalue estimate by cyclic Jacobi sweeps (g <= 4)
Real jacobi_min_eigenvalue(RMat a) {
  const int g = (int)a.size();
  if (g == 1) return a[0][0];
  for (int sweep = 0; sweep < 60; sweep++) {
    Real off = 0;
    for (int p = 0; p < g; p++)
      for (int q = p + 1; q < g; q++) off += a[p][q] * a[p][q];
    if (off < Real("1e-80")) break;
    for (int p = 0; p < g; p++)
      for (int q = p + 1; q < g; q++) {
        if (a[p][q] == 0) continue;
        Real theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        Real t = (theta >= 0 ? Real(1) : Real(-1)) / (abs(theta) + sqrt(theta * theta + 1));
        Real c = 1 / sqrt(t * t + 1), s = t * c;
        for (int k = 0; k < g; k++) {
          Real akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < g; k++) {
          Real apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  Real mn = a[0][0];
  for (int i = 1; i < g; i++) mn = std::min(mn, a[i][i]);
  return mn;
}

}  // namespace

bool ldlt_positive(const RMat& A, const Real& margin) {
  const int g = (int)A.size();
  RMat L(g, std::vector<Real>(g, 0));
  std::vector<Real> d(g);
  for (int j = 0; j < g; j++) {
    Real dj = A[j][j];
    for (int k = 0; k < j; k++) dj -= L[j][k] * L[j][k] * d[k];
    if (!(dj > margin)) return false;
    d[j] = dj;
    L[j][j] = 1;
    for (int i = j + 1; i < g; i++) {
      Real v = A[i][j];
      for (int k = 0; k < j; k++) v -= L[i][k] * L[j][k] * d[k];
      L[i][j] = v / dj;
    }
  }
  return true;
}

PeriodMatrix::PeriodMatrix(int g, const std::vector<CC>& full) : g_(g) {
  if (g < 1 || (int)full.size() != g * g) throw std::invalid_argument("period matrix shape");
  for (int i = 0; i < g; i++)
    for (int j = i + 1; j < g; j++)
      if (full[i * g + j] != full[j * g + i])
        throw std::invalid_argument("period matrix not symmetric");
  ut_.resize(g * (g + 1) / 2);
  for (int i = 0; i < g; i++)
    for (int j = i; j < g; j++) ut_[idx(i, j)] = full[i * g + j];

  RMat B = im_part(g, full);
  Real scale = 0;
  for (int i = 0; i < g; i++) scale = std::max(scale, abs(B[i][i]));
  Real margin = scale * Real("1e-40");
  if (!ldlt_positive(B, margin))
    throw std::invalid_argument("imaginary part not positive definite");

  // certify a positive lower eigenvalue bound: shrink the Jacobi estimate
  // until the shifted matrix still factorizes with positive pivots
  Real est = jacobi_min_eigenvalue(B);
  Real cand = est * Real("0.99");
  for (int tries = 0; tries < 120; tries++) {
    if (cand > 0) {
      RMat S = B;
      for (int i = 0; i < g; i++) S[i][i] -= cand;
      if (ldlt_positive(S, margin)) {
        lam_lb_ = cand;
        return;
      }
    }
    cand = (cand > 0 ? cand : est) * Real("0.5");
  }
  throw std::invalid_argument("could not certify least eigenvalue of Im(tau)");
}

std::vector<std::vector<CC>> PeriodMatrix::rows() const {
  std::vector<std::vector<CC>> r(g_, std::vector<CC>(g_));
  for (int i = 0; i < g_; i++)
    for (int j = 0; j < g_; j++) r[i][j] = (*this)(i, j);
  return r;
}

PeriodMatrix PeriodMatrix::scaled(int factor) const {
  std::vector<CC> full(g_ * g_);
  for (int i = 0; i < g_; i++)
    for (int j = 0; j < g_; j++) full[i * g_ + j] = (*this)(i, j) * Real(factor);
  return PeriodMatrix(g_, full);
}

EvalPoint::EvalPoint(PeriodMatrix t, std::vector<CC> zz) : tau(std::move(t)), z(std::move(zz)) {
  if ((int)z.size() != tau.genus()) throw std::invalid_argument("z dimension != genus");
}

Real Sampler::dyadic(double lo, double hi) {
  std::uint64_t k = eng_() >> 34;  // 30 bits
  Real t = Real(k) / Real(1u << 30);
  return Real(lo) + (Real(hi) - Real(lo)) * t;
}

PeriodMatrix Sampler::sample_tau(int g) {
  std::vector<std::vector<Real>> A(g, std::vector<Real>(g)), N(g, std::vector<Real>(g));
  for (int i = 0; i < g; i++)
    for (int j = i; j < g; j++) A[i][j] = A[j][i] = dyadic(-1, 1);
  for (int i = 0; i < g; i++)
    for (int j = 0; j < g; j++) N[i][j] = dyadic(-0.5, 0.5);
  std::vector<CC> full(g * g);
  for (int i = 0; i < g; i++)
    for (int j = 0; j < g; j++) {
      Real b = (i == j) ? Real(1) : Real(0);
      for (int k = 0; k < g; k++) b += N[k][i] * N[k][j];
      full[i * g + j] = CC(A[i][j], b);
    }
  return PeriodMatrix(g, full);
}

std::vector<CC> Sampler::sample_z(int g) {
  std::vector<CC> z(g);
  for (int i = 0; i < g; i++) {
    Real re = dyadic(-0.5, 0.5), im = dyadic(-0.5, 0.5);
    z[i] = CC(re, im);
  }
  return z;
}

EvalPoint Sampler::sample_point(int g) {
  PeriodMatrix t = sample_tau(g);
  return EvalPoint(std::move(t), sample_z(g));
}

}  // namespace tb
