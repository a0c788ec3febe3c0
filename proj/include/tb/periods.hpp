#pragma once
// Period matrices (symmetric, positive-definite imaginary part), evaluation
// points, and deterministic seeded sampling of both.

#include "tb/mp.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace tb {

class PeriodMatrix {
 public:
  // entries given as full row-major g×g list; symmetry is enforced exactly
  // and Im must admit a positive-pivot LDL^T factorization
  PeriodMatrix(int g, const std::vector<CC>& full);

  int genus() const { return g_; }
  const CC& operator()(int i, int j) const { return ut_[idx(i, j)]; }

  std::vector<std::vector<CC>> rows() const;
  PeriodMatrix scaled(int factor) const;  // factor * this

  // certified lower bound on the least eigenvalue of Im(tau), > 0
  Real im_lambda_min_lb() const { return lam_lb_; }

 private:
  int g_;
  std::vector<CC> ut_;  // upper triangle, row-major
  Real lam_lb_;
  int idx(int i, int j) const {
    if (i > j) std::swap(i, j);
    return i * (2 * g_ - i - 1) / 2 + j;
  }
};

struct EvalPoint {
  PeriodMatrix tau;
  std::vector<CC> z;

  EvalPoint(PeriodMatrix t, std::vector<CC> zz);
};

// Positive-pivot LDL^T test for a real symmetric matrix; pivots must clear
// the given margin for success.
bool ldlt_positive(const std::vector<std::vector<Real>>& A, const Real& margin);

// Deterministic sampler: every draw is a dyadic rational k/2^30, so sampled
// points are exactly representable and runs are bit-reproducible.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : eng_(seed) {}

  Real dyadic(double lo, double hi);
  // tau = A + iB with A symmetric dyadic in [-1,1] and B = I + N^T N
  PeriodMatrix sample_tau(int g);
  std::vector<CC> sample_z(int g);  // entries dyadic in [-1/2,1/2]^2
  EvalPoint sample_point(int g);

 private:
  std::mt19937_64 eng_;
};

}  // namespace tb
