#pragma once
// Extended-precision floating layer (50 significant decimal digits) and
// certified complex values carrying rigorous absolute error radii.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <stdexcept>
#include <string>

namespace tb {

using Real = boost::multiprecision::cpp_bin_float_50;
using CC = boost::multiprecision::cpp_complex_50;

Real real_pi();

// Per-operation rounding slop, deliberately over-approximated: one unit here
// covers > 10^4 ulps of cpp_bin_float_50, so chained arithmetic stays honest
// without per-op ulp accounting.
inline Real round_slop() { return Real("1e-44"); }

// value together with a rigorous radius: the true quantity lies within
// distance err of value.
struct CertifiedComplex {
  CC value{0};
  Real err{0};

  CertifiedComplex() = default;
  CertifiedComplex(CC v, Real e) : value(std::move(v)), err(std::move(e)) {
    if (err < 0) throw std::invalid_argument("negative error radius");
  }
  explicit CertifiedComplex(CC v) : value(std::move(v)), err(0) {}

  Real abs_ub() const { return abs(value) + err; }
  Real abs_lb() const {
    Real a = abs(value) - err;
    return a > 0 ? a : Real(0);
  }
};

CertifiedComplex operator+(const CertifiedComplex& a, const CertifiedComplex& b);
CertifiedComplex operator-(const CertifiedComplex& a, const CertifiedComplex& b);
CertifiedComplex operator*(const CertifiedComplex& a, const CertifiedComplex& b);
CertifiedComplex operator/(const CertifiedComplex& a, const CertifiedComplex& b);
CertifiedComplex operator*(const CertifiedComplex& a, const CC& s);  // exact scalar
CertifiedComplex cpow(const CertifiedComplex& a, unsigned e);

// fixed-format scientific text used by every machine-readable report
std::string real_str(const Real& v, int digits = 17);
std::string cc_str(const CC& v, int digits = 17);

}  // namespace tb
