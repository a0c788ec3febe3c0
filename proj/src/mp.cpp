#include "tb/mp.hpp"

#include <boost/math/constants/constants.hpp>

#include <sstream>

namespace tb {

Real real_pi() { return boost::math::constants::pi<Real>(); }

CertifiedComplex operator+(const CertifiedComplex& a, const CertifiedComplex& b) {
  CC v = a.value + b.value;
  Real slop = (abs(a.value) + abs(b.value)) * round_slop();
  return CertifiedComplex(v, a.err + b.err + slop);
}

CertifiedComplex operator-(const CertifiedComplex& a, const CertifiedComplex& b) {
  CC v = a.value - b.value;
  Real slop = (abs(a.value) + abs(b.value)) * round_slop();
  return CertifiedComplex(v, a.err + b.err + slop);
}

CertifiedComplex operator*(const CertifiedComplex& a, const CertifiedComplex& b) {
  CC v = a.value * b.value;
  Real ma = abs(a.value), mb = abs(b.value);
  Real e = ma * b.err + mb * a.err + a.err * b.err + ma * mb * round_slop();
  return CertifiedComplex(v, e);
}

CertifiedComplex operator/(const CertifiedComplex& a, const CertifiedComplex& b) {
  Real mb = abs(b.value);
  if (!(mb > b.err)) throw std::domain_error("certified division: denominator not bounded away from 0");
  CC v = a.value / b.value;
  Real ma = abs(a.value);
  Real e = (ma * b.err + mb * a.err) / (mb * (mb - b.err)) + abs(v) * round_slop();
  return CertifiedComplex(v, e);
}

CertifiedComplex operator*(const CertifiedComplex& a, const CC& s) {
  Real ms = abs(s);
  return CertifiedComplex(a.value * s, a.err * ms + abs(a.value) * ms * round_slop());
}

CertifiedComplex cpow(const CertifiedComplex& a, unsigned e) {
  CertifiedComplex r(CC(1), Real(0));
  CertifiedComplex b = a;
  while (e) {
    if (e & 1) r = r * b;
    if (e >>= 1) b = b * b;
  }
  return r;
}

std::string real_str(const Real& v, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << std::scientific << v;
  return os.str();
}

std::string cc_str(const CC& v, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << std::scientific << v.real() << (v.imag() < 0 ? "" : "+") << v.imag() << "i";
  return os.str();
}

}  // namespace tb
