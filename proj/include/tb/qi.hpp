#pragma once
// Exact coefficients: arbitrary-precision rationals and Gaussian rationals
// (pairs re + i*im with i^2 = -1), built on GMP's mpq_class.

#include <gmpxx.h>

#include <string>

namespace tb {

using Q = mpq_class;

struct QI {
  Q re, im;

  QI() : re(0), im(0) {}
  QI(long v) : re(v), im(0) {}
  QI(const Q& r) : re(r), im(0) {}
  QI(const Q& r, const Q& i) : re(r), im(i) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_rational() const { return im == 0; }

  QI operator-() const { return QI(-re, -im); }
  QI& operator+=(const QI& o) { re += o.re; im += o.im; return *this; }
  QI& operator-=(const QI& o) { re -= o.re; im -= o.im; return *this; }

  friend QI operator+(const QI& a, const QI& b) { return QI(a.re + b.re, a.im + b.im); }
  friend QI operator-(const QI& a, const QI& b) { return QI(a.re - b.re, a.im - b.im); }
  friend QI operator*(const QI& a, const QI& b) {
    return QI(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
  }
  friend QI operator/(const QI& a, const QI& b) {
    Q n = b.re * b.re + b.im * b.im;
    return QI((a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n);
  }
  friend bool operator==(const QI& a, const QI& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const QI& a, const QI& b) { return !(a == b); }
};

inline QI qi_i() { return QI(Q(0), Q(1)); }

// i^k for any integer k
inline QI qi_ipow(long k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return QI(Q(1), Q(0));
    case 1: return QI(Q(0), Q(1));
    case 2: return QI(Q(-1), Q(0));
    default: return QI(Q(0), Q(-1));
  }
}

inline QI qi_pow(QI b, unsigned long e) {
  QI r(1);
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

// canonical text for the polynomial file format: rationals as NUM/DEN (DEN
// omitted when 1), Gaussian values as re+im*i with the same rule per part
std::string q_str(const Q& v);
std::string qi_str(const QI& v);
bool qi_parse(const std::string& s, QI& out);

}  // namespace tb
