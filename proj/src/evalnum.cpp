#include "tb/evalnum.hpp"

#include <stdexcept>

namespace tb {

namespace {

// exact digit-chunked integer conversion; one rounding per chunk, covered by slop
Real z_to_real(const mpz_class& v) {
  std::string s = v.get_str();
  bool neg = !s.empty() && s[0] == '-';
  size_t start = neg ? 1 : 0;
  Real r = 0;
  const Real base = Real("1e17");
  for (size_t i = start; i < s.size(); i += 17) {
    std::string chunk = s.substr(i, 17);
    Real scale = 1;
    for (size_t c = 1; c < chunk.size(); c++) scale *= 10;
    r = r * (scale * 10) + Real(std::stoll(chunk));
  }
  (void)base;
  return neg ? -r : r;
}

}  // namespace

Real q_to_real(const Q& v) { return z_to_real(v.get_num()) / z_to_real(v.get_den()); }

CC qi_to_cc(const QI& v) { return CC(q_to_real(v.re), q_to_real(v.im)); }

CertifiedComplex eval_certified(const SparsePoly& p, const std::vector<CertifiedComplex>& vals) {
  const int n = p.ctx().nvars();
  if ((int)vals.size() != n) throw std::invalid_argument("eval_certified: value count");
  // power cache, extended on demand
  std::vector<std::vector<CertifiedComplex>> pw(n);
  for (int j = 0; j < n; j++) pw[j].push_back(CertifiedComplex(CC(1), Real(0)));
  CertifiedComplex acc;
  for (const auto& [e, c] : p.terms()) {
    CC cv = qi_to_cc(c);
    CertifiedComplex t(cv, abs(cv) * round_slop());
    for (int j = 0; j < n; j++) {
      if (!e[j]) continue;
      auto& pj = pw[j];
      while ((int)pj.size() <= e[j]) pj.push_back(pj.back() * vals[j]);
      t = t * pj[e[j]];
    }
    acc = acc + t;
  }
  return acc;
}

}  // namespace tb
