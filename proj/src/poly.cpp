#include "tb/poly.hpp"

#include "tb/bits.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tb {

std::string q_str(const Q& v) {
  std::string s = v.get_num().get_str();
  if (v.get_den() != 1) s += "/" + v.get_den().get_str();
  return s;
}

namespace {
std::string im_str(const Q& im) {
  if (im == 1) return "i";
  if (im == -1) return "-i";
  return q_str(im) + "*i";
}
}  // namespace

std::string qi_str(const QI& v) {
  if (v.im == 0) return q_str(v.re);
  if (v.re == 0) return im_str(v.im);
  std::string s = q_str(v.re);
  std::string im = im_str(v.im);
  if (!im.empty() && im[0] == '-') return s + im;
  return s + "+" + im;
}

bool qi_parse(const std::string& s_in, QI& out) {
  // normalize the bare unit forms "i", "-i", "re+i", "re-i" to NUM*i
  std::string s = s_in;
  if (!s.empty() && s.back() == 'i' &&
      (s.size() == 1 || s[s.size() - 2] == '+' || s[s.size() - 2] == '-'))
    s = s.substr(0, s.size() - 1) + "1*i";
  auto parse_q = [](const std::string& t, Q& q) -> bool {
    try {
      q = Q(t);
      q.canonicalize();
      return true;
    } catch (...) {
      return false;
    }
  };
  auto star = s.find("*i");
  if (star == std::string::npos) {
    Q re;
    if (!parse_q(s, re)) return false;
    out = QI(re);
    return true;
  }
  std::string imtxt = s.substr(0, star);
  // split at the sign that separates re and im (skip the leading sign)
  std::size_t split = std::string::npos;
  for (std::size_t k = imtxt.size(); k-- > 1;) {
    if ((imtxt[k] == '+' || imtxt[k] == '-') && imtxt[k - 1] != '/' && imtxt[k - 1] != '+' &&
        imtxt[k - 1] != '-') {
      split = k;
      break;
    }
  }
  Q re(0), im;
  if (split == std::string::npos) {
    if (!parse_q(imtxt, im)) return false;
  } else {
    if (!parse_q(imtxt.substr(0, split), re)) return false;
    std::string it = imtxt.substr(split);
    if (it == "+") it = "1";
    else if (it == "-") it = "-1";
    if (!parse_q(it, im)) return false;
  }
  out = QI(re, im);
  return true;
}

VarContext ctx_second_order_const(int g) {
  VarContext c;
  c.kind = "theta2const:g=" + std::to_string(g);
  for (Word d = 0; d < (Word(1) << g); d++) c.names.push_back("U" + bits_str(d, g));
  return c;
}

VarContext ctx_second_order_func(int g) {
  VarContext c;
  c.kind = "theta2func:g=" + std::to_string(g);
  for (Word e = 0; e < (Word(1) << g); e++) c.names.push_back("x" + bits_str(e, g));
  return c;
}

VarContext ctx_first_order8(int g) {
  VarContext c;
  c.kind = "theta1diag:g=" + std::to_string(g);
  for (Word d = 0; d < (Word(1) << g); d++) c.names.push_back("t" + bits_str(d, g));
  return c;
}

VarContext ctx_first_order_even(int g) {
  VarContext c;
  c.kind = "theta1even:g=" + std::to_string(g);
  for (Word e = 0; e < (Word(1) << g); e++)
    for (Word d = 0; d < (Word(1) << g); d++)
      if (dot2(e, d) == 0) c.names.push_back("th" + bits_str(e, g) + "_" + bits_str(d, g));
  return c;
}

VarContext ctx_split(int base_g) {
  VarContext c;
  c.kind = "split:g=" + std::to_string(base_g + 1);
  for (Word b = 0; b < 2; b++)
    for (Word e = 0; e < (Word(1) << base_g); e++)
      c.names.push_back("X" + std::to_string(b) + bits_str(e, base_g));
  return c;
}

VarContext ctx_mixed(int g) {
  VarContext c;
  c.kind = "mixed:g=" + std::to_string(g);
  for (Word d = 0; d < (Word(1) << g); d++) c.names.push_back("U" + bits_str(d, g));
  for (Word e = 0; e < (Word(1) << g); e++) c.names.push_back("x" + bits_str(e, g));
  return c;
}

VarContext ctx_code(int g) {
  VarContext c;
  c.kind = "code:g=" + std::to_string(g);
  for (Word a = 0; a < (Word(1) << g); a++) c.names.push_back("x" + bits_str(a, g));
  return c;
}

void SparsePoly::check_ctx(const SparsePoly& o) const {
  if (ctx_ != o.ctx_) throw std::invalid_argument("variable context mismatch");
}

void SparsePoly::add_term(const ExpVec& e, const QI& c) {
  if ((int)e.size() != ctx_.nvars()) throw std::invalid_argument("exponent vector length");
  if (c.is_zero()) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void SparsePoly::set_term(const ExpVec& e, const QI& c) {
  if ((int)e.size() != ctx_.nvars()) throw std::invalid_argument("exponent vector length");
  if (c.is_zero())
    terms_.erase(e);
  else
    terms_[e] = c;
}

QI SparsePoly::coeff(const ExpVec& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? QI() : it->second;
}

SparsePoly SparsePoly::operator+(const SparsePoly& o) const {
  check_ctx(o);
  SparsePoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

SparsePoly SparsePoly::operator-(const SparsePoly& o) const {
  check_ctx(o);
  SparsePoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
  return r;
}

SparsePoly SparsePoly::operator-() const {
  SparsePoly r(ctx_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

SparsePoly SparsePoly::operator*(const SparsePoly& o) const {
  check_ctx(o);
  SparsePoly r(ctx_);
  const int n = ctx_.nvars();
  ExpVec e(n);
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_) {
      for (int i = 0; i < n; i++) e[i] = std::uint8_t(ea[i] + eb[i]);
      r.add_term(e, ca * cb);
    }
  return r;
}

SparsePoly SparsePoly::operator*(const QI& c) const {
  SparsePoly r(ctx_);
  if (c.is_zero()) return r;
  for (const auto& [e, t] : terms_) r.terms_.emplace(e, t * c);
  return r;
}

SparsePoly SparsePoly::pow(unsigned e) const {
  SparsePoly r = monomial(ctx_, ExpVec(ctx_.nvars(), 0), QI(1));
  SparsePoly b = *this;
  while (e) {
    if (e & 1) r = r * b;
    if (e >>= 1) b = b * b;
  }
  return r;
}

int SparsePoly::degree() const {
  if (terms_.empty()) return -1;
  return total_deg(terms_.rbegin()->first);
}

bool SparsePoly::homogeneous() const {
  if (terms_.empty()) return true;
  int d = total_deg(terms_.begin()->first);
  return d == total_deg(terms_.rbegin()->first);
}

SparsePoly SparsePoly::substitute_monomial(const std::vector<int>& perm,
                                           const std::vector<QI>& scale) const {
  const int n = ctx_.nvars();
  if ((int)perm.size() != n || (int)scale.size() != n)
    throw std::invalid_argument("substitute_monomial size");
  SparsePoly r(ctx_);
  ExpVec e(n);
  for (const auto& [ea, ca] : terms_) {
    std::fill(e.begin(), e.end(), 0);
    QI c = ca;
    for (int i = 0; i < n; i++)
      if (ea[i]) {
        e[perm[i]] = std::uint8_t(e[perm[i]] + ea[i]);
        c = c * qi_pow(scale[i], ea[i]);
      }
    r.add_term(e, c);
  }
  return r;
}

SparsePoly SparsePoly::substitute_linear(const std::vector<std::vector<QI>>& M) const {
  const int n = ctx_.nvars();
  if ((int)M.size() != n) throw std::invalid_argument("substitution matrix dimension");
  for (const auto& row : M)
    if ((int)row.size() != n) throw std::invalid_argument("substitution matrix dimension");
  // detect monomial matrices (permutation x diagonal) for the fast path
  std::vector<int> perm(n, -1);
  std::vector<QI> scale(n);
  bool mono = true;
  for (int j = 0; j < n && mono; j++) {
    int hit = -1;
    for (int k = 0; k < n; k++)
      if (!M[j][k].is_zero()) {
        if (hit >= 0) { mono = false; break; }
        hit = k;
      }
    if (hit < 0) mono = false;
    else { perm[j] = hit; scale[j] = M[j][hit]; }
  }
  if (mono) {
    std::vector<bool> seen(n, false);
    for (int j = 0; j < n; j++) {
      if (seen[perm[j]]) { mono = false; break; }
      seen[perm[j]] = true;
    }
  }
  if (mono) return substitute_monomial(perm, scale);

  std::vector<SparsePoly> images;
  images.reserve(n);
  for (int j = 0; j < n; j++) {
    SparsePoly im(ctx_);
    for (int k = 0; k < n; k++)
      if (!M[j][k].is_zero()) {
        ExpVec e(n, 0);
        e[k] = 1;
        im.add_term(e, M[j][k]);
      }
    images.push_back(std::move(im));
  }
  return substitute(ctx_, images);
}

SparsePoly SparsePoly::substitute(const VarContext& target,
                                  const std::vector<SparsePoly>& images) const {
  const int n = ctx_.nvars();
  if ((int)images.size() != n) throw std::invalid_argument("one image per variable required");
  for (const auto& p : images)
    if (p.ctx() != target) throw std::invalid_argument("image context mismatch");
  SparsePoly acc(target);
  // cache image powers as needed
  std::vector<std::vector<SparsePoly>> powers(n);
  auto img_pow = [&](int j, int e) -> const SparsePoly& {
    auto& vec = powers[j];
    if (vec.empty()) vec.push_back(monomial(target, ExpVec(target.nvars(), 0), QI(1)));
    while ((int)vec.size() <= e) vec.push_back(vec.back() * images[j]);
    return vec[e];
  };
  for (const auto& [e, c] : terms_) {
    SparsePoly t = monomial(target, ExpVec(target.nvars(), 0), c);
    for (int j = 0; j < n; j++)
      if (e[j]) t = t * img_pow(j, e[j]);
    acc = acc + t;
  }
  return acc;
}

SparsePoly SparsePoly::partial_derivative(int var) const {
  if (var < 0 || var >= ctx_.nvars()) throw std::invalid_argument("unknown variable");
  SparsePoly r(ctx_);
  for (const auto& [e, c] : terms_)
    if (e[var]) {
      ExpVec d = e;
      d[var]--;
      r.add_term(d, c * QI(long(e[var])));
    }
  return r;
}

SparsePoly SparsePoly::monomial(const VarContext& c, const ExpVec& e, const QI& coef) {
  SparsePoly p(c);
  p.add_term(e, coef);
  return p;
}

SparsePoly SparsePoly::variable(const VarContext& c, int j) {
  ExpVec e(c.nvars(), 0);
  e.at(j) = 1;
  return monomial(c, e, QI(1));
}

void SparsePoly::write_text(std::ostream& os) const {
  os << "vars " << ctx_.nvars();
  for (const auto& n : ctx_.names) os << ' ' << n;
  os << '\n' << "kind " << ctx_.kind << '\n';
  for (const auto& [e, c] : terms_) {
    os << qi_str(c);
    for (auto v : e) os << ' ' << int(v);
    os << '\n';
  }
}

SparsePoly SparsePoly::read_text(std::istream& is) {
  std::string line;
  VarContext ctx;
  if (!std::getline(is, line)) throw std::runtime_error("poly text: missing header");
  {
    std::istringstream ls(line);
    std::string tag;
    int n;
    if (!(ls >> tag >> n) || tag != "vars") throw std::runtime_error("poly text: bad vars header");
    ctx.names.resize(n);
    for (auto& s : ctx.names)
      if (!(ls >> s)) throw std::runtime_error("poly text: short vars header");
  }
  if (!std::getline(is, line) || line.rfind("kind ", 0) != 0)
    throw std::runtime_error("poly text: missing kind header");
  ctx.kind = line.substr(5);
  SparsePoly p(ctx);
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string ctxt;
    ls >> ctxt;
    QI c;
    if (!qi_parse(ctxt, c)) throw std::runtime_error("poly text: bad coefficient " + ctxt);
    ExpVec e(ctx.nvars());
    for (int i = 0; i < ctx.nvars(); i++) {
      int v;
      if (!(ls >> v) || v < 0 || v > 255) throw std::runtime_error("poly text: bad exponent");
      e[i] = std::uint8_t(v);
    }
    p.add_term(e, c);
  }
  return p;
}

std::string SparsePoly::to_text() const {
  std::ostringstream os;
  write_text(os);
  return os.str();
}

SparsePoly SparsePoly::from_text(const std::string& s) {
  std::istringstream is(s);
  return read_text(is);
}

bool divide_exact(const SparsePoly& numerator, const SparsePoly& divisor, SparsePoly& quotient,
                  SparsePoly& remainder) {
  if (divisor.is_zero()) throw std::invalid_argument("division by zero polynomial");
  if (numerator.ctx() != divisor.ctx()) throw std::invalid_argument("variable context mismatch");
  const auto& ctx = numerator.ctx();
  const int n = ctx.nvars();
  // leading term of the divisor under graded-lex (largest)
  const auto& dlead = *divisor.terms().rbegin();
  SparsePoly q(ctx), r = numerator;
  while (!r.is_zero()) {
    // find the largest term of r divisible by the divisor's lead
    bool reduced = false;
    for (auto it = r.terms().rbegin(); it != r.terms().rend(); ++it) {
      const ExpVec& e = it->first;
      bool div = true;
      for (int i = 0; i < n; i++)
        if (e[i] < dlead.first[i]) { div = false; break; }
      if (!div) continue;
      ExpVec qe(n);
      for (int i = 0; i < n; i++) qe[i] = std::uint8_t(e[i] - dlead.first[i]);
      QI qc = it->second / dlead.second;
      q.add_term(qe, qc);
      r = r - divisor * SparsePoly::monomial(ctx, qe, qc);
      reduced = true;
      break;
    }
    if (!reduced) break;
  }
  quotient = q;
  remainder = r;
  return r.is_zero();
}

}  // namespace tb
