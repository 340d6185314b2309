#include "kwakim/polynomial.hpp"

#include "kwakim/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace kwakim {

Polynomial Polynomial::constant(double c) {
  Polynomial p;
  p.terms_[{0, 0}] = c;
  p.prune();
  return p;
}

Polynomial Polynomial::variable(Variable v) {
  Polynomial p;
  p.terms_[v == Variable::u ? Exponents{1, 0} : Exponents{0, 1}] = 1.0;
  return p;
}

void Polynomial::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) it = it->second == 0.0 ? terms_.erase(it) : std::next(it);
}

Polynomial Polynomial::derivative(Variable v) const {
  Polynomial d;
  for (const auto& [e, c] : terms_) {
    const int k = v == Variable::u ? e.first : e.second;
    if (k == 0) continue;
    const Exponents de = v == Variable::u ? Exponents{k - 1, e.second} : Exponents{e.first, k - 1};
    d.terms_[de] += c * k;
  }
  d.prune();
  return d;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
  return d;
}

bool Polynomial::depends_on(Variable v) const {
  for (const auto& [e, c] : terms_)
    if ((v == Variable::u ? e.first : e.second) > 0) return true;
  return false;
}

double Polynomial::operator()(double u, double ux) const {
  double s = 0.0;
  for (const auto& [e, c] : terms_) s += c * std::pow(u, e.first) * std::pow(ux, e.second);
  return s;
}

Eigen::ArrayXd Polynomial::operator()(const Eigen::ArrayXd& u, const Eigen::ArrayXd& ux) const {
  if (u.size() != ux.size()) throw ShapeError("polynomial arguments differ in length");
  Eigen::ArrayXd s = Eigen::ArrayXd::Zero(u.size());
  for (const auto& [e, c] : terms_) {
    Eigen::ArrayXd t = Eigen::ArrayXd::Constant(u.size(), c);
    for (int i = 0; i < e.first; ++i) t *= u;
    for (int i = 0; i < e.second; ++i) t *= ux;
    s += t;
  }
  return s;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto [e, c] = *it;
    const double mag = std::abs(c);
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    first = false;
    bool need_star = false;
    if (mag != 1.0 || (e.first == 0 && e.second == 0)) {
      os << mag;
      need_star = true;
    }
    auto factor = [&](const char* name, int k) {
      if (k == 0) return;
      os << (need_star ? "*" : "") << name;
      if (k > 1) os << '^' << k;
      need_star = true;
    };
    factor("u", e.first);
    factor("ux", e.second);
  }
  return os.str();
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) terms_[e] += c;
  prune();
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  std::map<Exponents, double> out;
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) out[{e1.first + e2.first, e1.second + e2.second}] += c1 * c2;
  terms_ = std::move(out);
  prune();
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto& [e, c] : p.terms_) c = -c;
  return p;
}

Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
Polynomial operator-(Polynomial a, const Polynomial& b) { return a += -b; }
Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }

Polynomial pow(const Polynomial& p, int k) {
  if (k < 0) throw ParameterError("negative polynomial power");
  Polynomial r = Polynomial::constant(1.0);
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("cannot parse '" + s_ + "' at position " + std::to_string(pos_) + ": " + why);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      if (eat('+'))
        p += term();
      else if (eat('-'))
        p += -term();
      else
        return p;
    }
  }

  Polynomial term() {
    Polynomial p = unary();
    while (eat('*')) p *= unary();
    return p;
  }

  Polynomial unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    if (!eat('^')) return base;
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be a non-negative integer");
    int k = 0;
    const auto res = std::from_chars(s_.data() + start, s_.data() + pos_, k);
    if (res.ec != std::errc{} || k > 64) fail("exponent out of range");
    return pow(base, k);
  }

  Polynomial primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (eat('(')) {
      Polynomial p = expr();
      if (!eat(')')) fail("missing ')'");
      return p;
    }
    const char c = s_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "u") return Polynomial::variable(Variable::u);
      if (name == "ux") return Polynomial::variable(Variable::ux);
      pos_ = start;
      fail("unknown symbol '" + name + "'");
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      const auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
      if (res.ec != std::errc{}) fail("bad number");
      pos_ = static_cast<std::size_t>(res.ptr - s_.data());
      if (!std::isfinite(v)) fail("non-finite constant");
      return Polynomial::constant(v);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::parse(const std::string& text) { return Parser(text).parse(); }

}  // namespace kwakim
