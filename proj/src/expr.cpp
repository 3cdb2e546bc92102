#include "weakhyp/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <utility>

namespace weakhyp {

namespace {
bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }
}  // namespace

ExprPtr Expr::constant(double v) {
  Expr e;
  e.kind_ = Kind::Constant;
  e.value_ = v;
  return std::shared_ptr<const Expr>(new Expr(std::move(e)));
}

ExprPtr Expr::time() {
  Expr e;
  e.kind_ = Kind::Time;
  return std::shared_ptr<const Expr>(new Expr(std::move(e)));
}

ExprPtr Expr::abs_power(double p) {
  if (!(p > 0.0)) throw std::invalid_argument("abs_power requires exponent > 0");
  Expr e;
  e.kind_ = Kind::AbsPower;
  e.value_ = p;
  e.ipow_ = 0;  // derivative order
  return std::shared_ptr<const Expr>(new Expr(std::move(e)));
}

ExprPtr Expr::abs_power_deriv(double p, long d) {
  if (!(p > 0.0) || d < 0) throw std::invalid_argument("abs_power_deriv: bad arguments");
  Expr e;
  e.kind_ = Kind::AbsPower;
  e.value_ = p;
  e.ipow_ = d;
  return std::shared_ptr<const Expr>(new Expr(std::move(e)));
}

ExprPtr Expr::sum(std::vector<ExprPtr> terms, std::vector<int> signs) {
  if (terms.empty() || terms.size() != signs.size())
    throw std::invalid_argument("sum: terms/signs mismatch");
  Expr e;
  e.kind_ = Kind::Sum;
  e.children_ = std::move(terms);
  e.signs_ = std::move(signs);
  return std::shared_ptr<const Expr>(new Expr(std::move(e)));
}

ExprPtr Expr::product(std::vector<ExprPtr> factors) {
  if (factors.empty()) throw std::invalid_argument("product: no factors");
  Expr e;
  e.kind_ = Kind::Product;
  e.children_ = std::move(factors);
  return std::shared_ptr<const Expr>(new Expr(std::move(e)));
}

ExprPtr Expr::int_power(ExprPtr base, long k) {
  if (k < 2) throw std::invalid_argument("int_power requires exponent >= 2");
  Expr e;
  e.kind_ = Kind::IntPower;
  e.ipow_ = k;
  e.children_ = {std::move(base)};
  return std::shared_ptr<const Expr>(new Expr(std::move(e)));
}

ExprPtr Expr::sin(ExprPtr arg) {
  Expr e;
  e.kind_ = Kind::Sin;
  e.children_ = {std::move(arg)};
  return std::shared_ptr<const Expr>(new Expr(std::move(e)));
}

ExprPtr Expr::cos(ExprPtr arg) {
  Expr e;
  e.kind_ = Kind::Cos;
  e.children_ = {std::move(arg)};
  return std::shared_ptr<const Expr>(new Expr(std::move(e)));
}

namespace {

// d-th derivative of |t|^p at t.  The running product p(p-1)...(p-d+1)
// detects the smooth integer cases; classically undefined points throw.
double eval_abs_power(double p, long d, double t) {
  if (d == 0) return std::pow(std::fabs(t), p);
  double coeff = 1.0;
  for (long i = 0; i < d; ++i) coeff *= (p - static_cast<double>(i));
  const double e = p - static_cast<double>(d);
  if (t != 0.0) {
    double v = coeff * std::pow(std::fabs(t), e);
    if (d % 2 == 1 && t < 0.0) v = -v;
    return v;
  }
  // t == 0
  if (coeff == 0.0) {
    // p is an integer < d; |t|^p is smooth iff p is even.
    if (is_integer(p) && static_cast<long>(p) % 2 != 0) throw SingularPointError(t);
    return 0.0;
  }
  if (e > 0.0) return 0.0;
  if (e == 0.0) {
    if (d % 2 == 0) return coeff;
    throw SingularPointError(t);  // coeff * sign(t)^odd jumps at 0
  }
  throw SingularPointError(t);
}

}  // namespace

double Expr::eval(double t) const {
  switch (kind_) {
    case Kind::Constant:
      return value_;
    case Kind::Time:
      return t;
    case Kind::AbsPower:
      return eval_abs_power(value_, ipow_, t);
    case Kind::Sum: {
      double s = 0.0;
      for (std::size_t i = 0; i < children_.size(); ++i)
        s += signs_[i] * children_[i]->eval(t);
      return s;
    }
    case Kind::Product: {
      double p = 1.0;
      for (const auto& c : children_) p *= c->eval(t);
      return p;
    }
    case Kind::IntPower: {
      double b = children_[0]->eval(t);
      double r = 1.0;
      for (long i = 0; i < ipow_; ++i) r *= b;
      return r;
    }
    case Kind::Sin:
      return std::sin(children_[0]->eval(t));
    case Kind::Cos:
      return std::cos(children_[0]->eval(t));
  }
  return 0.0;
}

ExprPtr derivative(const ExprPtr& e) {
  using K = Expr::Kind;
  switch (e->kind()) {
    case K::Constant:
      return Expr::constant(0.0);
    case K::Time:
      return Expr::constant(1.0);
    case K::AbsPower:
      // eval() carries the falling-factorial coefficient and sign factors.
      return Expr::abs_power_deriv(e->value(), e->ipow() + 1);
    case K::Sum: {
      std::vector<ExprPtr> d;
      d.reserve(e->children().size());
      for (const auto& c : e->children()) d.push_back(derivative(c));
      return Expr::sum(std::move(d), e->signs());
    }
    case K::Product: {
      std::vector<ExprPtr> terms;
      for (std::size_t i = 0; i < e->children().size(); ++i) {
        std::vector<ExprPtr> f = e->children();
        f[i] = derivative(f[i]);
        terms.push_back(Expr::product(std::move(f)));
      }
      return Expr::sum(std::move(terms), std::vector<int>(terms.size(), 1));
    }
    case K::IntPower: {
      const auto& base = e->children()[0];
      long k = e->ipow();
      ExprPtr inner = (k == 2) ? base : Expr::int_power(base, k - 1);
      return Expr::product({Expr::constant(static_cast<double>(k)), inner, derivative(base)});
    }
    case K::Sin:
      return Expr::product({Expr::cos(e->children()[0]), derivative(e->children()[0])});
    case K::Cos:
      return Expr::product(
          {Expr::constant(-1.0), Expr::sin(e->children()[0]), derivative(e->children()[0])});
  }
  return Expr::constant(0.0);
}

ExprPtr derivative(const ExprPtr& e, int order) {
  ExprPtr r = e;
  for (int i = 0; i < order; ++i) r = derivative(r);
  return r;
}

std::string format_double(double v) {
  char buf[40];
  for (int prec : {15, 16, 17}) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

namespace {

enum class Prec { Sum, Product, Power };

void print(const ExprPtr& e, Prec ctx, std::string& out) {
  using K = Expr::Kind;
  const bool need_paren = [&] {
    switch (e->kind()) {
      case K::Sum:
        return ctx != Prec::Sum;
      case K::Product:
        return ctx == Prec::Power;
      default:
        return false;
    }
  }();
  if (need_paren) out += '(';
  switch (e->kind()) {
    case K::Constant:
      out += format_double(e->value());
      break;
    case K::Time:
      out += 't';
      break;
    case K::AbsPower:
      if (e->ipow() > 0) {
        out += "D^" + std::to_string(e->ipow()) + "[abs(t)^" + format_double(e->value()) + "]";
      } else {
        out += "abs(t)";
        if (e->value() != 1.0) out += "^" + format_double(e->value());
      }
      break;
    case K::Sum:
      for (std::size_t i = 0; i < e->children().size(); ++i) {
        if (i > 0)
          out += e->signs()[i] > 0 ? " + " : " - ";
        else if (e->signs()[0] < 0)
          out += "-";
        print(e->children()[i], Prec::Sum, out);
      }
      break;
    case K::Product:
      for (std::size_t i = 0; i < e->children().size(); ++i) {
        if (i > 0) out += "*";
        print(e->children()[i], Prec::Product, out);
      }
      break;
    case K::IntPower:
      print(e->children()[0], Prec::Power, out);
      out += "^" + std::to_string(e->ipow());
      break;
    case K::Sin:
      out += "sin(";
      print(e->children()[0], Prec::Sum, out);
      out += ')';
      break;
    case K::Cos:
      out += "cos(";
      print(e->children()[0], Prec::Sum, out);
      out += ')';
      break;
  }
  if (need_paren) out += ')';
}

}  // namespace

std::string to_string(const ExprPtr& e) {
  std::string out;
  print(e, Prec::Sum, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parser: recursive descent over the canonical grammar.

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  ExprPtr run() {
    auto e = expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("trailing input", pos_);
    return e;
  }

 private:
  ExprPtr expr() {
    std::vector<ExprPtr> terms;
    std::vector<int> signs;
    terms.push_back(term());
    signs.push_back(1);
    for (;;) {
      skip_ws();
      if (peek() == '+' || peek() == '-') {
        int sign = (s_[pos_++] == '+') ? 1 : -1;
        terms.push_back(term());
        signs.push_back(sign);
      } else {
        break;
      }
    }
    if (terms.size() == 1) return terms[0];
    return Expr::sum(std::move(terms), std::move(signs));
  }

  ExprPtr term() {
    std::vector<ExprPtr> factors;
    factors.push_back(factor());
    for (;;) {
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        factors.push_back(factor());
      } else {
        break;
      }
    }
    if (factors.size() == 1) return factors[0];
    return Expr::product(std::move(factors));
  }

  ExprPtr factor() {
    skip_ws();
    bool was_abs = false;
    ExprPtr b = base(&was_abs);
    skip_ws();
    if (peek() != '^') return b;
    ++pos_;
    skip_ws();
    std::size_t at = pos_;
    double p = number();
    if (was_abs) {
      if (!(p > 0.0)) throw ParseError("abs_power exponent must be > 0", at);
      return Expr::abs_power(p);
    }
    if (!is_integer(p) || p < 0.0)
      throw ParseError("integer power expected (fractional powers only on abs(t))", at);
    long k = static_cast<long>(p);
    if (k == 0) return Expr::constant(1.0);
    if (k == 1) return b;
    return Expr::int_power(b, k);
  }

  // On return *was_abs marks a bare 'abs(t)' so factor() can attach the
  // exponent to the node itself.
  ExprPtr base(bool* was_abs) {
    skip_ws();
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return Expr::constant(number());
    }
    if (match("abs(t)")) {
      *was_abs = true;
      return Expr::abs_power(1.0);
    }
    if (match("sin(")) {
      auto a = expr();
      expect(')');
      return Expr::sin(a);
    }
    if (match("cos(")) {
      auto a = expr();
      expect(')');
      return Expr::cos(a);
    }
    if (c == 't') {
      ++pos_;
      return Expr::time();
    }
    if (c == '(') {
      ++pos_;
      auto e = expr();
      expect(')');
      return e;
    }
    throw ParseError("expected number, 't', 'abs(t)', 'sin(', 'cos(' or '('", pos_);
  }

  double number() {
    skip_ws();
    const char* start = s_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(start, &end);
    if (end == start) throw ParseError("number expected", pos_);
    pos_ += static_cast<std::size_t>(end - start);
    return v;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  bool match(const char* kw) {
    std::size_t n = std::strlen(kw);
    if (s_.compare(pos_, n, kw) == 0) {
      pos_ += n;
      return true;
    }
    return false;
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse_coeff_expr(const std::string& text) { return Parser(text).run(); }

}  // namespace weakhyp
