#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace weakhyp {

// Requested derivative does not classically exist at this point
// (abs(t)^p kink at t = 0 with p <= derivative order).
class SingularPointError : public std::runtime_error {
 public:
  explicit SingularPointError(double t)
      : std::runtime_error("derivative undefined at t = " + std::to_string(t) +
                           " (abs-power kink)"),
        t_(t) {}
  double where() const { return t_; }

 private:
  double t_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (position " + std::to_string(pos) + ")"),
        pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression tree over the time variable t.
//
// Node kinds follow the canonical grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := base ('^' number)?
//   base   := number | 't' | 'abs(t)' | 'sin(' expr ')' | 'cos(' expr ')' | '(' expr ')'
//
// The tree is closed under d/dt: derivatives of abs(t)^p are tracked by the
// pair (exponent p, derivative order d) on the AbsPower node itself, so no
// extra node kinds are needed.
class Expr {
 public:
  enum class Kind { Constant, Time, AbsPower, Sum, Product, IntPower, Sin, Cos };

  static ExprPtr constant(double v);
  static ExprPtr time();
  static ExprPtr abs_power(double p);  // |t|^p, requires p > 0
  // d-th derivative of |t|^p as a single node (d >= 0); produced by
  // derivative(), not by the parser.
  static ExprPtr abs_power_deriv(double p, long d);
  static ExprPtr sum(std::vector<ExprPtr> terms, std::vector<int> signs);
  static ExprPtr product(std::vector<ExprPtr> factors);
  static ExprPtr int_power(ExprPtr base, long k);  // requires k >= 2
  static ExprPtr sin(ExprPtr arg);
  static ExprPtr cos(ExprPtr arg);

  Kind kind() const { return kind_; }
  // Constant: the value.  AbsPower: the exponent p.
  double value() const { return value_; }
  // IntPower: the exponent k.  AbsPower: how many times differentiated.
  long ipow() const { return ipow_; }
  const std::vector<ExprPtr>& children() const { return children_; }
  // Parallel to children() for Sum nodes, entries +1 / -1.
  const std::vector<int>& signs() const { return signs_; }

  double eval(double t) const;

 private:
  Expr() = default;
  Kind kind_ = Kind::Constant;
  double value_ = 0.0;
  long ipow_ = 0;
  std::vector<ExprPtr> children_;
  std::vector<int> signs_;
};

// Parses the canonical text form.  Throws ParseError.
ExprPtr parse_coeff_expr(const std::string& text);

// Canonical text form; parse_coeff_expr(to_string(e)) reproduces e for any
// parser-produced tree.  Trees created by differentiation may contain
// constructs outside the grammar (negative constants, differentiated
// abs-powers); these print in an extended debug form.
std::string to_string(const ExprPtr& e);

ExprPtr derivative(const ExprPtr& e);
ExprPtr derivative(const ExprPtr& e, int order);

// Round-trip formatting of a double (shortest of %.15g/%.16g/%.17g that
// parses back exactly).
std::string format_double(double v);

}  // namespace weakhyp
