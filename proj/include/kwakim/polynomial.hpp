#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>
#include <utility>

namespace kwakim {

enum class Variable { u, ux };

/// Polynomial in the two symbols u and ux with real coefficients. Used as the
/// reaction / advection descriptor of the periodic examples.
class Polynomial {
 public:
  using Exponents = std::pair<int, int>;  // (power of u, power of ux)

  Polynomial() = default;
  static Polynomial constant(double c);
  static Polynomial variable(Variable v);

  /// Grammar: sums and differences of products of factors; a factor is a real
  /// constant, u, ux, a parenthesized expression, unary minus, or factor ^ k
  /// with a non-negative integer k. Implicit multiplication is not accepted.
  /// Throws ParseError.
  static Polynomial parse(const std::string& text);

  Polynomial derivative(Variable v) const;
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  bool depends_on(Variable v) const;

  double operator()(double u, double ux) const;
  Eigen::ArrayXd operator()(const Eigen::ArrayXd& u, const Eigen::ArrayXd& ux) const;

  const std::map<Exponents, double>& terms() const noexcept { return terms_; }
  std::string to_string() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial operator-() const;

 private:
  void prune();
  std::map<Exponents, double> terms_;
};

Polynomial operator+(Polynomial a, const Polynomial& b);
Polynomial operator-(Polynomial a, const Polynomial& b);
Polynomial operator*(Polynomial a, const Polynomial& b);
Polynomial pow(const Polynomial& p, int k);

}  // namespace kwakim
