#pragma once

#include "kwakim/spectra.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

namespace kwakim {

/// Upper-triangular 0/1 block pattern J with unit diagonal. The linear part of
/// mode k is lambda_k * J.
class JordanPattern {
 public:
  explicit JordanPattern(Eigen::MatrixXd mask);

  /// Full Jordan cell of size m: ones on the diagonal and first superdiagonal.
  static JordanPattern jordan(std::size_t m);
  static JordanPattern identity(std::size_t m);
  /// [[1,0,0],[0,1,1],[0,0,1]], the pattern of the transformed Burgers system.
  static JordanPattern burgers();

  std::size_t size() const noexcept { return static_cast<std::size_t>(mask_.rows()); }
  const Eigen::MatrixXd& mask() const noexcept { return mask_; }
  /// J - I, strictly upper triangular.
  const Eigen::MatrixXd& nilpotent() const noexcept { return nilpotent_; }

 private:
  Eigen::MatrixXd mask_;
  Eigen::MatrixXd nilpotent_;
};

/// exp(-t * lambda * J), summed exactly through the nilpotent part.
Eigen::MatrixXd block_propagator(double lambda, double t, const JordanPattern& pattern);

/// g_j(x) = int_0^1 s^j / j! e^{-x s} ds, accurate for either sign of x.
double phi_moment(int j, double x);

/// One-step operators for d/dt xi + lambda J xi = f(t) over a signed step h:
///   E  = exp(-h lambda J)
///   W0 = int_0^h exp(-sigma lambda J) d sigma
///   W1 = int_0^h exp(-sigma lambda J) (sigma / h) d sigma
/// so that, with f linear between f_old (start) and f_new (end),
///   xi_new = E xi_old + W0 f_new - W1 (f_new - f_old).
/// lambda = 0 is allowed (used for the Fourier mean mode).
struct StepOperators {
  Eigen::MatrixXd E;
  Eigen::MatrixXd W0;
  Eigen::MatrixXd W1;
};

StepOperators step_operators(double lambda, double h, const JordanPattern& pattern);

/// Spectral coefficients of a state: `components` vectors of length `modes`,
/// stored as the columns of a modes x components matrix. For m = 2 the columns
/// are (u, v).
class StateVector {
 public:
  StateVector() = default;
  StateVector(std::size_t modes, std::size_t components);
  explicit StateVector(Eigen::MatrixXd coeffs);

  std::size_t modes() const noexcept { return static_cast<std::size_t>(coeffs_.rows()); }
  std::size_t components() const noexcept { return static_cast<std::size_t>(coeffs_.cols()); }

  Eigen::MatrixXd& coeffs() noexcept { return coeffs_; }
  const Eigen::MatrixXd& coeffs() const noexcept { return coeffs_; }

  Eigen::VectorXd component(std::size_t i) const { return coeffs_.col(static_cast<Eigen::Index>(i)); }
  void set_component(std::size_t i, const Eigen::VectorXd& values);

  /// sqrt(sum of squared component norms).
  double norm() const { return coeffs_.norm(); }
  bool all_finite() const { return coeffs_.allFinite(); }

  StateVector& operator+=(const StateVector& o);
  StateVector& operator-=(const StateVector& o);
  StateVector& operator*=(double s);

 private:
  Eigen::MatrixXd coeffs_;
};

StateVector operator+(StateVector a, const StateVector& b);
StateVector operator-(StateVector a, const StateVector& b);
StateVector operator*(double s, StateVector a);

enum class NonlinearityForm { general, lower_triangular };

/// Globally Lipschitz nonlinearity with constant L. The lower-triangular form
/// maps xi = (u, ..., w) to (0, ..., 0, F(u)).
struct NonlinearitySpec {
  double L = 0.0;
  NonlinearityForm form = NonlinearityForm::general;
  std::function<StateVector(const StateVector&)> general;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> scalar;  // F for lower_triangular

  StateVector operator()(const StateVector& xi) const;

  static NonlinearitySpec zero();
  static NonlinearitySpec make_general(double L, std::function<StateVector(const StateVector&)> f);
  static NonlinearitySpec make_lower_triangular(double L,
                                                std::function<Eigen::VectorXd(const Eigen::VectorXd&)> F);
};

struct JordanSystem {
  JordanSystem(EigenvalueLadder ladder, JordanPattern pattern, NonlinearitySpec nonlinearity);

  EigenvalueLadder ladder;
  JordanPattern pattern;
  NonlinearitySpec nonlinearity;

  std::size_t modes() const noexcept { return ladder.size(); }
  std::size_t block_size() const noexcept { return pattern.size(); }
  std::size_t dimension() const noexcept { return modes() * block_size(); }
  StateVector zero_state() const { return StateVector(modes(), block_size()); }
};

struct TimeSpan {
  double t0 = 0.0;
  double t1 = 0.0;
};

enum class Scheme {
  exponential_euler,  // order 1
  etd2rk,             // order 2 (exponential trapezoid predictor-corrector)
};

int scheme_order(Scheme scheme);

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  int order = 0;
};

/// 0.1 / lambda_N.
double default_dt(const EigenvalueLadder& ladder);

/// Exponential integration of d/dt xi + (J (x) A) xi = F(xi). The linear part
/// is exact per mode block; the step is adjusted to divide the span evenly.
Trajectory evolve(const JordanSystem& system, const StateVector& xi0, TimeSpan span, double dt,
                  Scheme scheme = Scheme::etd2rk);

/// Applies block_propagator mode by mode: the exact linear flow over time t.
StateVector propagate_linear(const JordanSystem& system, const StateVector& xi0, double t);

/// Max over interior grid points of ||A^{-1} u'' + 2 u' + A u + F(u)|| with
/// centered second-order differences. Requires m = 2, a lower-triangular
/// nonlinearity (or zero) and a uniform grid with at least 3 points.
double second_order_residual(const JordanSystem& system, const Trajectory& trajectory);

/// CSV with columns t, then component-major coefficients (u1..uN, v1..vN, ...).
void write_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace kwakim
