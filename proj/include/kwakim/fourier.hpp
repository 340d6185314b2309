#pragma once

#include "kwakim/dynamics.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <iosfwd>
#include <vector>

namespace kwakim {

/// Truncated Fourier series u(x) = sum_{|k| <= N} c_k e^{ikx} on (-pi, pi).
/// Coefficient c_k lives at index k + N.
class FourierField {
 public:
  FourierField() = default;
  /// Zero field with modes -max_mode..max_mode.
  explicit FourierField(int max_mode, bool real = true);
  FourierField(Eigen::VectorXcd coefficients, bool real);

  /// Sampled on the uniform grid x_j = -pi + 2 pi j / P; modes beyond
  /// max_mode are dropped. A real field gets its conjugate symmetry enforced.
  static FourierField from_physical(const Eigen::VectorXd& values, int max_mode);
  static FourierField from_physical(const Eigen::VectorXcd& values, int max_mode, bool real);
  /// a sin(kx) + b cos(kx) as a real field.
  static FourierField trig(int max_mode, int k, double sin_coef, double cos_coef = 0.0);

  int max_mode() const noexcept { return max_mode_; }
  bool is_real() const noexcept { return real_; }
  std::complex<double> operator[](int k) const;
  std::complex<double>& operator[](int k);
  const Eigen::VectorXcd& coefficients() const noexcept { return c_; }
  Eigen::VectorXcd& coefficients() noexcept { return c_; }

  /// Values on the P-point grid, P >= 2 max_mode + 1. Real part for real fields.
  Eigen::VectorXd physical(int P) const;
  Eigen::VectorXcd physical_complex(int P) const;

  /// Spectral derivative of the given order.
  FourierField derivative(int order = 1) const;
  /// Multiplies c_k by s(k).
  FourierField apply_symbol(const std::function<double(int)>& s) const;
  /// Zero-padded or truncated to a new max_mode.
  FourierField resized(int max_mode) const;

  /// sqrt(sum |c_k|^2), the mean-square norm of u.
  double norm() const { return c_.norm(); }
  /// max |c_{-k} - conj(c_k)|.
  double symmetry_defect() const;
  bool all_finite() const { return c_.allFinite(); }

  FourierField& operator+=(const FourierField& o);
  FourierField& operator-=(const FourierField& o);
  FourierField& operator*=(double s);

 private:
  int max_mode_ = 0;
  bool real_ = true;
  Eigen::VectorXcd c_;
};

FourierField operator+(FourierField a, const FourierField& b);
FourierField operator-(FourierField a, const FourierField& b);
FourierField operator*(double s, FourierField a);

/// Smallest power of two P with P >= (degree + 1) max_mode + 1. On that grid a
/// pointwise polynomial of the given degree in fields of that band has exact
/// coefficients for |k| <= max_mode.
int dealiased_grid(int max_mode, int degree);

/// Evaluates a pointwise map of the physical values of `inputs` on the
/// dealiased grid for `degree` and returns its first max_mode coefficients.
FourierField pointwise(const std::vector<FourierField>& inputs, int degree,
                       const std::function<Eigen::ArrayXd(const std::vector<Eigen::ArrayXd>&)>& map);

/// Dealiased product a b.
FourierField product(const FourierField& a, const FourierField& b);

/// Components of a field state (u, v, ...), all with the same band.
using FieldState = std::vector<FourierField>;

double state_norm(const FieldState& s);
FieldState state_difference(const FieldState& a, const FieldState& b);

/// d/dt X + lambda(k) J X_k = N(X), mode by mode.
struct SpectralSystem {
  int max_mode = 0;
  JordanPattern pattern = JordanPattern::identity(1);
  std::function<double(int)> eigenvalue;
  std::function<FieldState(const FieldState&)> nonlinearity;
};

struct FieldTrajectory {
  std::vector<double> times;
  std::vector<FieldState> states;
};

/// Exponential integration with the same one-step operators as evolve; the
/// step is shrunk to divide the span. Every `record_every`-th step is kept
/// along with the final state.
FieldTrajectory spectral_evolve(const SpectralSystem& system, const FieldState& x0, TimeSpan span, double dt,
                                Scheme scheme = Scheme::etd2rk, int record_every = 1);

/// Long-format CSV: t, component, k, re, im.
void write_csv(std::ostream& out, const FieldTrajectory& trajectory);

}  // namespace kwakim
