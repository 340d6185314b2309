#include "kwakim/fourier.hpp"

#include "kwakim/errors.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace kwakim {

namespace {

using cplx = std::complex<double>;

double parity(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

int wrap(int k, int P) { return ((k % P) + P) % P; }

void check_band(int max_mode) {
  if (max_mode < 0) throw ParameterError("max_mode must be non-negative");
}

void check_same_band(const FourierField& a, const FourierField& b) {
  if (a.max_mode() != b.max_mode()) throw ShapeError("Fourier fields have different bands");
}

}  // namespace

FourierField::FourierField(int max_mode, bool real) : max_mode_(max_mode), real_(real) {
  check_band(max_mode);
  c_ = Eigen::VectorXcd::Zero(2 * max_mode + 1);
}

FourierField::FourierField(Eigen::VectorXcd coefficients, bool real) : real_(real), c_(std::move(coefficients)) {
  if (c_.size() % 2 == 0) throw ShapeError("coefficient vector must have odd length 2N+1");
  max_mode_ = static_cast<int>(c_.size() / 2);
}

FourierField FourierField::from_physical(const Eigen::VectorXd& values, int max_mode) {
  return from_physical(Eigen::VectorXcd(values.cast<cplx>()), max_mode, true);
}

FourierField FourierField::from_physical(const Eigen::VectorXcd& values, int max_mode, bool real) {
  check_band(max_mode);
  const int P = static_cast<int>(values.size());
  if (P < 2 * max_mode + 1) throw ShapeError("physical grid too coarse for the requested band");
  Eigen::FFT<double> fft;
  std::vector<cplx> in(values.data(), values.data() + P), out;
  fft.fwd(out, in);
  FourierField f(max_mode, real);
  for (int k = -max_mode; k <= max_mode; ++k) f[k] = parity(k) * out[static_cast<std::size_t>(wrap(k, P))] / double(P);
  if (real) {
    f[0] = f[0].real();
    for (int k = 1; k <= max_mode; ++k) {
      const cplx avg = 0.5 * (f[k] + std::conj(f[-k]));
      f[k] = avg;
      f[-k] = std::conj(avg);
    }
  }
  return f;
}

FourierField FourierField::trig(int max_mode, int k, double sin_coef, double cos_coef) {
  if (k < 0 || k > max_mode) throw IndexError("trig mode outside the band");
  FourierField f(max_mode, true);
  if (k == 0) {
    f[0] = cos_coef;
    return f;
  }
  // a sin(kx) + b cos(kx) = (b/2 - i a/2) e^{ikx} + (b/2 + i a/2) e^{-ikx}
  f[k] = cplx(0.5 * cos_coef, -0.5 * sin_coef);
  f[-k] = cplx(0.5 * cos_coef, 0.5 * sin_coef);
  return f;
}

cplx FourierField::operator[](int k) const {
  if (k < -max_mode_ || k > max_mode_) return 0.0;
  return c_(k + max_mode_);
}

cplx& FourierField::operator[](int k) {
  if (k < -max_mode_ || k > max_mode_) throw IndexError("Fourier mode outside the band");
  return c_(k + max_mode_);
}

Eigen::VectorXcd FourierField::physical_complex(int P) const {
  if (P < 2 * max_mode_ + 1) throw ShapeError("physical grid too coarse for the band");
  std::vector<cplx> spec(static_cast<std::size_t>(P), 0.0), out;
  for (int k = -max_mode_; k <= max_mode_; ++k) spec[static_cast<std::size_t>(wrap(k, P))] = parity(k) * (*this)[k];
  Eigen::FFT<double> fft;
  fft.inv(out, spec);
  Eigen::VectorXcd v(P);
  for (int j = 0; j < P; ++j) v(j) = double(P) * out[static_cast<std::size_t>(j)];
  return v;
}

Eigen::VectorXd FourierField::physical(int P) const { return physical_complex(P).real(); }

FourierField FourierField::derivative(int order) const {
  if (order < 0) throw ParameterError("derivative order must be non-negative");
  FourierField d = *this;
  for (int k = -max_mode_; k <= max_mode_; ++k) d[k] *= std::pow(cplx(0.0, k), order);
  return d;
}

FourierField FourierField::apply_symbol(const std::function<double(int)>& s) const {
  FourierField d = *this;
  for (int k = -max_mode_; k <= max_mode_; ++k) d[k] *= s(k);
  return d;
}

FourierField FourierField::resized(int max_mode) const {
  FourierField r(max_mode, real_);
  const int m = std::min(max_mode, max_mode_);
  for (int k = -m; k <= m; ++k) r[k] = (*this)[k];
  return r;
}

double FourierField::symmetry_defect() const {
  double d = 0.0;
  for (int k = 0; k <= max_mode_; ++k) d = std::max(d, std::abs((*this)[-k] - std::conj((*this)[k])));
  return d;
}

FourierField& FourierField::operator+=(const FourierField& o) {
  check_same_band(*this, o);
  c_ += o.c_;
  real_ = real_ && o.real_;
  return *this;
}

FourierField& FourierField::operator-=(const FourierField& o) {
  check_same_band(*this, o);
  c_ -= o.c_;
  real_ = real_ && o.real_;
  return *this;
}

FourierField& FourierField::operator*=(double s) {
  c_ *= s;
  return *this;
}

FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }
FourierField operator*(double s, FourierField a) { return a *= s; }

int dealiased_grid(int max_mode, int degree) {
  const int need = (std::max(degree, 1) + 1) * max_mode + 1;
  int P = 1;
  while (P < need) P *= 2;
  return P;
}

FourierField pointwise(const std::vector<FourierField>& inputs, int degree,
                       const std::function<Eigen::ArrayXd(const std::vector<Eigen::ArrayXd>&)>& map) {
  if (inputs.empty()) throw SizeError("pointwise needs at least one input field");
  const int N = inputs.front().max_mode();
  for (const auto& f : inputs) check_same_band(inputs.front(), f);
  const int P = dealiased_grid(N, degree);
  std::vector<Eigen::ArrayXd> values;
  values.reserve(inputs.size());
  for (const auto& f : inputs) values.push_back(f.physical(P).array());
  const Eigen::ArrayXd out = map(values);
  if (out.size() != P) throw ShapeError("pointwise map changed the grid size");
  return FourierField::from_physical(Eigen::VectorXd(out.matrix()), N);
}

FourierField product(const FourierField& a, const FourierField& b) {
  return pointwise({a, b}, 2, [](const std::vector<Eigen::ArrayXd>& x) -> Eigen::ArrayXd { return x[0] * x[1]; });
}

double state_norm(const FieldState& s) {
  double acc = 0.0;
  for (const auto& f : s) acc += f.norm() * f.norm();
  return std::sqrt(acc);
}

FieldState state_difference(const FieldState& a, const FieldState& b) {
  if (a.size() != b.size()) throw ShapeError("field states have different component counts");
  FieldState d;
  for (std::size_t i = 0; i < a.size(); ++i) d.push_back(a[i] - b[i]);
  return d;
}

FieldTrajectory spectral_evolve(const SpectralSystem& system, const FieldState& x0, TimeSpan span, double dt,
                                Scheme scheme, int record_every) {
  const auto m = system.pattern.size();
  const int N = system.max_mode;
  if (x0.size() != m) throw ShapeError("initial state has the wrong number of components");
  for (const auto& f : x0)
    if (f.max_mode() != N) throw ShapeError("initial state band differs from the system band");
  if (!(dt > 0.0) || !(span.t1 >= span.t0)) throw ParameterError("spectral_evolve needs dt > 0 and t1 >= t0");
  if (record_every < 1) throw ParameterError("record_every must be positive");
  if (!system.eigenvalue || !system.nonlinearity) throw ParameterError("spectral system is incomplete");

  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil((span.t1 - span.t0) / dt - 1e-9)));
  const double h = (span.t1 - span.t0) / static_cast<double>(steps);

  std::vector<StepOperators> ops;
  ops.reserve(static_cast<std::size_t>(2 * N + 1));
  for (int k = -N; k <= N; ++k) ops.push_back(step_operators(system.eigenvalue(k), h, system.pattern));

  const auto rows = static_cast<Eigen::Index>(2 * N + 1);
  const auto cols = static_cast<Eigen::Index>(m);
  auto stack = [&](const FieldState& s) {
    Eigen::MatrixXcd X(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) X.col(c) = s[static_cast<std::size_t>(c)].coefficients();
    return X;
  };
  auto unstack = [&](const Eigen::MatrixXcd& X, const FieldState& like) {
    FieldState s = like;
    for (Eigen::Index c = 0; c < cols; ++c) s[static_cast<std::size_t>(c)].coefficients() = X.col(c);
    return s;
  };
  // out.row(k) += sign * (op * in.row(k)^T)^T
  auto apply = [&](Eigen::MatrixXcd& out, const Eigen::MatrixXcd& in, auto member, double sign) {
    for (Eigen::Index r = 0; r < rows; ++r)
      out.row(r).noalias() += sign * (ops[static_cast<std::size_t>(r)].*member).template cast<cplx>() *
                              in.row(r).transpose();
  };

  FieldTrajectory traj;
  traj.times.push_back(span.t0);
  traj.states.push_back(x0);
  FieldState x = x0;
  for (std::size_t step = 1; step <= steps; ++step) {
    const Eigen::MatrixXcd X = stack(x);
    const Eigen::MatrixXcd F0 = stack(system.nonlinearity(x));
    Eigen::MatrixXcd pred = Eigen::MatrixXcd::Zero(rows, cols);
    apply(pred, X, &StepOperators::E, 1.0);
    apply(pred, F0, &StepOperators::W0, 1.0);
    Eigen::MatrixXcd next;
    if (scheme == Scheme::etd2rk) {
      const Eigen::MatrixXcd F1 = stack(system.nonlinearity(unstack(pred, x)));
      const Eigen::MatrixXcd dF = F1 - F0;
      next = Eigen::MatrixXcd::Zero(rows, cols);
      apply(next, X, &StepOperators::E, 1.0);
      apply(next, F1, &StepOperators::W0, 1.0);
      apply(next, dF, &StepOperators::W1, -1.0);
    } else {
      next = std::move(pred);
    }
    if (!next.allFinite() || next.cwiseAbs().maxCoeff() > 1e150)
      throw DivergenceError("spectral_evolve: coefficients overflowed", step);
    x = unstack(next, x);
    if (step % static_cast<std::size_t>(record_every) == 0 || step == steps) {
      traj.times.push_back(span.t0 + h * static_cast<double>(step));
      traj.states.push_back(x);
    }
  }
  return traj;
}

void write_csv(std::ostream& out, const FieldTrajectory& trajectory) {
  out.precision(17);
  out << "t,component,k,re,im\n";
  for (std::size_t i = 0; i < trajectory.times.size(); ++i)
    for (std::size_t c = 0; c < trajectory.states[i].size(); ++c) {
      const auto& f = trajectory.states[i][c];
      for (int k = -f.max_mode(); k <= f.max_mode(); ++k)
        out << trajectory.times[i] << ',' << c << ',' << k << ',' << f[k].real() << ',' << f[k].imag() << '\n';
    }
}

}  // namespace kwakim
