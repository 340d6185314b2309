#include "kwakim/dynamics.hpp"

#include "kwakim/errors.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

namespace kwakim {

JordanPattern::JordanPattern(Eigen::MatrixXd mask) : mask_(std::move(mask)) {
  if (mask_.rows() != mask_.cols() || mask_.rows() < 1)
    throw ShapeError("block pattern must be a nonempty square matrix");
  for (Eigen::Index i = 0; i < mask_.rows(); ++i) {
    for (Eigen::Index j = 0; j < mask_.cols(); ++j) {
      const double e = mask_(i, j);
      if (i == j && e != 1.0) throw ParameterError("block pattern needs a unit diagonal");
      if (i > j && e != 0.0) throw ParameterError("block pattern must be upper triangular");
      if (e != 0.0 && e != 1.0) throw ParameterError("block pattern entries must be 0 or 1");
    }
  }
  nilpotent_ = mask_ - Eigen::MatrixXd::Identity(mask_.rows(), mask_.cols());
}

JordanPattern JordanPattern::jordan(std::size_t m) {
  const auto n = static_cast<Eigen::Index>(m);
  Eigen::MatrixXd mask = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) mask(i, i + 1) = 1.0;
  return JordanPattern(mask);
}

JordanPattern JordanPattern::identity(std::size_t m) {
  const auto n = static_cast<Eigen::Index>(m);
  return JordanPattern(Eigen::MatrixXd::Identity(n, n));
}

JordanPattern JordanPattern::burgers() {
  Eigen::MatrixXd mask = Eigen::MatrixXd::Identity(3, 3);
  mask(1, 2) = 1.0;
  return JordanPattern(mask);
}

double phi_moment(int j, double x) {
  if (j < 0) throw ParameterError("phi_moment order must be nonnegative");
  double jfact = 1.0;
  for (int i = 2; i <= j; ++i) jfact *= i;

  if (std::abs(x) < j + 2.0) {
    double term = 1.0;  // (-x)^i / i!
    double sum = 1.0 / (j + 1.0);
    for (int i = 1; i < 400; ++i) {
      term *= -x / i;
      const double add = term / (i + j + 1.0);
      sum += add;
      if (std::abs(add) <= 1e-17 * std::abs(sum) && i > std::abs(x)) break;
    }
    return sum / jfact;
  }
  // Upward recurrence g_j = (g_{j-1} - e^{-x}/j!) / x, stable once |x| > j + 1.
  const double ex = std::exp(-x);
  double g = -std::expm1(-x) / x;
  double fact = 1.0;
  for (int i = 1; i <= j; ++i) {
    fact *= i;
    g = (g - ex / fact) / x;
  }
  return g;
}

Eigen::MatrixXd block_propagator(double lambda, double t, const JordanPattern& pattern) {
  const auto m = static_cast<Eigen::Index>(pattern.size());
  const Eigen::MatrixXd& N = pattern.nilpotent();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(m, m);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(m, m);
  double coeff = 1.0;
  const double z = -lambda * t;
  for (Eigen::Index j = 1; j < m; ++j) {
    power = power * N;
    coeff *= z / static_cast<double>(j);
    sum += coeff * power;
  }
  return std::exp(z) * sum;
}

StepOperators step_operators(double lambda, double h, const JordanPattern& pattern) {
  if (lambda < 0.0) throw ParameterError("step_operators: lambda must be nonnegative");
  const auto m = static_cast<Eigen::Index>(pattern.size());
  const Eigen::MatrixXd& N = pattern.nilpotent();
  const double x = lambda * h;
  StepOperators ops;
  ops.E = block_propagator(lambda, h, pattern);
  ops.W0 = Eigen::MatrixXd::Zero(m, m);
  ops.W1 = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(m, m);
  double minus_x_pow = 1.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    if (j > 0) {
      power = power * N;
      minus_x_pow *= -x;
    }
    const int jj = static_cast<int>(j);
    ops.W0 += (h * minus_x_pow * phi_moment(jj, x)) * power;
    ops.W1 += (h * minus_x_pow * (jj + 1) * phi_moment(jj + 1, x)) * power;
  }
  return ops;
}

StateVector::StateVector(std::size_t modes, std::size_t components)
    : coeffs_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(modes),
                                    static_cast<Eigen::Index>(components))) {}

StateVector::StateVector(Eigen::MatrixXd coeffs) : coeffs_(std::move(coeffs)) {}

void StateVector::set_component(std::size_t i, const Eigen::VectorXd& values) {
  if (values.size() != coeffs_.rows()) throw ShapeError("component length mismatch");
  coeffs_.col(static_cast<Eigen::Index>(i)) = values;
}

StateVector& StateVector::operator+=(const StateVector& o) {
  if (o.coeffs_.rows() != coeffs_.rows() || o.coeffs_.cols() != coeffs_.cols())
    throw ShapeError("state shape mismatch");
  coeffs_ += o.coeffs_;
  return *this;
}

StateVector& StateVector::operator-=(const StateVector& o) {
  if (o.coeffs_.rows() != coeffs_.rows() || o.coeffs_.cols() != coeffs_.cols())
    throw ShapeError("state shape mismatch");
  coeffs_ -= o.coeffs_;
  return *this;
}

StateVector& StateVector::operator*=(double s) {
  coeffs_ *= s;
  return *this;
}

StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
StateVector operator*(double s, StateVector a) { return a *= s; }

StateVector NonlinearitySpec::operator()(const StateVector& xi) const {
  if (form == NonlinearityForm::lower_triangular) {
    StateVector out(xi.modes(), xi.components());
    if (scalar) {
      Eigen::VectorXd f = scalar(xi.component(0));
      out.set_component(xi.components() - 1, f);
    }
    return out;
  }
  if (!general) return StateVector(xi.modes(), xi.components());
  StateVector out = general(xi);
  if (out.modes() != xi.modes() || out.components() != xi.components())
    throw ShapeError("nonlinearity returned a state of the wrong shape");
  return out;
}

NonlinearitySpec NonlinearitySpec::zero() { return NonlinearitySpec{}; }

NonlinearitySpec NonlinearitySpec::make_general(double L,
                                                std::function<StateVector(const StateVector&)> f) {
  if (L < 0.0) throw ParameterError("Lipschitz constant must be nonnegative");
  NonlinearitySpec spec;
  spec.L = L;
  spec.form = NonlinearityForm::general;
  spec.general = std::move(f);
  return spec;
}

NonlinearitySpec NonlinearitySpec::make_lower_triangular(
    double L, std::function<Eigen::VectorXd(const Eigen::VectorXd&)> F) {
  if (L < 0.0) throw ParameterError("Lipschitz constant must be nonnegative");
  NonlinearitySpec spec;
  spec.L = L;
  spec.form = NonlinearityForm::lower_triangular;
  spec.scalar = std::move(F);
  return spec;
}

JordanSystem::JordanSystem(EigenvalueLadder ladder_, JordanPattern pattern_,
                           NonlinearitySpec nonlinearity_)
    : ladder(std::move(ladder_)), pattern(std::move(pattern_)), nonlinearity(std::move(nonlinearity_)) {}

int scheme_order(Scheme scheme) { return scheme == Scheme::exponential_euler ? 1 : 2; }

double default_dt(const EigenvalueLadder& ladder) { return 0.1 / ladder.max(); }

namespace {

void check_state(const JordanSystem& system, const StateVector& xi) {
  if (xi.modes() != system.modes() || xi.components() != system.block_size())
    throw ShapeError("state shape does not match the system (" + std::to_string(system.modes()) +
                     " modes x " + std::to_string(system.block_size()) + " components)");
}

// Row k of `coeffs` holds the block vector of mode k; apply a block operator.
void apply_rowwise(Eigen::MatrixXd& out, const Eigen::MatrixXd& in, const Eigen::MatrixXd& op,
                   Eigen::Index k, double scale = 1.0) {
  out.row(k).noalias() += scale * (op * in.row(k).transpose()).transpose();
}

}  // namespace

StateVector propagate_linear(const JordanSystem& system, const StateVector& xi0, double t) {
  check_state(system, xi0);
  StateVector out(system.modes(), system.block_size());
  for (std::size_t k = 0; k < system.modes(); ++k) {
    const Eigen::MatrixXd P = block_propagator(system.ladder.values()[k], t, system.pattern);
    apply_rowwise(out.coeffs(), xi0.coeffs(), P, static_cast<Eigen::Index>(k));
  }
  return out;
}

Trajectory evolve(const JordanSystem& system, const StateVector& xi0, TimeSpan span, double dt,
                  Scheme scheme) {
  check_state(system, xi0);
  if (!(dt > 0.0)) throw ParameterError("evolve: dt must be positive");
  if (!(span.t1 >= span.t0)) throw ParameterError("evolve: time span must be forward oriented");

  const double length = span.t1 - span.t0;
  const auto steps = static_cast<std::size_t>(std::max(0.0, std::ceil(length / dt - 1e-9)));
  const double h = steps > 0 ? length / static_cast<double>(steps) : 0.0;

  std::vector<StepOperators> ops;
  ops.reserve(system.modes());
  for (double lambda : system.ladder.values()) ops.push_back(step_operators(lambda, h, system.pattern));

  Trajectory traj;
  traj.order = scheme_order(scheme);
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.times.push_back(span.t0);
  traj.states.push_back(xi0);

  const auto modes = static_cast<Eigen::Index>(system.modes());
  const auto& F = system.nonlinearity;
  StateVector xi = xi0;
  for (std::size_t step = 1; step <= steps; ++step) {
    const StateVector f0 = F(xi);
    StateVector pred(system.modes(), system.block_size());
    for (Eigen::Index k = 0; k < modes; ++k) {
      apply_rowwise(pred.coeffs(), xi.coeffs(), ops[k].E, k);
      apply_rowwise(pred.coeffs(), f0.coeffs(), ops[k].W0, k);
    }
    if (scheme == Scheme::etd2rk) {
      const StateVector f1 = F(pred);
      const Eigen::MatrixXd df = f1.coeffs() - f0.coeffs();
      StateVector next(system.modes(), system.block_size());
      for (Eigen::Index k = 0; k < modes; ++k) {
        apply_rowwise(next.coeffs(), xi.coeffs(), ops[k].E, k);
        apply_rowwise(next.coeffs(), f1.coeffs(), ops[k].W0, k);
        apply_rowwise(next.coeffs(), df, ops[k].W1, k, -1.0);
      }
      xi = std::move(next);
    } else {
      xi = std::move(pred);
    }
    if (!xi.all_finite() || xi.coeffs().cwiseAbs().maxCoeff() > 1e150)
      throw DivergenceError("evolve: state became non-finite", step);
    traj.times.push_back(span.t0 + h * static_cast<double>(step));
    traj.states.push_back(xi);
  }
  return traj;
}

double second_order_residual(const JordanSystem& system, const Trajectory& traj) {
  if (system.block_size() != 2) throw ParameterError("second_order_residual needs m = 2");
  if (system.nonlinearity.form != NonlinearityForm::lower_triangular &&
      (system.nonlinearity.general || system.nonlinearity.scalar))
    throw ParameterError("second_order_residual needs a lower-triangular nonlinearity");
  if (traj.states.size() < 3) throw SizeError("second_order_residual needs at least 3 grid points");

  const double h = traj.times[1] - traj.times[0];
  for (std::size_t j = 1; j + 1 < traj.times.size(); ++j) {
    const double hj = traj.times[j + 1] - traj.times[j];
    if (std::abs(hj - h) > 1e-9 * std::abs(h)) throw ParameterError("residual needs a uniform grid");
  }

  Eigen::VectorXd lambda(system.modes());
  for (std::size_t k = 0; k < system.modes(); ++k) lambda(static_cast<Eigen::Index>(k)) = system.ladder.values()[k];

  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < traj.states.size(); ++j) {
    const Eigen::VectorXd um = traj.states[j - 1].component(0);
    const Eigen::VectorXd u = traj.states[j].component(0);
    const Eigen::VectorXd up = traj.states[j + 1].component(0);
    const Eigen::VectorXd d2 = (up - 2.0 * u + um) / (h * h);
    const Eigen::VectorXd d1 = (up - um) / (2.0 * h);
    Eigen::VectorXd r = d2.cwiseQuotient(lambda) + 2.0 * d1 + lambda.cwiseProduct(u);
    if (system.nonlinearity.scalar) r += system.nonlinearity.scalar(u);
    worst = std::max(worst, r.norm());
  }
  return worst;
}

void write_csv(std::ostream& out, const Trajectory& traj) {
  static const char* names[] = {"u", "v", "w"};
  const std::size_t m = traj.states.empty() ? 0 : traj.states.front().components();
  const std::size_t N = traj.states.empty() ? 0 : traj.states.front().modes();
  out << "t";
  for (std::size_t c = 0; c < m; ++c) {
    const std::string base = c < 3 ? names[c] : "x" + std::to_string(c + 1) + "_";
    for (std::size_t k = 1; k <= N; ++k) out << ',' << base << k;
  }
  out << '\n';
  out << std::setprecision(17);
  for (std::size_t j = 0; j < traj.states.size(); ++j) {
    out << traj.times[j];
    const auto& c = traj.states[j].coeffs();
    for (Eigen::Index col = 0; col < c.cols(); ++col)
      for (Eigen::Index row = 0; row < c.rows(); ++row) out << ',' << c(row, col);
    out << '\n';
  }
}

}  // namespace kwakim
