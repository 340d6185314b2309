#include "kwakim/sharpness.hpp"

#include "kwakim/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kwakim {

namespace {

void check_pair(double a, double b) {
  if (!(a > 0.0)) throw ParameterError("counterexample needs lambda_n > 0");
  if (!(b > a)) throw DegenerateGapError("counterexample needs lambda_n < lambda_{n+1}");
}

// Unit eigenvectors of a 2x2 block with real distinct eigenvalues, ascending.
Eigen::Matrix2d block_eigenvectors(const Eigen::Matrix2d& block) {
  Eigen::EigenSolver<Eigen::Matrix2d> es(block);
  const Eigen::Vector2d ev = es.eigenvalues().real();
  Eigen::Matrix2d vec = es.eigenvectors().real();
  if (ev(0) > ev(1)) vec.col(0).swap(vec.col(1));
  for (int j = 0; j < 2; ++j) {
    vec.col(j).normalize();
    const int lead = std::abs(vec(0, j)) > 0.0 ? 0 : 1;
    if (vec(lead, j) < 0.0) vec.col(j) *= -1.0;
  }
  return vec;
}

Eigen::Matrix4d linear_part(double a, double b) {
  Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
  A.block<2, 2>(0, 0) << a, a, 0, a;
  A.block<2, 2>(2, 2) << b, b, 0, b;
  return A;
}

}  // namespace

double coupling_K(double lambda_n, double lambda_np1, NormMode mode) {
  check_pair(lambda_n, lambda_np1);
  if (mode == NormMode::truncated) {
    const double r = std::sqrt(lambda_np1) - std::sqrt(lambda_n);
    return r * r;
  }
  return gap_lhs(lambda_n, lambda_np1, {GapKind::jordan_full});
}

Eigen::Matrix2d coupled_block(double lambda, double K, NormMode mode) {
  Eigen::Matrix2d m;
  if (mode == NormMode::full)
    m << lambda, lambda + K, K, lambda;
  else
    m << lambda, lambda, K, lambda;
  return m;
}

Eigen::Matrix4d coupled_matrix(double lambda_n, double lambda_np1, double K, NormMode mode) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m.block<2, 2>(0, 0) = coupled_block(lambda_n, K, mode);
  m.block<2, 2>(2, 2) = coupled_block(lambda_np1, K, mode);
  return m;
}

std::array<double, 2> block_eigenvalues(double lambda, double K, NormMode mode) {
  const double r = mode == NormMode::full ? std::sqrt(K * (lambda + K)) : std::sqrt(K * lambda);
  return {lambda - r, lambda + r};
}

double default_epsilon(double lambda_n, double lambda_np1) { return 1e-2 * std::sqrt(lambda_n * lambda_np1); }

double CounterexampleInstance::nonlinearity_norm() const {
  return Eigen::JacobiSVD<Eigen::Matrix4d>(nonlinearity).singularValues()(0);
}

bool CounterexampleInstance::has_complex_pair() const {
  return std::any_of(eigenvalues.begin(), eigenvalues.end(),
                     [](std::complex<double> z) { return std::abs(z.imag()) > 1e-8 * std::abs(z); });
}

CounterexampleInstance build_counterexample(double lambda_n, double lambda_np1, std::optional<double> epsilon,
                                            NormMode mode) {
  check_pair(lambda_n, lambda_np1);
  CounterexampleInstance inst;
  inst.lambda_n = lambda_n;
  inst.lambda_np1 = lambda_np1;
  inst.mode = mode;
  inst.K = coupling_K(lambda_n, lambda_np1, mode);
  inst.epsilon = epsilon.value_or(default_epsilon(lambda_n, lambda_np1));
  if (!std::isfinite(inst.epsilon)) throw ParameterError("epsilon must be finite");

  const Eigen::Matrix4d M0 = coupled_matrix(lambda_n, lambda_np1, inst.K, mode);
  inst.basis.setZero();
  inst.basis.block<2, 2>(0, 0) = block_eigenvectors(M0.block<2, 2>(0, 0));
  inst.basis.block<2, 2>(2, 2) = block_eigenvectors(M0.block<2, 2>(2, 2));
  const auto en = block_eigenvalues(lambda_n, inst.K, mode);
  const auto enp = block_eigenvalues(lambda_np1, inst.K, mode);
  inst.unperturbed = {en[0], en[1], enp[0], enp[1]};

  inst.coupled = M0;
  if (mode == NormMode::full) {
    // Rotation generator between e_n^+ (column 1) and e_{n+1}^- (column 2),
    // oriented so that x(t) = e^{-mu t} (x(0) cos(eps t) + y(0) sin(eps t)).
    Eigen::Matrix4d S = Eigen::Matrix4d::Zero();
    S(1, 2) = -inst.epsilon;
    S(2, 1) = inst.epsilon;
    inst.coupled += inst.basis * S * inst.basis.inverse();
  } else {
    inst.coupled(1, 2) += inst.epsilon;
    inst.coupled(3, 0) += inst.epsilon;
  }
  inst.nonlinearity = linear_part(lambda_n, lambda_np1) - inst.coupled;

  Eigen::EigenSolver<Eigen::Matrix4d> es(inst.coupled, false);
  for (int i = 0; i < 4; ++i) inst.eigenvalues.push_back(es.eigenvalues()(i));
  std::sort(inst.eigenvalues.begin(), inst.eigenvalues.end(), [](auto p, auto q) {
    return p.real() != q.real() ? p.real() < q.real() : p.imag() < q.imag();
  });
  return inst;
}

PolynomialCheck characteristic_polynomial_check(const CounterexampleInstance& inst) {
  if (inst.mode != NormMode::truncated) throw ParameterError("the polynomial check applies to the truncated case");
  const double a = inst.lambda_n, b = inst.lambda_np1;
  const double shift = std::sqrt(a * b);
  const double c = inst.K;

  // Fit in z = y / scale on z in {-2, ..., 2}, then undo the scaling.
  const double scale = 0.5 * shift;
  Eigen::Matrix<double, 5, 5> V;
  Eigen::Matrix<double, 5, 1> d;
  for (int i = 0; i < 5; ++i) {
    const double z = i - 2.0;
    for (int p = 0; p < 5; ++p) V(i, p) = std::pow(z, p);
    d(i) = (inst.coupled - (scale * z + shift) * Eigen::Matrix4d::Identity()).determinant();
  }
  Eigen::Matrix<double, 5, 1> coef = V.fullPivLu().solve(d);
  for (int p = 0; p < 5; ++p) coef(p) /= std::pow(scale, p);

  PolynomialCheck out;
  out.expected = {-inst.epsilon * inst.epsilon * a * b, 0.0, -4.0 * shift * c, -2.0 * c, 1.0};
  for (int p = 0; p < 5; ++p) {
    out.fitted[p] = coef(p);
    out.max_error = std::max(out.max_error, std::abs(coef(p) - out.expected[p]));
  }
  return out;
}

OscillationReport oscillation_demo(const CounterexampleInstance& inst, double periods, int steps_per_period) {
  if (!(periods > 0.0) || steps_per_period < 4) throw ParameterError("oscillation demo needs a positive window");
  Eigen::EigenSolver<Eigen::Matrix4d> es(inst.coupled);
  const auto ev = es.eigenvalues();
  int p = -1;
  for (int i = 0; i < 4; ++i)
    if (ev(i).imag() > 1e-8 * std::abs(ev(i)) && (p < 0 || ev(i).imag() > ev(p).imag())) p = i;
  if (p < 0) throw InconclusiveError("no complex eigenvalue pair: the perturbation is too small to separate it");

  OscillationReport rep;
  rep.mu = ev(p).real();
  rep.omega = ev(p).imag();
  const double period = 2.0 * std::numbers::pi / rep.omega;
  rep.horizon = periods * period;

  // Spectral projector onto the real plane of the pair.
  const Eigen::Matrix4cd W = es.eigenvectors();
  Eigen::Vector4cd sel = Eigen::Vector4cd::Zero();
  for (int i = 0; i < 4; ++i)
    if (std::abs(ev(i) - ev(p)) < 1e-12 * std::abs(ev(p)) || std::abs(ev(i) - std::conj(ev(p))) < 1e-12 * std::abs(ev(p)))
      sel(i) = 1.0;
  const Eigen::Matrix4d plane = (W * sel.asDiagonal() * W.inverse()).real();

  const auto steps = static_cast<int>(std::ceil(periods * steps_per_period));
  const double dt = rep.horizon / steps;
  const Eigen::Matrix4d shifted = -dt * (inst.coupled - rep.mu * Eigen::Matrix4d::Identity());
  const Eigen::Matrix4d P = shifted.exp();
  const Eigen::Matrix4d to_basis = inst.basis.inverse();

  Eigen::Vector4d xi = W.col(p).real();
  xi.normalize();
  int last_sign = 0;
  for (int s = 0; s <= steps; ++s) {
    const Eigen::Vector4d c = to_basis * xi;
    rep.times.push_back(dt * s);
    rep.x.push_back(c(1));
    rep.y.push_back(c(2));
    const int sign = (c(1) > 0.0) - (c(1) < 0.0);
    if (sign != 0) {
      if (last_sign != 0 && sign != last_sign) ++rep.zero_count;
      last_sign = sign;
    }
    xi = plane * (P * xi);
  }
  rep.verdict = rep.omega != 0.0 && rep.zero_count >= 2;
  return rep;
}

GapViolationReport gap_violation_certificate(const EigenvalueLadder& ladder, double L, GapConditionKind kind) {
  GapViolationReport rep;
  rep.kind = kind;
  rep.L = L;
  for (std::size_t n = 1; n < ladder.size(); ++n) {
    const double lhs = gap_lhs(ladder, n, kind);
    rep.entries.push_back({n, lhs, lhs < L});
    rep.sup_lhs = std::max(rep.sup_lhs, lhs);
  }
  rep.sup_below_L = rep.sup_lhs < L;
  return rep;
}

}  // namespace kwakim
