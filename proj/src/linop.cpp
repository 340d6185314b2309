#include "kwakim/linop.hpp"

#include "kwakim/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

namespace kwakim {

namespace {

void require_gap(double lambda_n, double lambda_np1) {
  if (!(lambda_n > 0.0)) throw ParameterError("lambda_n must be positive");
  if (!(lambda_n < lambda_np1))
    throw DegenerateGapError("need lambda_n < lambda_{n+1}, got " + std::to_string(lambda_n) +
                             " and " + std::to_string(lambda_np1));
}

}  // namespace

double mu_min(double lambda, double theta, double omega) {
  if (!(lambda > 0.0)) throw ParameterError("mu_min: lambda must be positive");
  // Eigenvalues of A A^* have sum 2s + lambda^2 and product s^2 with
  // s = (lambda - theta)^2 + omega^2. Writing the small root as s^2 / mu_max
  // avoids cancellation when s << lambda^2.
  const double d = lambda - theta;
  const double s = d * d + omega * omega;
  const double root = std::sqrt(4.0 * s + lambda * lambda);
  const double nu = 2.0 * s / (root + lambda);
  return nu * nu;
}

double nu_root(double lambda, double theta) { return std::sqrt(mu_min(lambda, theta, 0.0)); }

double gap_radical(double a, double b) {
  const double big = std::max(std::abs(a), std::abs(b));
  if (big == 0.0) return 0.0;
  const double x = a / big;
  const double y = b / big;
  return big * std::sqrt(x * x - x * y + y * y);
}

WeightParameter optimal_theta_full(double lambda_n, double lambda_np1) {
  require_gap(lambda_n, lambda_np1);
  const double r = gap_radical(lambda_n, lambda_np1);
  return {2.0 / 3.0 * (lambda_np1 + lambda_n) - r / 3.0};
}

double block_norm_full(double lambda, double theta) { return 1.0 / nu_root(lambda, theta); }

double block_norm_truncated(double lambda, double theta) {
  if (!(lambda > 0.0)) throw ParameterError("lambda must be positive");
  const double d = lambda - theta;
  return lambda / (d * d);
}

OperatorNormResult norm_L_full(double lambda_n, double lambda_np1) {
  const WeightParameter theta = optimal_theta_full(lambda_n, lambda_np1);
  const double r = gap_radical(lambda_n, lambda_np1);
  const double gap = lambda_np1 - lambda_n;
  OperatorNormResult out;
  out.mode = NormMode::full;
  out.theta = theta;
  out.norm = (lambda_np1 + lambda_n + 2.0 * r) / (gap * gap);
  out.nu = 1.0 / out.norm;
  out.mu_min = out.nu * out.nu;
  out.attaining_mode = 0;
  out.attaining_omega = 0.0;
  return out;
}

WeightParameter optimal_theta_truncated(double lambda_n, double lambda_np1) {
  require_gap(lambda_n, lambda_np1);
  return {std::sqrt(lambda_n) * std::sqrt(lambda_np1)};
}

OperatorNormResult norm_L_truncated(double lambda_n, double lambda_np1) {
  const WeightParameter theta = optimal_theta_truncated(lambda_n, lambda_np1);
  const double root_gap = std::sqrt(lambda_np1) - std::sqrt(lambda_n);
  OperatorNormResult out;
  out.mode = NormMode::truncated;
  out.theta = theta;
  out.norm = 1.0 / (root_gap * root_gap);
  out.nu = 1.0 / out.norm;
  out.mu_min = out.nu * out.nu;
  out.attaining_mode = 0;
  out.attaining_omega = 0.0;
  return out;
}

std::vector<double> OmegaGrid::nodes() const {
  if (points < 1) throw SizeError("omega grid needs at least one point");
  if (!(half_width > 0.0)) throw ParameterError("omega grid half width must be positive");
  std::vector<double> out;
  out.reserve(points + 1);
  if (points == 1) {
    out.push_back(0.0);
    return out;
  }
  const double denom = static_cast<double>(points - 1);
  bool has_zero = false;
  for (std::size_t j = 0; j < points; ++j) {
    const double s = -1.0 + 2.0 * static_cast<double>(j) / denom;
    const double w = half_width * s * std::abs(s);
    if (w == 0.0) has_zero = true;
    out.push_back(w);
  }
  if (!has_zero) out.push_back(0.0);
  return out;
}

void check_non_resonant(const EigenvalueLadder& ladder, WeightParameter theta) {
  for (std::size_t k = 1; k <= ladder.size(); ++k) {
    const double lk = ladder.lambda(k);
    if (std::abs(theta.theta - lk) < 1e-12 * lk)
      throw ResonanceError("theta = " + std::to_string(theta.theta) + " resonates with lambda_" +
                           std::to_string(k));
  }
}

OperatorNormResult oracle_norm(const EigenvalueLadder& ladder, WeightParameter theta,
                               const OmegaGrid& grid, NormMode mode) {
  check_non_resonant(ladder, theta);
  if (grid.half_width < 10.0 * ladder.max() * (1.0 - 1e-12))
    throw ParameterError("omega grid must cover at least 10 * max lambda");

  std::vector<double> omegas = grid.nodes();
  std::stable_sort(omegas.begin(), omegas.end(),
                   [](double a, double b) { return std::abs(a) < std::abs(b); });

  using C = std::complex<double>;
  OperatorNormResult best;
  best.mode = mode;
  best.theta = theta;
  best.norm = -1.0;
  for (std::size_t k = 1; k <= ladder.size(); ++k) {
    const double lambda = ladder.lambda(k);
    for (double omega : omegas) {
      const C diag(lambda - theta.theta, omega);
      double value = 0.0;
      if (mode == NormMode::full) {
        Eigen::Matrix2cd block;
        block << diag, C(lambda, 0.0), C(0.0, 0.0), diag;
        const Eigen::Matrix2cd inv = block.inverse();
        Eigen::JacobiSVD<Eigen::Matrix2cd> svd(inv);
        value = svd.singularValues()(0);
      } else {
        value = std::abs(C(lambda, 0.0) / (diag * diag));
      }
      if (value > best.norm) {
        best.norm = value;
        best.attaining_mode = k;
        best.attaining_omega = omega;
      }
    }
  }
  best.nu = 1.0 / best.norm;
  best.mu_min = best.nu * best.nu;
  return best;
}

}  // namespace kwakim
