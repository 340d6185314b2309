#pragma once

#include "kwakim/spectra.hpp"

#include <cstddef>
#include <vector>

namespace kwakim {

/// Exponent theta of the trajectory weight e^{theta t}.
struct WeightParameter {
  double theta = 0.0;
};

enum class NormMode { full, truncated };

/// Norm of a solution operator in the weighted space L^2_{e^{theta t}}.
///
/// For the full operator the norm is 1/sqrt(mu_min) and nu = sqrt(mu_min).
/// In truncated mode the same relation is kept (mu_min := norm^-2) so the
/// fields stay comparable, but nu then has no quadratic characterization.
struct OperatorNormResult {
  double norm = 0.0;
  WeightParameter theta;
  std::size_t attaining_mode = 0;  // 1-based eigenvalue index
  double attaining_omega = 0.0;
  double mu_min = 0.0;
  double nu = 0.0;
  NormMode mode = NormMode::full;
};

/// Smallest eigenvalue of A A^* for the 2x2 block
///   A = [[lambda - theta + i omega, lambda], [0, lambda - theta + i omega]].
double mu_min(double lambda, double theta, double omega);

/// nu(lambda, theta) = sqrt(mu_min(lambda, theta, 0)), the positive root of
/// nu^2 + lambda nu - (lambda - theta)^2 = 0.
double nu_root(double lambda, double theta);

/// sqrt(a^2 - a b + b^2), evaluated with the larger argument factored out.
double gap_radical(double a, double b);

WeightParameter optimal_theta_full(double lambda_n, double lambda_np1);
OperatorNormResult norm_L_full(double lambda_n, double lambda_np1);

WeightParameter optimal_theta_truncated(double lambda_n, double lambda_np1);
OperatorNormResult norm_L_truncated(double lambda_n, double lambda_np1);

/// Per-block norms at omega = 0 for a fixed theta.
double block_norm_full(double lambda, double theta);
double block_norm_truncated(double lambda, double theta);

/// Symmetric frequency grid on [-half_width, half_width]. Points cluster
/// quadratically near omega = 0 and omega = 0 itself is always included.
struct OmegaGrid {
  std::size_t points = 4001;
  double half_width = 0.0;

  std::vector<double> nodes() const;
};

/// Brute-force operator norm: maximum over all ladder modes and grid
/// frequencies of the 2x2 inverse-matrix spectral norm (full) or of
/// |lambda / (lambda - theta + i omega)^2| (truncated). Ties are broken by the
/// smaller (k, |omega|).
OperatorNormResult oracle_norm(const EigenvalueLadder& ladder, WeightParameter theta,
                               const OmegaGrid& grid, NormMode mode);

/// Throws ResonanceError when theta is within 1e-12 relative of some lambda_k.
void check_non_resonant(const EigenvalueLadder& ladder, WeightParameter theta);

}  // namespace kwakim
