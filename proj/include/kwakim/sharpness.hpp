#pragma once

#include "kwakim/gapcheck.hpp"
#include "kwakim/linop.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>
#include <vector>

namespace kwakim {

/// Coupling that merges mu_n^+ with mu_{n+1}^-:
///   full:      the jordan_full gap value
///   truncated: (sqrt(b) - sqrt(a))^2
double coupling_K(double lambda_n, double lambda_np1, NormMode mode);

/// Block of A - F on one mode: [[l, l + K], [K, l]] (full) or [[l, l], [K, l]] (truncated).
Eigen::Matrix2d coupled_block(double lambda, double K, NormMode mode);

/// Unperturbed 4x4 matrix on the modes {n, n+1}, ordered (u_n, v_n, u_{n+1}, v_{n+1}).
Eigen::Matrix4d coupled_matrix(double lambda_n, double lambda_np1, double K, NormMode mode);

/// mu^- and mu^+ of one block: l -+ sqrt(K (l + K)) (full) or l -+ sqrt(K l) (truncated).
std::array<double, 2> block_eigenvalues(double lambda, double K, NormMode mode);

/// 1e-2 sqrt(lambda_n lambda_{n+1}).
double default_epsilon(double lambda_n, double lambda_np1);

struct CounterexampleInstance {
  double lambda_n = 0.0;
  double lambda_np1 = 0.0;
  double K = 0.0;
  double epsilon = 0.0;
  NormMode mode = NormMode::full;

  Eigen::Matrix4d coupled;       // A - F, perturbation included
  Eigen::Matrix4d nonlinearity;  // F itself
  /// Eigenvectors of the unperturbed matrix as columns e_n^-, e_n^+, e_{n+1}^-,
  /// e_{n+1}^+; unit norm with the first nonzero entry positive.
  Eigen::Matrix4d basis;
  std::array<double, 4> unperturbed{};  // mu_n^-, mu_n^+, mu_{n+1}^-, mu_{n+1}^+
  /// Eigenvalues of `coupled`, sorted by real part then imaginary part.
  std::vector<std::complex<double>> eigenvalues;

  double nonlinearity_norm() const;
  bool has_complex_pair() const;
};

/// Full mode perturbs by a rotation of size epsilon in span{e_n^+, e_{n+1}^-};
/// truncated mode adds epsilon at the (v_n, u_{n+1}) and (v_{n+1}, u_n) entries
/// of A - F, keeping F lower triangular.
CounterexampleInstance build_counterexample(double lambda_n, double lambda_np1, std::optional<double> epsilon,
                                            NormMode mode);

struct PolynomialCheck {
  std::array<double, 5> fitted{};    // coefficients of y^0 .. y^4
  std::array<double, 5> expected{};
  double max_error = 0.0;
};

/// det(A - F - (y + sqrt(ab)) I) fitted through five sample points and compared
/// with y^4 - 2c y^3 - 4 sqrt(ab) c y^2 - eps^2 ab, c = (sqrt(b) - sqrt(a))^2.
PolynomialCheck characteristic_polynomial_check(const CounterexampleInstance& inst);

struct OscillationReport {
  double omega = 0.0;  // imaginary part of the complex pair
  double mu = 0.0;     // real part
  int zero_count = 0;
  bool verdict = false;
  double horizon = 0.0;
  std::vector<double> times;
  std::vector<double> x;  // coordinate along e_n^+, decay factor e^{-mu t} removed
  std::vector<double> y;  // coordinate along e_{n+1}^-, same scaling
};

/// Integrates d/dt xi = -(A - F) xi from a point of the complex-pair eigenplane
/// over `periods` periods 2 pi / omega and counts sign changes of x.
OscillationReport oscillation_demo(const CounterexampleInstance& inst, double periods = 3.0,
                                   int steps_per_period = 200);

struct GapViolation {
  std::size_t n = 0;
  double lhs = 0.0;
  bool violated = false;
};

struct GapViolationReport {
  GapConditionKind kind;
  double L = 0.0;
  std::vector<GapViolation> entries;
  double sup_lhs = 0.0;
  bool sup_below_L = false;  // violated at every n, with the supremum itself below L
};

GapViolationReport gap_violation_certificate(const EigenvalueLadder& ladder, double L, GapConditionKind kind);

}  // namespace kwakim
