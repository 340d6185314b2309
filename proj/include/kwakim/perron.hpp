#pragma once

#include "kwakim/dynamics.hpp"
#include "kwakim/linop.hpp"

#include <cstddef>
#include <mutex>
#include <vector>

namespace kwakim {

/// States on a uniform time grid together with the weight exponent of the
/// space L^2_{e^{theta t}}. The grid is [-T, 0] for backward solves and
/// [-T, T_plus] for tracking.
struct WeightedTrajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  WeightParameter theta;

  double step() const;
  /// Trapezoid rule for sum_j w_j e^{2 theta t_j} ||xi(t_j)||^2, square-rooted.
  /// component < 0 uses every component.
  double weighted_norm(int component = -1) const;
};

/// Uniform grid from t0 to t1 whose step divides the span and does not
/// exceed dt.
std::vector<double> uniform_grid(double t0, double t1, double dt);

WeightedTrajectory zero_trajectory(const JordanSystem& system, WeightParameter theta,
                                   std::vector<double> times);

/// Smallest T with e^{-(theta - lambda_n) T} and e^{-(lambda_{n+1} - theta) T}
/// both below `tail`.
double truncation_horizon(double lambda_n, double lambda_np1, double theta, double tail = 1e-10);

/// Solution operator of d/dt xi + A xi = h on the grid of `h`. Modes with
/// lambda_k > theta run forward from the first grid point with zero data; modes
/// with lambda_k < theta run backward from the last grid point with zero data.
/// The forcing is linear between grid points.
WeightedTrajectory apply_L(const JordanSystem& system, const WeightedTrajectory& h);

/// Homogeneous solution through low-mode data at t = 0, evaluated at the
/// (non-positive) times given. High modes are zero.
WeightedTrajectory apply_T(const JordanSystem& system, WeightParameter theta,
                           const std::vector<double>& times, const StateVector& xi0_plus);

struct PerronSettings {
  double dt = 0.0;           // 0 picks 0.015 / theta
  double tail = 1e-10;       // truncation tolerance for the horizon
  double tol = 1e-10;        // relative change in the weighted norm
  int max_iterations = 200;
  double evolve_dt = 0.0;    // forward integration step for invariance checks; 0 picks dt / 4
  double theta = 0.0;        // 0 picks perron_weight
};

struct BackwardSolution {
  WeightedTrajectory trajectory;
  double contraction_rate = 0.0;  // max ratio of successive iterate differences
  int iterations = 0;
  double residual = 0.0;          // last relative change
};

/// The weight used for the gap n: the full optimum for general nonlinearities
/// and sqrt(lambda_n lambda_{n+1}) for lower-triangular ones.
WeightParameter perron_weight(const JordanSystem& system, std::size_t n);
/// settings.theta when set, otherwise perron_weight.
WeightParameter resolve_weight(const JordanSystem& system, std::size_t n, const PerronSettings& settings);

/// Fixed point of xi = L F(xi) + T xi0_plus on [-T, 0]. For lower-triangular
/// nonlinearities convergence is measured on the first component only, where
/// the map contracts under the weaker gap condition; the remaining components
/// follow from the converged first one.
BackwardSolution solve_backward(const JordanSystem& system, std::size_t n, const StateVector& xi0_plus,
                                const PerronSettings& settings = {});

/// Lipschitz graph over the first n modes, evaluated by on-demand backward
/// solves. Samples are cached under a mutex.
class ManifoldGraph {
 public:
  struct Sample {
    StateVector base;
    StateVector value;
  };

  ManifoldGraph(JordanSystem system, std::size_t n, PerronSettings settings = {});

  const JordanSystem& system() const noexcept { return system_; }
  std::size_t n() const noexcept { return n_; }
  WeightParameter theta() const noexcept { return theta_; }
  const PerronSettings& settings() const noexcept { return settings_; }
  std::size_t base_dimension() const noexcept { return n_ * system_.block_size(); }

  /// L ||L|| / (1 - L ||L||) with the norm matching the nonlinearity form.
  double lipschitz_bound() const;

  /// High-mode part Q_n xi(0) of the backward solution through xi0_plus.
  StateVector operator()(const StateVector& xi0_plus) const;
  BackwardSolution solve(const StateVector& xi0_plus) const;

  std::vector<Sample> samples() const;

 private:
  JordanSystem system_;
  std::size_t n_;
  PerronSettings settings_;
  WeightParameter theta_;
  mutable std::mutex mutex_;
  mutable std::vector<Sample> cache_;
};

/// Splits a state into its first n modes and the rest.
StateVector low_part(const StateVector& xi, std::size_t n);
StateVector high_part(const StateVector& xi, std::size_t n);

struct InvarianceReport {
  double max_defect = 0.0;
  std::vector<double> times;
  std::vector<double> defects;
};

/// Starts on the graph at xi0_plus + M(xi0_plus), integrates forward and
/// measures ||Q_n xi(tau) - M(P_n xi(tau))|| at `samples` evenly spaced times.
InvarianceReport verify_invariance(const ManifoldGraph& graph, const StateVector& xi0_plus, double horizon,
                                   std::size_t samples = 8);

/// C^2 cutoff: 0 for t <= 0, 1 for t >= 1, 6s^5 - 15s^4 + 10s^3 between.
double cutoff(double t);
double cutoff_derivative(double t);

struct TrackingReport {
  double theta = 0.0;
  double fitted_rate = 0.0;
  double constant = 0.0;    // max over the fit window of ||xi - xi_bar|| e^{theta t}
  double fit_rms = 0.0;     // rms residual of the log-linear fit
  double fit_start = 0.0;
  double fit_end = 0.0;
  std::size_t fit_points = 0;
  double contraction_rate = 0.0;
  int iterations = 0;
};

struct TrackingResult {
  WeightedTrajectory correction;        // xi_tilde on [-T, T_plus]
  std::vector<double> times;            // forward grid [0, T_plus]
  std::vector<StateVector> trace;       // xi_bar = phi xi + xi_tilde on the forward grid
  TrackingReport report;
};

/// Builds the manifold trajectory that shadows the forward solution `forward`
/// (uniform grid starting at t = 0) and fits the decay rate of the distance
/// between the two on t >= 1.
TrackingResult tracking_trace(const JordanSystem& system, std::size_t n, WeightParameter theta,
                              const Trajectory& forward, const PerronSettings& settings = {});

}  // namespace kwakim
