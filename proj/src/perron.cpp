#include "kwakim/perron.hpp"

#include "kwakim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kwakim {

namespace {

// Step operators of a contiguous range of modes, stored entrywise so one time
// step updates every mode of the range with vector operations.
struct ModeRangeOps {
  Eigen::Index begin = 0;
  Eigen::Index count = 0;
  Eigen::Index m = 0;
  std::vector<Eigen::ArrayXd> E, W0, W1;  // m*m arrays of length count

  ModeRangeOps(const JordanSystem& system, Eigen::Index b, Eigen::Index c, double h)
      : begin(b), count(c), m(static_cast<Eigen::Index>(system.block_size())) {
    E.assign(m * m, Eigen::ArrayXd::Zero(c));
    W0 = E;
    W1 = E;
    for (Eigen::Index k = 0; k < c; ++k) {
      const auto ops = step_operators(system.ladder.values()[b + k], h, system.pattern);
      for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index q = 0; q < m; ++q) {
          E[a * m + q](k) = ops.E(a, q);
          W0[a * m + q](k) = ops.W0(a, q);
          W1[a * m + q](k) = ops.W1(a, q);
        }
    }
  }

  // out = E prev + W0 f_new - W1 (f_new - f_old), restricted to the range.
  void step(Eigen::MatrixXd& out, const Eigen::MatrixXd& prev, const Eigen::MatrixXd& f_new,
            const Eigen::MatrixXd& f_old) const {
    for (Eigen::Index a = 0; a < m; ++a) {
      auto dst = out.col(a).segment(begin, count).array();
      dst.setZero();
      for (Eigen::Index q = a; q < m; ++q) {
        const auto x = prev.col(q).segment(begin, count).array();
        const auto fn = f_new.col(q).segment(begin, count).array();
        const auto fo = f_old.col(q).segment(begin, count).array();
        dst += E[a * m + q] * x + (W0[a * m + q] - W1[a * m + q]) * fn + W1[a * m + q] * fo;
      }
    }
  }
};

Eigen::Index count_below(const EigenvalueLadder& ladder, double theta) {
  const auto& v = ladder.values();
  return static_cast<Eigen::Index>(std::lower_bound(v.begin(), v.end(), theta) - v.begin());
}

void check_gap_index(const JordanSystem& system, std::size_t n) {
  if (n < 1 || n >= system.modes())
    throw IndexError("gap index n = " + std::to_string(n) + " outside [1, " +
                     std::to_string(system.modes() - 1) + "]");
}

void check_low_support(const StateVector& xi, Eigen::Index low) {
  const auto rows = static_cast<Eigen::Index>(xi.modes());
  if (rows > low && xi.coeffs().bottomRows(rows - low).cwiseAbs().maxCoeff() != 0.0)
    throw SupportError("low-mode data has nonzero entries beyond mode " + std::to_string(low));
}

int norm_component(const JordanSystem& system) {
  return system.nonlinearity.form == NonlinearityForm::lower_triangular ? 0 : -1;
}

WeightedTrajectory nonlinearity_along(const JordanSystem& system, const WeightedTrajectory& xi) {
  WeightedTrajectory out;
  out.times = xi.times;
  out.theta = xi.theta;
  out.states.reserve(xi.states.size());
  for (const auto& s : xi.states) out.states.push_back(system.nonlinearity(s));
  return out;
}

double difference_norm(const WeightedTrajectory& a, const WeightedTrajectory& b, int component) {
  WeightedTrajectory d;
  d.times = a.times;
  d.theta = a.theta;
  d.states.reserve(a.states.size());
  for (std::size_t j = 0; j < a.states.size(); ++j) d.states.push_back(a.states[j] - b.states[j]);
  return d.weighted_norm(component);
}

bool finite(const WeightedTrajectory& w) {
  return std::all_of(w.states.begin(), w.states.end(), [](const StateVector& s) { return s.all_finite(); });
}

// Generic contraction loop shared by the backward solve and the tracking
// correction: iterate x <- map(x) until the relative change drops below tol.
template <class Map>
BackwardSolution iterate(WeightedTrajectory x, const Map& map, int component, const PerronSettings& s,
                         const char* what) {
  BackwardSolution out;
  double prev_diff = -1.0;
  constexpr double kFloor = 100.0 * std::numeric_limits<double>::epsilon();
  for (int it = 1; it <= s.max_iterations; ++it) {
    WeightedTrajectory next = map(x);
    if (!finite(next)) throw DivergenceError(std::string(what) + ": iterate became non-finite", it);
    const double diff = difference_norm(next, x, component);
    const double size = next.weighted_norm(component);
    const double rel = diff == 0.0 ? 0.0 : diff / std::max(size, std::numeric_limits<double>::min());
    if (prev_diff > kFloor * size && diff > kFloor * size) {
      const double ratio = diff / prev_diff;
      out.contraction_rate = std::max(out.contraction_rate, ratio);
      if (ratio >= 1.0)
        throw NoContractionError(std::string(what) + ": iterate differences grew by " + std::to_string(ratio) +
                                 " at iteration " + std::to_string(it));
    }
    prev_diff = diff;
    x = std::move(next);
    out.iterations = it;
    out.residual = rel;
    if (rel < s.tol) {
      out.trajectory = std::move(x);
      return out;
    }
  }
  throw NoContractionError(std::string(what) + ": no convergence within " + std::to_string(s.max_iterations) +
                           " iterations (last relative change " + std::to_string(out.residual) + ")");
}

double resolve_dt(const PerronSettings& s, double theta) {
  if (s.dt < 0.0) throw ParameterError("Perron step must be positive");
  return s.dt > 0.0 ? s.dt : 0.015 / theta;
}

}  // namespace

double WeightedTrajectory::step() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }

double WeightedTrajectory::weighted_norm(int component) const {
  if (states.empty()) return 0.0;
  const double h = step();
  double acc = 0.0;
  for (std::size_t j = 0; j < states.size(); ++j) {
    const double w = (j == 0 || j + 1 == states.size()) ? 0.5 * h : h;
    const auto& c = states[j].coeffs();
    const double sq = component < 0 ? c.squaredNorm() : c.col(component).squaredNorm();
    acc += w * std::exp(2.0 * theta.theta * times[j]) * sq;
  }
  return std::sqrt(acc);
}

std::vector<double> uniform_grid(double t0, double t1, double dt) {
  if (!(dt > 0.0) || !(t1 > t0)) throw ParameterError("uniform_grid needs t0 < t1 and dt > 0");
  const auto steps = static_cast<std::size_t>(std::ceil((t1 - t0) / dt - 1e-9));
  std::vector<double> t(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) t[j] = t0 + (t1 - t0) * static_cast<double>(j) / static_cast<double>(steps);
  t.back() = t1;
  return t;
}

WeightedTrajectory zero_trajectory(const JordanSystem& system, WeightParameter theta, std::vector<double> times) {
  WeightedTrajectory w;
  w.theta = theta;
  w.states.assign(times.size(), system.zero_state());
  w.times = std::move(times);
  return w;
}

double truncation_horizon(double lambda_n, double lambda_np1, double theta, double tail) {
  const double margin = std::min(theta - lambda_n, lambda_np1 - theta);
  if (!(margin > 0.0)) throw ResonanceError("theta must lie strictly between lambda_n and lambda_{n+1}");
  if (!(tail > 0.0 && tail < 1.0)) throw ParameterError("tail tolerance must lie in (0, 1)");
  return -std::log(tail) / margin;
}

WeightedTrajectory apply_L(const JordanSystem& system, const WeightedTrajectory& h) {
  check_non_resonant(system.ladder, h.theta);
  const std::size_t M = h.states.size();
  if (M < 2) throw SizeError("apply_L needs at least two grid points");
  for (const auto& s : h.states)
    if (s.modes() != system.modes() || s.components() != system.block_size())
      throw ShapeError("forcing shape does not match the system");

  const double dt = h.step();
  const Eigen::Index N = static_cast<Eigen::Index>(system.modes());
  const Eigen::Index low = count_below(system.ladder, h.theta.theta);

  WeightedTrajectory out = zero_trajectory(system, h.theta, h.times);
  if (N > low) {
    const ModeRangeOps fwd(system, low, N - low, dt);
    for (std::size_t j = 0; j + 1 < M; ++j)
      fwd.step(out.states[j + 1].coeffs(), out.states[j].coeffs(), h.states[j + 1].coeffs(), h.states[j].coeffs());
  }
  if (low > 0) {
    const ModeRangeOps bwd(system, 0, low, -dt);
    for (std::size_t j = M - 1; j > 0; --j)
      bwd.step(out.states[j - 1].coeffs(), out.states[j].coeffs(), h.states[j - 1].coeffs(), h.states[j].coeffs());
  }
  return out;
}

WeightedTrajectory apply_T(const JordanSystem& system, WeightParameter theta, const std::vector<double>& times,
                           const StateVector& xi0_plus) {
  if (xi0_plus.modes() != system.modes() || xi0_plus.components() != system.block_size())
    throw ShapeError("low-mode data shape does not match the system");
  const Eigen::Index low = count_below(system.ladder, theta.theta);
  check_low_support(xi0_plus, low);

  WeightedTrajectory out = zero_trajectory(system, theta, times);
  for (std::size_t j = 0; j < times.size(); ++j) {
    auto& c = out.states[j].coeffs();
    for (Eigen::Index k = 0; k < low; ++k) {
      const Eigen::MatrixXd P = block_propagator(system.ladder.values()[k], times[j], system.pattern);
      c.row(k).noalias() = (P * xi0_plus.coeffs().row(k).transpose()).transpose();
    }
  }
  return out;
}

WeightParameter perron_weight(const JordanSystem& system, std::size_t n) {
  check_gap_index(system, n);
  const double a = system.ladder.lambda(n);
  const double b = system.ladder.lambda(n + 1);
  return system.nonlinearity.form == NonlinearityForm::lower_triangular ? optimal_theta_truncated(a, b)
                                                                       : optimal_theta_full(a, b);
}

WeightParameter resolve_weight(const JordanSystem& system, std::size_t n, const PerronSettings& settings) {
  const WeightParameter best = perron_weight(system, n);
  return settings.theta > 0.0 ? WeightParameter{settings.theta} : best;
}

BackwardSolution solve_backward(const JordanSystem& system, std::size_t n, const StateVector& xi0_plus,
                                const PerronSettings& settings) {
  const WeightParameter theta = resolve_weight(system, n, settings);
  if (xi0_plus.modes() != system.modes() || xi0_plus.components() != system.block_size())
    throw ShapeError("low-mode data shape does not match the system");
  check_low_support(xi0_plus, static_cast<Eigen::Index>(n));

  const double T = truncation_horizon(system.ladder.lambda(n), system.ladder.lambda(n + 1), theta.theta,
                                      settings.tail);
  const auto grid = uniform_grid(-T, 0.0, resolve_dt(settings, theta.theta));
  const WeightedTrajectory Tx = apply_T(system, theta, grid, xi0_plus);

  auto map = [&](const WeightedTrajectory& x) {
    WeightedTrajectory next = apply_L(system, nonlinearity_along(system, x));
    for (std::size_t j = 0; j < next.states.size(); ++j) next.states[j] += Tx.states[j];
    return next;
  };
  return iterate(Tx, map, norm_component(system), settings, "backward solve");
}

ManifoldGraph::ManifoldGraph(JordanSystem system, std::size_t n, PerronSettings settings)
    : system_(std::move(system)), n_(n), settings_(settings), theta_(resolve_weight(system_, n, settings_)) {}

double ManifoldGraph::lipschitz_bound() const {
  const double a = system_.ladder.lambda(n_);
  const double b = system_.ladder.lambda(n_ + 1);
  const double norm = system_.nonlinearity.form == NonlinearityForm::lower_triangular ? norm_L_truncated(a, b).norm
                                                                                      : norm_L_full(a, b).norm;
  const double kappa = system_.nonlinearity.L * norm;
  return kappa < 1.0 ? kappa / (1.0 - kappa) : std::numeric_limits<double>::infinity();
}

BackwardSolution ManifoldGraph::solve(const StateVector& xi0_plus) const {
  return solve_backward(system_, n_, xi0_plus, settings_);
}

StateVector ManifoldGraph::operator()(const StateVector& xi0_plus) const {
  const auto sol = solve(xi0_plus);
  StateVector value = high_part(sol.trajectory.states.back(), n_);
  std::lock_guard<std::mutex> lock(mutex_);
  cache_.push_back({xi0_plus, value});
  return value;
}

std::vector<ManifoldGraph::Sample> ManifoldGraph::samples() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_;
}

StateVector low_part(const StateVector& xi, std::size_t n) {
  StateVector out = xi;
  const auto rows = static_cast<Eigen::Index>(xi.modes());
  const auto keep = std::min<Eigen::Index>(static_cast<Eigen::Index>(n), rows);
  out.coeffs().bottomRows(rows - keep).setZero();
  return out;
}

StateVector high_part(const StateVector& xi, std::size_t n) {
  StateVector out = xi;
  out.coeffs().topRows(std::min<Eigen::Index>(static_cast<Eigen::Index>(n), out.coeffs().rows())).setZero();
  return out;
}

InvarianceReport verify_invariance(const ManifoldGraph& graph, const StateVector& xi0_plus, double horizon,
                                   std::size_t samples) {
  if (!(horizon > 0.0) || samples == 0) throw ParameterError("invariance check needs a positive horizon");
  const auto& s = graph.settings();
  const double dt = s.evolve_dt > 0.0 ? s.evolve_dt : resolve_dt(s, graph.theta().theta) / 4.0;
  const StateVector start = xi0_plus + graph(xi0_plus);
  const auto traj = evolve(graph.system(), start, {0.0, horizon}, dt);

  InvarianceReport rep;
  const std::size_t last = traj.states.size() - 1;
  for (std::size_t i = 1; i <= samples; ++i) {
    const std::size_t j = (last * i) / samples;
    const StateVector& xi = traj.states[j];
    const double d = (high_part(xi, graph.n()) - graph(low_part(xi, graph.n()))).norm();
    rep.times.push_back(traj.times[j]);
    rep.defects.push_back(d);
    rep.max_defect = std::max(rep.max_defect, d);
  }
  return rep;
}

double cutoff(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double cutoff_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

TrackingResult tracking_trace(const JordanSystem& system, std::size_t n, WeightParameter theta,
                              const Trajectory& forward, const PerronSettings& settings) {
  check_gap_index(system, n);
  const std::size_t P = forward.states.size();
  if (P < 3 || forward.times.front() != 0.0) throw ParameterError("tracking needs a forward trajectory from t = 0");
  const double h = forward.times[1] - forward.times[0];
  for (std::size_t j = 1; j < P; ++j)
    if (std::abs(forward.times[j] - forward.times[j - 1] - h) > 1e-9 * h)
      throw ParameterError("tracking needs a uniform forward grid");
  const double l0 = system.ladder.lambda(n);
  const double l1 = system.ladder.lambda(n + 1);
  const double t_plus = forward.times.back();
  if (t_plus <= 1.0) throw ParameterError("tracking needs a forward trajectory beyond t = 1");

  const double T = truncation_horizon(l0, l1, theta.theta, settings.tail);
  const auto K = static_cast<std::size_t>(std::ceil(T / h));
  std::vector<double> grid(K + P);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = (static_cast<double>(i) - static_cast<double>(K)) * h;
  for (std::size_t j = 0; j < P; ++j) grid[K + j] = forward.times[j];

  // phi xi and the fixed part phi F(xi) + phi' xi of the corrected forcing.
  std::vector<StateVector> phi_xi(grid.size(), system.zero_state());
  std::vector<StateVector> fixed(grid.size(), system.zero_state());
  for (std::size_t j = 0; j < P; ++j) {
    const double t = forward.times[j];
    const double p = cutoff(t);
    if (p == 0.0 && cutoff_derivative(t) == 0.0) continue;
    phi_xi[K + j] = p * forward.states[j];
    fixed[K + j] = p * system.nonlinearity(forward.states[j]) + cutoff_derivative(t) * forward.states[j];
  }

  auto map = [&](const WeightedTrajectory& x) {
    WeightedTrajectory f;
    f.times = x.times;
    f.theta = x.theta;
    f.states.reserve(x.states.size());
    for (std::size_t i = 0; i < x.states.size(); ++i)
      f.states.push_back(system.nonlinearity(phi_xi[i] + x.states[i]) - fixed[i]);
    return apply_L(system, f);
  };
  auto sol = iterate(zero_trajectory(system, theta, grid), map, norm_component(system), settings, "tracking");

  TrackingResult out;
  out.correction = std::move(sol.trajectory);
  out.times = forward.times;
  out.trace.reserve(P);
  for (std::size_t j = 0; j < P; ++j) out.trace.push_back(phi_xi[K + j] + out.correction.states[K + j]);

  // For t >= 1 the distance xi - xi_bar is the correction itself. The low
  // modes of the correction carry a truncation error near t_plus, so the fit
  // stops short of the end.
  auto& r = out.report;
  r.theta = theta.theta;
  r.contraction_rate = sol.contraction_rate;
  r.iterations = sol.iterations;
  r.fit_start = 1.0;
  r.fit_end = t_plus - std::min(5.0 / (l1 - l0), 0.5 * (t_plus - 1.0));
  double start_size = 0.0;
  std::vector<double> ts, ys;
  for (std::size_t j = 0; j < P; ++j) {
    const double t = forward.times[j];
    if (t < r.fit_start - 1e-12 || t > r.fit_end) continue;
    const double d = out.correction.states[K + j].norm();
    if (start_size == 0.0) start_size = d;
    if (!(d > 1e-11 * start_size)) break;
    ts.push_back(t);
    ys.push_back(std::log(d));
    r.constant = std::max(r.constant, d * std::exp(theta.theta * t));
  }
  r.fit_points = ts.size();
  if (ts.size() < 3) throw InconclusiveError("tracking: distance is at the noise floor on the fit window");
  const double n_pts = static_cast<double>(ts.size());
  double mt = 0.0, my = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    mt += ts[i];
    my += ys[i];
  }
  mt /= n_pts;
  my /= n_pts;
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - mt) * (ts[i] - mt);
    sty += (ts[i] - mt) * (ys[i] - my);
  }
  const double slope = sty / stt;
  r.fitted_rate = -slope;
  double ss = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double e = ys[i] - (my + slope * (ts[i] - mt));
    ss += e * e;
  }
  r.fit_rms = std::sqrt(ss / n_pts);
  return out;
}

}  // namespace kwakim
