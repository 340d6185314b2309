#include "acceptance/suite.hpp"

#include "kwakim/dynamics.hpp"
#include "kwakim/errors.hpp"
#include "kwakim/gapcheck.hpp"
#include "kwakim/kwak.hpp"
#include "kwakim/linop.hpp"
#include "kwakim/nonlinearities.hpp"
#include "kwakim/perron.hpp"
#include "kwakim/sharpness.hpp"
#include "support/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

namespace kwakim::acceptance {

namespace {

using json = nlohmann::json;

struct Spec {
  const char* name;
  double runtime_limit;
  std::function<void(CriterionResult&, const Options&)> body;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

std::vector<std::pair<double, double>> random_pairs(std::uint64_t seed, int count, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < count; ++i) out.push_back(oracle::random_gap_pair(rng, lo, hi));
  return out;
}

// ---- 1-5: operator norms and gap algebra ----

void operator_norm_equality(CriterionResult& r, const Options& o) {
  const double tol = 1e-6 * o.tol_scale;
  double worst = 0.0;
  for (const auto& [a, b] : random_pairs(o.seed + 1, 100, 1e-2, 1e4)) {
    const auto cf = norm_L_full(a, b);
    const auto on = oracle_norm(make_ladder(ExplicitList{{a, b}}), cf.theta, OmegaGrid{4001, 10.0 * b}, NormMode::full);
    worst = std::max(worst, std::abs(cf.norm - on.norm) / cf.norm);
  }
  r.checks_pass = worst < tol;
  r.metrics = {{"ladders", 100}, {"max_relative_error", worst}, {"tolerance", tol}};
  r.summary = fmt("max |closed - oracle| / closed = %.2e < %.0e", worst, tol);
}

double full_minimax(double a, double b) {
  auto cost = [&](double th) {
    return std::max(1.0 / oracle::smallest_eig_AAstar(a, th, 0.0), 1.0 / oracle::smallest_eig_AAstar(b, th, 0.0));
  };
  return oracle::golden_section_minimize(cost, a, b);
}

void optimal_theta_equality(CriterionResult& r, const Options& o) {
  const double tol = 1e-8 * o.tol_scale;
  double worst = 0.0;
  for (const auto& [a, b] : random_pairs(o.seed + 1, 100, 1e-2, 1e4)) {
    const double th = optimal_theta_full(a, b).theta;
    worst = std::max(worst, std::abs(th - full_minimax(a, b)) / th);
  }
  r.checks_pass = worst < tol;
  r.metrics = {{"ladders", 100}, {"max_relative_error", worst}, {"tolerance", tol}};
  r.summary = fmt("max |theta* - minimax| / theta* = %.2e < %.0e", worst, tol);
}

void truncated_norm(CriterionResult& r, const Options& o) {
  const double tol_norm = 1e-9 * o.tol_scale, tol_theta = 1e-10 * o.tol_scale;
  double worst_norm = 0.0, worst_theta = 0.0;
  int ordering_violations = 0;
  for (const auto& [a, b] : random_pairs(o.seed + 1, 100, 1e-2, 1e4)) {
    const auto ct = norm_L_truncated(a, b);
    const double closed = 1.0 / std::pow(std::sqrt(b) - std::sqrt(a), 2);
    const auto on = oracle_norm(make_ladder(ExplicitList{{a, b}}), ct.theta, OmegaGrid{4001, 10.0 * b},
                                NormMode::truncated);
    worst_norm = std::max({worst_norm, std::abs(closed - on.norm) / closed, std::abs(closed - ct.norm) / closed});
    auto cost = [&](double th) { return std::max(a / ((a - th) * (a - th)), b / ((b - th) * (b - th))); };
    const double mm = oracle::golden_section_minimize(cost, a, b);
    worst_theta = std::max(worst_theta, std::abs(std::sqrt(a * b) - mm) / std::sqrt(a * b));
    worst_theta = std::max(worst_theta, std::abs(ct.theta.theta - std::sqrt(a * b)) / std::sqrt(a * b));
    if (ct.norm > norm_L_full(a, b).norm) ++ordering_violations;
  }
  r.checks_pass = worst_norm < tol_norm && worst_theta < tol_theta && ordering_violations == 0;
  r.metrics = {{"max_norm_error", worst_norm},
               {"max_theta_error", worst_theta},
               {"ordering_violations", ordering_violations},
               {"tolerance_norm", tol_norm},
               {"tolerance_theta", tol_theta}};
  r.summary = fmt("norm err %.2e < %.0e, theta err %.2e < %.0e, truncated > full on %d samples", worst_norm,
                  tol_norm, worst_theta, tol_theta, ordering_violations);
}

void monotonicity(CriterionResult& r, const Options&) {
  const int G = 50;
  const double h = 1e-5, band = 1e-9;
  auto logspace = [](double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
    return v;
  };
  const auto lambdas = logspace(1e-2, 1e3, G);
  const auto thetas = logspace(1.3e-2, 1.1e3, G);
  std::vector<double> omegas;
  for (double w : logspace(1e-3, 1e4, G / 2)) {
    omegas.push_back(-w);
    omegas.push_back(w);
  }
  long checks = 0, violations[3] = {0, 0, 0};
  // Sign s: +1 means nondecreasing in the variable, -1 nonincreasing.
  auto test = [&](double up, double down, int s, double scale, long& v) {
    ++checks;
    if (s * (up - down) < -band * scale) ++v;
  };
  for (double l : lambdas)
    for (double th : thetas) {
      const bool straddle = std::abs(l - th) <= 2.0 * h * std::max(l, th);
      if (!straddle) {
        const double m0 = mu_min(l, th, 0.0);
        test(mu_min(l, th * (1 + h), 0.0), mu_min(l, th * (1 - h), 0.0), th < l ? -1 : 1, m0, violations[1]);
        test(mu_min(l * (1 + h), th, 0.0), mu_min(l * (1 - h), th, 0.0), l < th ? -1 : 1, m0, violations[2]);
      }
      for (double w : omegas) {
        const double up = mu_min(l, th, w * (1 + h)), down = mu_min(l, th, w * (1 - h));
        test(up, down, 1, std::max(up, down), violations[0]);  // |w (1+h)| > |w (1-h)|
      }
    }
  r.checks_pass = violations[0] + violations[1] + violations[2] == 0;
  r.metrics = {{"checks", checks},
               {"violations_omega", violations[0]},
               {"violations_theta", violations[1]},
               {"violations_lambda", violations[2]}};
  r.summary = fmt("%ld finite-difference sign checks, violations omega/theta/lambda = %ld/%ld/%ld", checks,
                  violations[0], violations[1], violations[2]);
}

void gap_equivalence(CriterionResult& r, const Options& o) {
  const double tol = 1e-12 * o.tol_scale;
  int strict_failures = 0;
  double worst = 0.0;
  for (const auto& [a, b] : random_pairs(o.seed + 5, 1000, 1e-3, 1e5)) {
    const auto g = gap_equivalence_bounds(a, b);
    if (!(g.lower < g.middle && g.middle < g.upper)) ++strict_failures;
    const double middle = a + b + 2.0 * std::sqrt(a * a + b * b - a * b);
    const double lhs = gap_lhs(a, b, {GapKind::jordan_full});
    worst = std::max({worst, std::abs(g.middle - middle) / middle, std::abs((b - a) * (b - a) / middle - lhs) / lhs});
  }
  r.checks_pass = strict_failures == 0 && worst < tol;
  r.metrics = {{"pairs", 1000}, {"strict_failures", strict_failures}, {"max_relative_error", worst}, {"tolerance", tol}};
  r.summary = fmt("strict two-sided inequality failed on %d/1000; denominator err %.2e < %.0e", strict_failures, worst,
                  tol);
}

// ---- 6-7: Perron construction ----

struct PerronOutcome {
  double theta = 0.0, contraction = 0.0, bound = 0.0, defect = 0.0, rate = 0.0, measured_L = 0.0, lhs = 0.0;
  int iterations = 0;
};

double sampled_lipschitz(const NonlinearitySpec& F, std::size_t N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> e(-3.0, 0.5);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    StateVector a(N, 2), d(N, 2);
    const double sa = std::pow(10.0, e(rng)), sd = std::pow(10.0, e(rng));
    for (Eigen::Index j = 0; j < a.coeffs().size(); ++j) {
      a.coeffs().data()[j] = sa * g(rng);
      d.coeffs().data()[j] = sd * g(rng);
    }
    worst = std::max(worst, (F(a + d) - F(a)).norm() / d.norm());
  }
  return worst;
}

PerronOutcome perron_scenario(bool lower, double L, const Options& o) {
  const std::size_t N = 16, n = 3;
  const auto F = lower ? saturating_lower_triangular(N, L, o.seed + 7) : saturating_general(N, 2, L, o.seed + 7);
  const JordanSystem sys(make_ladder(PowerLaw{1.0, 2.0}, N), JordanPattern::jordan(2), F);
  std::mt19937_64 rng(o.seed + 11);
  std::normal_distribution<double> g;
  StateVector x(N, 2);
  for (std::size_t k = 0; k < n; ++k)
    for (Eigen::Index c = 0; c < 2; ++c) x.coeffs()(static_cast<Eigen::Index>(k), c) = g(rng);

  PerronOutcome out;
  out.measured_L = sampled_lipschitz(F, N, o.seed + 13);
  out.lhs = gap_lhs(sys.ladder, n, {lower ? GapKind::jordan_truncated : GapKind::jordan_full});
  out.bound = L / out.lhs;
  const ManifoldGraph graph(sys, n);
  const BackwardSolution sol = graph.solve(x);
  out.theta = graph.theta().theta;
  out.contraction = sol.contraction_rate;
  out.iterations = sol.iterations;
  out.defect = verify_invariance(graph, x, 2.0, 8).max_defect;

  StateVector x0(N, 2);
  for (Eigen::Index j = 0; j < x0.coeffs().size(); ++j) x0.coeffs().data()[j] = g(rng);
  const double dt = 0.015 / out.theta;
  const Trajectory fwd = evolve(sys, x0, {0.0, 1.0 + 18.0 / 16.0}, dt);
  out.rate = tracking_trace(sys, n, graph.theta(), fwd).report.fitted_rate;
  return out;
}

void perron_report(CriterionResult& r, const PerronOutcome& p, double L, double theta_expected, const Options& o) {
  const double defect_tol = 1e-5 * o.tol_scale;
  const bool gap_ok = p.lhs > L;
  const bool a = p.contraction <= p.bound + 0.02 && p.contraction < 1.0;
  const bool b = p.defect < defect_tol;
  const bool c = p.rate >= 0.95 * p.theta;
  const bool th = std::abs(p.theta - theta_expected) <= 1e-9 * theta_expected;
  r.checks_pass = gap_ok && a && b && c && th && p.measured_L <= L * (1 + 1e-12);
  r.metrics = {{"gap_lhs", p.lhs},        {"L", L},
               {"measured_L", p.measured_L}, {"theta", p.theta},
               {"contraction_rate", p.contraction}, {"contraction_bound", p.bound + 0.02},
               {"iterations", p.iterations}, {"invariance_defect", p.defect},
               {"defect_tolerance", defect_tol}, {"tracking_rate", p.rate},
               {"tracking_threshold", 0.95 * p.theta}};
  r.summary = fmt("lhs %.5f > L %.2f; kappa %.3f <= %.3f; defect %.1e < %.0e; rate %.2f >= %.2f", p.lhs, L,
                  p.contraction, p.bound + 0.02, p.defect, defect_tol, p.rate, 0.95 * p.theta);
}

void perron_general(CriterionResult& r, const Options& o) {
  const double L = 0.5;
  const PerronOutcome p = perron_scenario(false, L, o);
  perron_report(r, p, L, optimal_theta_full(9.0, 16.0).theta, o);
  r.metrics["gap_lhs_exact"] = 49.0 / (25.0 + 2.0 * std::sqrt(193.0));
}

void perron_lower(CriterionResult& r, const Options& o) {
  const double L = 0.9;
  perron_report(r, perron_scenario(true, L, o), L, 12.0, o);
}

// ---- 8: sharpness ----

void sharpness(CriterionResult& r, const Options& o) {
  const double a = 1.0, b = 4.0, eps = 0.01;
  const double k_full = (b - a) * (b - a) / (a + b + 2.0 * std::sqrt(a * a - a * b + b * b));
  const double k_trunc = std::pow(std::sqrt(b) - std::sqrt(a), 2);
  const double k_err = std::max(std::abs(coupling_K(a, b, NormMode::full) - k_full) / k_full,
                                std::abs(coupling_K(a, b, NormMode::truncated) - k_trunc) / k_trunc);

  json modes = json::object();
  bool ok = k_err < 1e-12 * o.tol_scale;
  double poly_err = 0.0;
  int min_zeros = 1 << 30;
  for (const NormMode mode : {NormMode::full, NormMode::truncated}) {
    const bool full = mode == NormMode::full;
    const double K = full ? k_full : k_trunc;
    const double L = full ? 0.8 : 1.05;  // nogap: K < L with margin
    const auto zero = build_counterexample(a, b, 0.0, mode);
    const auto inst = build_counterexample(a, b, eps, mode);
    const auto osc = oscillation_demo(inst, 3.0);
    const double merge = std::abs(zero.unperturbed[1] - zero.unperturbed[2]) / zero.unperturbed[1];
    const bool mode_ok = K < L && inst.nonlinearity_norm() < L && inst.has_complex_pair() && osc.zero_count >= 6 &&
                         merge < 1e-12 * o.tol_scale;
    json m = {{"K", K},
              {"L", L},
              {"nonlinearity_norm", inst.nonlinearity_norm()},
              {"merge_gap", merge},
              {"omega", osc.omega},
              {"sign_changes", osc.zero_count}};
    if (!full) {
      const auto chk = characteristic_polynomial_check(inst);
      poly_err = chk.max_error;
      m["polynomial_error"] = poly_err;
      m["polynomial_fitted"] = chk.fitted;
      ok = ok && poly_err < 1e-10 * o.tol_scale;
    }
    min_zeros = std::min(min_zeros, osc.zero_count);
    ok = ok && mode_ok;
    modes[full ? "full" : "truncated"] = m;
  }
  r.checks_pass = ok;
  r.metrics = {{"K_error", k_err}, {"epsilon", eps}, {"modes", modes}};
  r.summary = fmt("K err %.1e; complex pair with eps=0.01; >= %d sign changes in 3 periods; poly err %.1e", k_err,
                  min_zeros, poly_err);
}

// ---- 9: commuting diagrams ----

void commuting(CriterionResult& r, const Options& o) {
  const double tol = 1e-4 * o.tol_scale;
  const double T = 0.5, dt = 1e-3;
  const auto u0 = [&](int N) { return random_smooth_field(N, 8, 0.5, o.seed + 17); };
  const Polynomial fb = Polynomial::parse("0.1*u^3");
  const Polynomial fr = Polynomial::parse("-u^3 + 0.1*u*ux");
  const auto b1 = burgers_commuting_error(u0(32), 1.0, fb, T, dt);
  const auto b2 = burgers_commuting_error(u0(64), 1.0, fb, T, dt / 2);
  const auto r1 = rda_commuting_error(u0(32), fr, T, dt);
  const auto r2 = rda_commuting_error(u0(64), fr, T, dt / 2);
  const double rb = b1.error / b2.error, rr = r1.error / r2.error;
  r.checks_pass = b1.error < tol && r1.error < tol && rb >= 3.0 && rr >= 3.0;
  r.metrics = {{"burgers", {{"error", b1.error}, {"refined_error", b2.error}, {"ratio", rb}, {"f", fb.to_string()}}},
               {"rda", {{"error", r1.error}, {"refined_error", r2.error}, {"ratio", rr}, {"f", fr.to_string()}}},
               {"tolerance", tol},
               {"max_mode", 32},
               {"dt", dt},
               {"T", T}};
  r.summary = fmt("Burgers %.2e (x%.1f), RDA %.2e (x%.1f) < %.0e", b1.error, rb, r1.error, rr, tol);
}

// ---- 10: propagator ----

void propagator(CriterionResult& r, const Options& o) {
  std::mt19937_64 rng(o.seed + 19);
  std::uniform_real_distribution<double> ut(0.0, 2.0);
  std::bernoulli_distribution coin;
  double worst_exp = 0.0, worst_group = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double lambda = oracle::log_uniform(rng, 1e-2, 10.0);
    const double t = ut(rng), s = ut(rng);
    const auto p = JordanPattern::jordan(coin(rng) ? 3 : 2);
    const Eigen::MatrixXd P = block_propagator(lambda, t, p);
    worst_exp = std::max(worst_exp, (P - oracle::expm(-t * lambda * p.mask())).norm() / std::max(1.0, P.norm()));
    const Eigen::MatrixXd lhs = block_propagator(lambda, s + t, p);
    worst_group = std::max(worst_group, (lhs - block_propagator(lambda, s, p) * P).norm() / std::max(1.0, lhs.norm()));
  }
  const double tol_exp = 1e-12 * o.tol_scale, tol_group = 1e-13 * o.tol_scale;
  r.checks_pass = worst_exp < tol_exp && worst_group < tol_group;
  r.metrics = {{"samples", 1000}, {"max_expm_error", worst_exp}, {"max_group_error", worst_group}};
  r.summary = fmt("vs expm %.1e < %.0e, group law %.1e < %.0e", worst_exp, tol_exp, worst_group, tol_group);
}

// ---- 11: weighted norm ----

void weighted_norm(CriterionResult& r, const Options& o) {
  const double L = 0.5;
  const double slack = 1e-6 * o.tol_scale;
  const EigenvalueLadder ladder = make_ladder(PowerLaw{1.0, 2.0}, 12);
  json maps = json::array();
  bool ok = true;
  double worst = 0.0;
  for (const auto& m : lipschitz_family(12, L, o.seed + 23)) {
    const LipschitzSample s = reembedded_lipschitz_ratio(ladder, m.map, L, 500, o.seed + 29);
    ok = ok && s.measured_F <= L * (1 + 1e-12) && s.max_ratio <= s.bound * (1 + slack);
    worst = std::max(worst, s.max_ratio / s.bound);
    maps.push_back({{"name", m.name}, {"measured_L", s.measured_F}, {"max_ratio", s.max_ratio}});
  }
  r.checks_pass = ok;
  r.metrics = {{"L", L}, {"sqrt_L", std::sqrt(L)}, {"pairs", 500}, {"maps", maps}};
  r.summary = fmt("max ratio / sqrt(L) = %.6f <= 1 + %.0e over 5 maps x 500 pairs", worst, slack);
}

const std::vector<Spec>& specs() {
  static const std::vector<Spec> s = {
      {"operator-norm equality", 10.0, operator_norm_equality},
      {"optimal weight equality", 5.0, optimal_theta_equality},
      {"truncated norm", 5.0, truncated_norm},
      {"monotonicity suite", 10.0, monotonicity},
      {"gap equivalence inequality", 5.0, gap_equivalence},
      {"Perron construction, general", 60.0, perron_general},
      {"Perron construction, lower-triangular", 60.0, perron_lower},
      {"sharpness", 5.0, sharpness},
      {"commuting diagrams", 120.0, commuting},
      {"propagator exactness", 2.0, propagator},
      {"weighted-norm Lipschitz ratio", 5.0, weighted_norm},
  };
  return s;
}

}  // namespace

std::vector<int> all_criteria() {
  std::vector<int> ids;
  for (int i = 1; i <= static_cast<int>(specs().size()); ++i) ids.push_back(i);
  return ids;
}

CriterionResult run_criterion(int id, const Options& options) {
  if (id < 1 || id > static_cast<int>(specs().size())) throw IndexError("no acceptance criterion " + std::to_string(id));
  if (!(options.tol_scale > 0.0)) throw ParameterError("tol_scale must be positive");
  const Spec& spec = specs()[static_cast<std::size_t>(id - 1)];
  CriterionResult r;
  r.id = id;
  r.name = spec.name;
  r.runtime_limit = spec.runtime_limit;
  const auto start = std::chrono::steady_clock::now();
  try {
    spec.body(r, options);
  } catch (const Error& e) {
    r.checks_pass = false;
    r.summary = std::string("error: ") + e.what();
    r.metrics = {{"error", e.what()}};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.within_runtime = r.seconds < r.runtime_limit;
  return r;
}

std::vector<CriterionResult> run(const std::vector<int>& ids, const Options& options) {
  std::vector<CriterionResult> out;
  for (int id : ids) out.push_back(run_criterion(id, options));
  return out;
}

std::string format_line(const CriterionResult& r) {
  return fmt("%s %2d  %s: %s (%.2f s / %g s)", r.pass() ? "PASS" : "FAIL", r.id, r.name.c_str(), r.summary.c_str(),
             r.seconds, r.runtime_limit);
}

json to_json(const CriterionResult& r) {
  return {{"id", r.id},
          {"name", r.name},
          {"pass", r.pass()},
          {"checks_pass", r.checks_pass},
          {"within_runtime", r.within_runtime},
          {"runtime_limit_s", r.runtime_limit},
          {"metrics", r.metrics}};
}

}  // namespace kwakim::acceptance
