#include "kwakim/kwak.hpp"

#include "kwakim/errors.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <random>

namespace kwakim {

namespace {

using Arrays = std::vector<Eigen::ArrayXd>;

void check_burgers(double nu, const Polynomial& f) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw ParameterError("viscosity must be positive");
  if (f.depends_on(Variable::ux)) throw ParameterError("the Burgers reaction term may depend on u only");
}

void check_band(const FourierField& u) {
  if (!u.is_real()) throw ParameterError("the periodic examples need a real field");
  if (u.max_mode() < 1) throw ParameterError("the periodic examples need at least one nonzero mode");
}

FieldTrajectory final_only(FieldTrajectory t) {
  t.times.erase(t.times.begin(), t.times.end() - 1);
  t.states.erase(t.states.begin(), t.states.end() - 1);
  return t;
}

double relative(const FieldState& a, const FieldState& b) {
  const double ref = state_norm(a);
  const double diff = state_norm(state_difference(a, b));
  return ref > 0.0 ? diff / ref : diff;
}

FourierField inverse_helmholtz(const FourierField& g) {
  return g.apply_symbol([](int k) { return -1.0 / (1.0 + double(k) * k); });
}

void check_reembedding(const StateVector& state, const EigenvalueLadder& ladder) {
  if (state.components() != 2) throw ShapeError("the re-embedding acts on two-component states");
  if (state.modes() != ladder.size()) throw ShapeError("state and ladder differ in length");
  for (double l : ladder.values())
    if (!(l > 0.0)) throw ParameterError("the re-embedding needs positive eigenvalues");
}

Eigen::ArrayXd sqrt_lambda(const EigenvalueLadder& ladder) {
  return Eigen::Map<const Eigen::ArrayXd>(ladder.values().data(), static_cast<Eigen::Index>(ladder.size())).sqrt();
}

}  // namespace

FourierField random_smooth_field(int max_mode, int active, double amplitude, std::uint64_t seed) {
  if (active < 1 || active > max_mode) throw ParameterError("active band must lie in 1..max_mode");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  FourierField u(max_mode, true);
  for (int k = 1; k <= active; ++k) {
    const double scale = amplitude / std::pow(double(k), 4);
    const double re = g(rng), im = g(rng);
    u[k] = scale * std::complex<double>(re, im);
    u[-k] = std::conj(u[k]);
  }
  return u;
}

// ---- Burgers ----

FieldTrajectory burgers_evolve(const FourierField& u0, double nu, const Polynomial& f, TimeSpan span, double dt,
                               int record_every) {
  check_burgers(nu, f);
  check_band(u0);
  SpectralSystem sys;
  sys.max_mode = u0.max_mode();
  sys.eigenvalue = [nu](int k) { return nu * double(k) * k; };
  const int degree = std::max(2, f.degree());
  sys.nonlinearity = [f, degree](const FieldState& s) -> FieldState {
    const FourierField sq =
        pointwise({s[0]}, degree, [](const Arrays& x) -> Eigen::ArrayXd { return x[0] * x[0]; });
    if (f.is_zero()) return {sq.derivative()};
    const FourierField r = pointwise({s[0]}, degree, [&f](const Arrays& x) -> Eigen::ArrayXd {
      return f(x[0], Eigen::ArrayXd::Zero(x[0].size()));
    });
    return {sq.derivative() - r};
  };
  return spectral_evolve(sys, {u0}, span, dt, Scheme::etd2rk, record_every);
}

BurgersKwakState burgers_kwak_transform(const FourierField& u, double nu, const Polynomial& f) {
  check_burgers(nu, f);
  check_band(u);
  BurgersKwakState s;
  s.u = u;
  s.v = u.derivative();
  s.w = (1.0 / nu) * product(u, u);
  s.nu = nu;
  s.f = f;
  return s;
}

double burgers_consistency_defect(const BurgersKwakState& s) {
  const double dv = (s.v - s.u.derivative()).norm();
  const double dw = (s.w - (1.0 / s.nu) * product(s.u, s.u)).norm();
  return std::max(dv, dw);
}

SpectralSystem burgers_transformed_system(int max_mode, double nu, const Polynomial& f) {
  check_burgers(nu, f);
  SpectralSystem sys;
  sys.max_mode = max_mode;
  sys.pattern = JordanPattern::burgers();
  sys.eigenvalue = [nu](int k) { return nu * double(k) * k; };
  const Polynomial df = f.derivative(Variable::u);
  const int degree = std::max(3, f.degree() + 1);
  sys.nonlinearity = [f, df, nu, degree](const FieldState& s) -> FieldState {
    const auto n = [&](auto&& expr) { return pointwise({s[0], s[1]}, degree, expr); };
    auto fu = [&f](const Eigen::ArrayXd& u) { return f(u, Eigen::ArrayXd::Zero(u.size())); };
    auto dfu = [&df](const Eigen::ArrayXd& u) { return df(u, Eigen::ArrayXd::Zero(u.size())); };
    FieldState out;
    out.push_back(n([&](const Arrays& x) -> Eigen::ArrayXd { return 2.0 * x[0] * x[1] - fu(x[0]); }));
    out.push_back(n([&](const Arrays& x) -> Eigen::ArrayXd { return -dfu(x[0]) * x[1]; }));
    out.push_back(n([&](const Arrays& x) -> Eigen::ArrayXd {
      return (2.0 / nu) * x[0] * (2.0 * x[0] * x[1] - fu(x[0])) - 2.0 * x[1] * x[1];
    }));
    return out;
  };
  return sys;
}

FieldTrajectory burgers_system_evolve(const BurgersKwakState& state0, TimeSpan span, double dt, int record_every) {
  check_band(state0.u);
  const SpectralSystem sys = burgers_transformed_system(state0.u.max_mode(), state0.nu, state0.f);
  return spectral_evolve(sys, state0.components(), span, dt, Scheme::etd2rk, record_every);
}

// ---- RDA ----

double rda_eigenvalue(int k) { return 1.0 + double(k) * k; }

EigenvalueLadder rda_ladder(std::size_t N) {
  std::vector<double> values;
  for (std::size_t k = 1; k <= N; ++k) values.push_back(rda_eigenvalue(static_cast<int>(k)));
  return make_ladder(ExplicitList{values});
}

FieldTrajectory rda_evolve(const FourierField& u0, const Polynomial& f, TimeSpan span, double dt, int record_every) {
  check_band(u0);
  SpectralSystem sys;
  sys.max_mode = u0.max_mode();
  sys.eigenvalue = rda_eigenvalue;
  const int degree = std::max(1, f.degree());
  sys.nonlinearity = [f, degree](const FieldState& s) -> FieldState {
    if (f.is_zero()) return {FourierField(s[0].max_mode(), true)};
    return {pointwise({s[0], s[0].derivative()}, degree,
                      [&f](const Arrays& x) -> Eigen::ArrayXd { return f(x[0], x[1]); })};
  };
  return spectral_evolve(sys, {u0}, span, dt, Scheme::etd2rk, record_every);
}

FourierField rda_auxiliary(const FourierField& u, const Polynomial& f) {
  if (f.is_zero()) return FourierField(u.max_mode(), true);
  const FourierField g = pointwise({u, u.derivative()}, std::max(1, f.degree()),
                                   [&f](const Arrays& x) -> Eigen::ArrayXd { return f(x[0], x[1]); });
  return inverse_helmholtz(g);
}

RdaKwakState rda_kwak_transform(const FourierField& u, const Polynomial& f) {
  check_band(u);
  return {u, rda_auxiliary(u, f), f};
}

double rda_consistency_defect(const RdaKwakState& s) { return (s.v - rda_auxiliary(s.u, s.f)).norm(); }

FourierField rda_nonlinearity_F(const FourierField& u, const Polynomial& f) {
  if (f.is_zero()) return FourierField(u.max_mode(), true);
  using V = Variable;
  const Polynomial fu = f.derivative(V::u), fp = f.derivative(V::ux);
  const Polynomial fuu = fu.derivative(V::u), fup = fu.derivative(V::ux), fpp = fp.derivative(V::ux);
  const int degree = std::max(1, 2 * f.degree() - 1);
  const FourierField ux = u.derivative(), uxx = u.derivative(2);
  const FourierField g = pointwise({u, ux, uxx}, degree, [&](const Arrays& x) -> Eigen::ArrayXd {
    const Eigen::ArrayXd& a = x[0];
    const Eigen::ArrayXd& p = x[1];
    const Eigen::ArrayXd& q = x[2];
    const Eigen::ArrayXd F = f(a, p), Fu = fu(a, p), Fp = fp(a, p);
    return Fu * F + Fp * (Fu * p + Fp * q) - Fu * a - Fp * p + F - fuu(a, p) * p * p -
           2.0 * fup(a, p) * p * q - fpp(a, p) * q * q;
  });
  return inverse_helmholtz(g);
}

SpectralSystem rda_jordan_system(int max_mode, const Polynomial& f) {
  SpectralSystem sys;
  sys.max_mode = max_mode;
  sys.pattern = JordanPattern::jordan(2);
  sys.eigenvalue = rda_eigenvalue;
  sys.nonlinearity = [f](const FieldState& s) -> FieldState {
    return {FourierField(s[0].max_mode(), true), rda_nonlinearity_F(s[0], f)};
  };
  return sys;
}

FieldTrajectory rda_jordan_evolve(const RdaKwakState& state0, TimeSpan span, double dt, int record_every) {
  check_band(state0.u);
  const SpectralSystem sys = rda_jordan_system(state0.u.max_mode(), state0.f);
  return spectral_evolve(sys, state0.components(), span, dt, Scheme::etd2rk, record_every);
}

double rda_chain_rule_residual(const FourierField& u0, const Polynomial& f, double T, double dt) {
  const FieldTrajectory traj = rda_evolve(u0, f, {0.0, T}, dt);
  if (traj.states.size() < 3) throw SizeError("chain-rule residual needs at least two steps");
  const double h = traj.times[1] - traj.times[0];
  std::vector<FourierField> v;
  for (const auto& s : traj.states) v.push_back(rda_auxiliary(s[0], f));
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < v.size(); ++j) {
    const FourierField F = rda_nonlinearity_F(traj.states[j][0], f);
    const FourierField Av = v[j].apply_symbol(rda_eigenvalue);
    const FourierField r = (1.0 / (2.0 * h)) * (v[j + 1] - v[j - 1]) + Av - F;
    const double scale = std::max({F.norm(), Av.norm(), 1e-300});
    worst = std::max(worst, r.norm() / scale);
  }
  return worst;
}

// ---- commuting diagrams ----

CommutingReport burgers_commuting_error(const FourierField& u0, double nu, const Polynomial& f, double T,
                                        double dt) {
  const FieldTrajectory direct = final_only(burgers_evolve(u0, nu, f, {0.0, T}, dt, INT_MAX));
  const FieldState route1 = burgers_kwak_transform(direct.states.back()[0], nu, f).components();
  const FieldTrajectory lifted =
      final_only(burgers_system_evolve(burgers_kwak_transform(u0, nu, f), {0.0, T}, dt, INT_MAX));
  return {relative(route1, lifted.states.back()), state_norm(route1), u0.max_mode(), dt, T};
}

CommutingReport rda_commuting_error(const FourierField& u0, const Polynomial& f, double T, double dt) {
  const FieldTrajectory direct = final_only(rda_evolve(u0, f, {0.0, T}, dt, INT_MAX));
  const FieldState route1 = rda_kwak_transform(direct.states.back()[0], f).components();
  const FieldTrajectory lifted = final_only(rda_jordan_evolve(rda_kwak_transform(u0, f), {0.0, T}, dt, INT_MAX));
  return {relative(route1, lifted.states.back()), state_norm(route1), u0.max_mode(), dt, T};
}

// ---- re-embedding ----

StateVector self_adjoint_reembedding(const StateVector& state, const EigenvalueLadder& ladder) {
  check_reembedding(state, ladder);
  StateVector out = state;
  out.coeffs().col(0).array() /= sqrt_lambda(ladder);
  return out;
}

StateVector inverse_reembedding(const StateVector& state, const EigenvalueLadder& ladder) {
  check_reembedding(state, ladder);
  StateVector out = state;
  out.coeffs().col(0).array() *= sqrt_lambda(ladder);
  return out;
}

double reembedding_linear_defect(const EigenvalueLadder& ladder) {
  const JordanPattern J = JordanPattern::jordan(2);
  double worst = 0.0;
  for (double l : ladder.values()) {
    if (!(l > 0.0)) throw ParameterError("the re-embedding needs positive eigenvalues");
    const Eigen::Matrix2d S = Eigen::Vector2d(1.0 / std::sqrt(l), 1.0).asDiagonal();
    const Eigen::Matrix2d Sinv = Eigen::Vector2d(std::sqrt(l), 1.0).asDiagonal();
    Eigen::Matrix2d expected = l * Eigen::Matrix2d::Identity();
    expected(0, 1) = std::sqrt(l);
    const Eigen::Matrix2d conj = S * (l * J.mask()) * Sinv;
    worst = std::max(worst, (conj - expected).cwiseAbs().maxCoeff() / l);
  }
  return worst;
}

StateVector reembedded_nonlinearity(const StateVector& state, const EigenvalueLadder& ladder, const ModeMap& F) {
  check_reembedding(state, ladder);
  const Eigen::ArrayXd r = sqrt_lambda(ladder);
  StateVector out(state.modes(), 2);
  out.coeffs().col(0) = -(r * state.coeffs().col(1).array()).matrix();
  const Eigen::VectorXd u = (r * state.coeffs().col(0).array()).matrix();
  const Eigen::VectorXd Fu = F(u);
  if (Fu.size() != u.size()) throw ShapeError("synthetic map changed the mode count");
  out.coeffs().col(1) = Fu;
  return out;
}

double weighted_norm_HL(const StateVector& state, double L) {
  if (state.components() != 2) throw ShapeError("the weighted norm acts on two-component states");
  if (!(L > 0.0)) throw ParameterError("the weighted norm needs L > 0");
  return std::sqrt(L * state.coeffs().col(0).squaredNorm() + state.coeffs().col(1).squaredNorm());
}

LipschitzSample reembedded_lipschitz_ratio(const EigenvalueLadder& ladder, const ModeMap& F, double L,
                                           std::size_t pairs, std::uint64_t seed) {
  if (!(L > 0.0)) throw ParameterError("Lipschitz constant must be positive");
  const auto N = static_cast<Eigen::Index>(ladder.size());
  const Eigen::ArrayXd r = sqrt_lambda(ladder);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> e(-3.0, 1.0);
  auto draw = [&](double scale) {
    StateVector x(ladder.size(), 2);
    for (Eigen::Index c = 0; c < 2; ++c)
      for (Eigen::Index k = 0; k < N; ++k) x.coeffs()(k, c) = scale * g(rng) / r(k);
    return x;
  };
  auto half = [&](const StateVector& x) {
    StateVector y = x;
    y.coeffs().array().colwise() *= r;
    return y;
  };

  LipschitzSample out;
  out.bound = std::sqrt(L);
  out.pairs = pairs;
  for (std::size_t i = 0; i < pairs; ++i) {
    const StateVector a = draw(std::pow(10.0, e(rng)));
    const StateVector b = a + draw(std::pow(10.0, e(rng)));
    const StateVector d = half(a - b);
    const double den = weighted_norm_HL(d, L);
    if (den == 0.0) continue;
    const double num = weighted_norm_HL(reembedded_nonlinearity(a, ladder, F) - reembedded_nonlinearity(b, ladder, F), L);
    out.max_ratio = std::max(out.max_ratio, num / den);

    const Eigen::VectorXd ua = half(a).component(0), ub = half(b).component(0);
    const double du = (ua - ub).norm();
    if (du > 0.0) out.measured_F = std::max(out.measured_F, (F(ua) - F(ub)).norm() / du);
  }
  return out;
}

}  // namespace kwakim
