#include "doctest.h"

#include "kwakim/errors.hpp"
#include "kwakim/kwak.hpp"
#include "kwakim/nonlinearities.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace kwakim;
using cplx = std::complex<double>;

namespace {

constexpr double pi = std::numbers::pi;

const Polynomial kZero;

// Coefficients by direct quadrature of samples of a periodic function.
FourierField naive_coefficients(const std::function<double(double)>& g, int N, int P = 256) {
  FourierField f(N, true);
  for (int k = -N; k <= N; ++k) {
    cplx s = 0.0;
    for (int j = 0; j < P; ++j) {
      const double x = -pi + 2 * pi * j / P;
      s += g(x) * std::exp(cplx(0.0, -k * x));
    }
    f[k] = s / double(P);
  }
  return f;
}

double field_value(const FourierField& f, double x) {
  cplx s = 0.0;
  for (int k = -f.max_mode(); k <= f.max_mode(); ++k) s += f[k] * std::exp(cplx(0.0, k * x));
  return s.real();
}

FourierField u0_default(int N) { return random_smooth_field(N, 8, 0.5, 7); }

}  // namespace

TEST_CASE("random_smooth_field is real, mean free and decays like k^-4") {
  const FourierField u = random_smooth_field(32, 8, 1.0, 3);
  CHECK(u.symmetry_defect() == 0.0);
  CHECK(u[0] == cplx(0.0));
  CHECK(u[9] == cplx(0.0));
  CHECK(random_smooth_field(64, 8, 1.0, 3).resized(32).coefficients() == u.coefficients());
  CHECK_THROWS_AS(random_smooth_field(4, 8, 1.0, 3), ParameterError);
}

// ---- Burgers ----

TEST_CASE("Burgers: zero data stays zero") {
  const FieldTrajectory tr = burgers_evolve(FourierField(16), 1.0, Polynomial::parse("u^3"), {0.0, 0.2}, 0.01);
  CHECK(tr.states.back()[0].norm() == 0.0);
  const FieldTrajectory sys =
      burgers_system_evolve(burgers_kwak_transform(FourierField(16), 1.0, kZero), {0.0, 0.2}, 0.01);
  CHECK(state_norm(sys.states.back()) == 0.0);
}

TEST_CASE("Burgers: self-convergence against double resolution and half step") {
  const FourierField u0 = FourierField::trig(16, 1, 1.0);
  const double T = 0.1, dt = 1e-4;
  const FourierField a = burgers_evolve(u0, 1.0, kZero, {0.0, T}, dt, 1 << 20).states.back()[0];
  const FourierField b = burgers_evolve(u0.resized(32), 1.0, kZero, {0.0, T}, dt / 2, 1 << 20).states.back()[0];
  CHECK((a.resized(32) - b).norm() < 1e-8);
}

TEST_CASE("Burgers: energy is nonincreasing without reaction") {
  const FieldTrajectory tr = burgers_evolve(u0_default(32), 1.0, kZero, {0.0, 0.5}, 1e-3);
  double prev = tr.states.front()[0].norm();
  for (const auto& s : tr.states) {
    CHECK(s[0].norm() <= prev * (1 + 1e-12));
    prev = s[0].norm();
  }
  // Mean is conserved by the flux form.
  CHECK(std::abs(tr.states.back()[0][0]) < 1e-15);
}

TEST_CASE("Burgers transform of sin x") {
  const BurgersKwakState s = burgers_kwak_transform(FourierField::trig(8, 1, 1.0), 1.0, kZero);
  CHECK((s.v - FourierField::trig(8, 1, 0.0, 1.0)).norm() < 1e-15);
  FourierField w(8);
  w[0] = 0.5;
  w = w - FourierField::trig(8, 2, 0.0, 0.5);
  CHECK((s.w - w).norm() < 1e-15);
  CHECK(burgers_consistency_defect(s) < 1e-15);
}

TEST_CASE("Burgers transform: antiderivative of v recovers u minus its mean; w is nonnegative") {
  FourierField u = random_smooth_field(24, 10, 1.0, 12);
  u[0] = 0.3;
  const double nu = 0.7;
  const BurgersKwakState s = burgers_kwak_transform(u, nu, kZero);
  FourierField anti = s.v.apply_symbol([](int k) { return 0.0 * k; });
  for (int k = -24; k <= 24; ++k)
    if (k != 0) anti[k] = s.v[k] / cplx(0.0, k);
  FourierField centered = u;
  centered[0] = 0.0;
  CHECK((anti - centered).norm() < 1e-14);

  // u^2 / nu by direct quadrature of the squared physical values.
  const FourierField w = naive_coefficients([&](double x) { return field_value(u, x) * field_value(u, x) / nu; }, 24);
  CHECK((s.w - w).norm() < 1e-12);
  CHECK(s.w.physical(128).minCoeff() > -1e-12);
}

TEST_CASE("Burgers: transform rejects bad viscosity and u_x-dependent reactions") {
  const FourierField u = FourierField::trig(8, 1, 1.0);
  CHECK_THROWS_AS(burgers_kwak_transform(u, 0.0, kZero), ParameterError);
  CHECK_THROWS_AS(burgers_kwak_transform(u, 1.0, Polynomial::parse("ux")), ParameterError);
  CHECK_THROWS_AS(burgers_evolve(u, -1.0, kZero, {0.0, 1.0}, 0.1), ParameterError);
}

TEST_CASE("Burgers: transformed system stays consistent for a small single mode") {
  const BurgersKwakState s0 = burgers_kwak_transform(FourierField::trig(16, 1, 1e-3), 1.0, kZero);
  const FieldTrajectory tr = burgers_system_evolve(s0, {0.0, 0.5}, 1e-3, 50);
  for (const auto& s : tr.states) CHECK((s[1] - s[0].derivative()).norm() < 1e-6);
}

TEST_CASE("Burgers commuting diagram") {
  const Polynomial f = Polynomial::parse("0.1*u^3");
  const CommutingReport coarse = burgers_commuting_error(u0_default(32), 1.0, f, 0.5, 1e-3);
  const CommutingReport fine = burgers_commuting_error(u0_default(64), 1.0, f, 0.5, 5e-4);
  CHECK(coarse.error < 1e-4);
  CHECK(coarse.error / fine.error >= 3.0);
}

TEST_CASE("Burgers evolutions preserve conjugate symmetry") {
  const Polynomial f = Polynomial::parse("0.1*u^3");
  const FieldTrajectory a = burgers_evolve(u0_default(32), 1.0, f, {0.0, 0.5}, 1e-3, 100);
  const FieldTrajectory b = burgers_system_evolve(burgers_kwak_transform(u0_default(32), 1.0, f), {0.0, 0.5}, 1e-3, 100);
  for (const auto& s : a.states) CHECK(s[0].symmetry_defect() < 1e-13);
  for (const auto& s : b.states)
    for (const auto& c : s) CHECK(c.symmetry_defect() < 1e-13);
}

// ---- RDA ----

TEST_CASE("RDA: F vanishes for f = 0") {
  CHECK(rda_nonlinearity_F(u0_default(16), kZero).norm() == 0.0);
}

TEST_CASE("RDA: f = u gives F(sin x) = -sin(x) / 2") {
  const FourierField F = rda_nonlinearity_F(FourierField::trig(16, 1, 1.0), Polynomial::parse("u"));
  CHECK((F - FourierField::trig(16, 1, -0.5)).norm() < 1e-15);
}

TEST_CASE("RDA: F matches termwise quadrature for f = u^2 and f = u ux") {
  const FourierField u = random_smooth_field(12, 3, 0.8, 21);
  const FourierField ux = u.derivative(), uxx = u.derivative(2);
  auto U = [&](double x) { return field_value(u, x); };
  auto P = [&](double x) { return field_value(ux, x); };
  auto Q = [&](double x) { return field_value(uxx, x); };
  auto helm = [](FourierField g) { return g.apply_symbol([](int k) { return -1.0 / (1.0 + k * k); }); };

  // f = u^2: f_u = 2u, f_uu = 2 -> bracket 2u^3 - 2u^2 + u^2 - 2 u_x^2
  const FourierField g1 = naive_coefficients(
      [&](double x) { return 2 * std::pow(U(x), 3) - U(x) * U(x) - 2 * P(x) * P(x); }, 12);
  CHECK((rda_nonlinearity_F(u, Polynomial::parse("u^2")) - helm(g1)).norm() < 1e-12);

  // f = u u_x: f_u = u_x, f_p = u, f_up = 1 ->
  // u_x u u_x + u (u_x^2 + u u_xx) - u_x u - u u_x + u u_x - 2 u_x u_xx
  const FourierField g2 = naive_coefficients(
      [&](double x) {
        const double a = U(x), p = P(x), q = Q(x);
        return 2 * a * p * p + a * a * q - a * p - 2 * p * q;
      },
      12);
  CHECK((rda_nonlinearity_F(u, Polynomial::parse("u*ux")) - helm(g2)).norm() < 1e-12);
}

TEST_CASE("RDA: chain-rule residual decays at second order") {
  const Polynomial f = Polynomial::parse("-u^3 + 0.1*u*ux");
  const FourierField u0 = u0_default(32);
  const double r1 = rda_chain_rule_residual(u0, f, 0.2, 2e-3);
  const double r2 = rda_chain_rule_residual(u0, f, 0.2, 1e-3);
  CHECK(r2 < r1 / 3.0);
  CHECK(r2 < 1e-2);
}

TEST_CASE("RDA: eigenvalues are 1 + k^2") {
  const EigenvalueLadder l = rda_ladder(5);
  for (std::size_t k = 1; k <= 5; ++k) CHECK(l.lambda(k) == 1.0 + double(k * k));
  CHECK(rda_eigenvalue(0) == 1.0);
}

TEST_CASE("RDA: Jordan evolution without reaction is the exact block flow") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  RdaKwakState s0 = rda_kwak_transform(u0_default(10), kZero);
  for (int k = 1; k <= 10; ++k) {
    s0.v[k] = cplx(g(rng), g(rng)) / double(k * k);
    s0.v[-k] = std::conj(s0.v[k]);
  }
  const double T = 0.3;
  const FieldState xT = rda_jordan_evolve(s0, {0.0, T}, 0.07).states.back();
  for (int k = -10; k <= 10; ++k) {
    const Eigen::Matrix2cd P = block_propagator(rda_eigenvalue(k), T, JordanPattern::jordan(2)).cast<cplx>();
    const Eigen::Vector2cd e = P * Eigen::Vector2cd(s0.u[k], s0.v[k]);
    CHECK(std::abs(xT[0][k] - e(0)) < 1e-14);
    CHECK(std::abs(xT[1][k] - e(1)) < 1e-14);
  }
}

TEST_CASE("RDA commuting diagram") {
  const Polynomial f = Polynomial::parse("-u^3 + 0.1*u*ux");
  const CommutingReport coarse = rda_commuting_error(u0_default(32), f, 0.5, 1e-3);
  const CommutingReport fine = rda_commuting_error(u0_default(64), f, 0.5, 5e-4);
  CHECK(coarse.error < 1e-4);
  CHECK(coarse.error / fine.error >= 3.0);
  CHECK(rda_consistency_defect(rda_kwak_transform(u0_default(32), f)) == 0.0);
}

TEST_CASE("RDA evolutions preserve conjugate symmetry") {
  const Polynomial f = Polynomial::parse("-u^3 + 0.1*u*ux");
  const FieldTrajectory tr = rda_jordan_evolve(rda_kwak_transform(u0_default(32), f), {0.0, 0.5}, 1e-3, 100);
  for (const auto& s : tr.states)
    for (const auto& c : s) CHECK(c.symmetry_defect() < 1e-13);
}

// ---- re-embedding ----

TEST_CASE("re-embedding scales u by lambda^{-1/2}") {
  const EigenvalueLadder l = make_ladder(ExplicitList{{1.0, 4.0, 9.0}});
  StateVector x(3, 2);
  x.coeffs()(1, 0) = 6.0;
  x.coeffs()(1, 1) = -1.0;
  const StateVector y = self_adjoint_reembedding(x, l);
  CHECK(y.coeffs()(1, 0) == 3.0);
  CHECK(y.coeffs()(1, 1) == -1.0);
  CHECK(y.coeffs().row(0).norm() == 0.0);
}

TEST_CASE("re-embedding round trip and linear structure") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  const EigenvalueLadder l = make_ladder(PowerLaw{0.3, 2.0}, 20);
  StateVector x(20, 2);
  for (Eigen::Index i = 0; i < x.coeffs().size(); ++i) x.coeffs().data()[i] = g(rng);
  const StateVector back = inverse_reembedding(self_adjoint_reembedding(x, l), l);
  CHECK((back - x).norm() < 1e-14 * x.norm());
  CHECK(reembedding_linear_defect(l) < 1e-15);
  CHECK_THROWS_AS(self_adjoint_reembedding(StateVector(20, 3), l), ShapeError);
  CHECK_THROWS_AS(self_adjoint_reembedding(StateVector(5, 2), l), ShapeError);
}

TEST_CASE("re-embedded nonlinearity has Lipschitz ratio at most sqrt(L) in the weighted norm") {
  const EigenvalueLadder l = make_ladder(PowerLaw{1.0, 2.0}, 12);
  for (double L : {0.3, 2.5})
    for (const auto& m : lipschitz_family(12, L, 17)) {
      CAPTURE(m.name);
      const LipschitzSample s = reembedded_lipschitz_ratio(l, m.map, L, 500, 5);
      CHECK(s.measured_F <= L * (1 + 1e-12));
      CHECK(s.max_ratio <= std::sqrt(L) * (1 + 1e-6));
      CHECK(s.max_ratio > 0.5 * std::sqrt(L));
    }
}

TEST_CASE("weighted norm combines components with weight L") {
  StateVector x(2, 2);
  x.coeffs() << 1, 2, 0, 2;
  CHECK(weighted_norm_HL(x, 4.0) == doctest::Approx(std::sqrt(4 * 1 + 8)));
  CHECK_THROWS_AS(weighted_norm_HL(x, 0.0), ParameterError);
}
