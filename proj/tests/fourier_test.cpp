#include "doctest.h"

#include "kwakim/errors.hpp"
#include "kwakim/fourier.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace kwakim;
using cplx = std::complex<double>;

namespace {

constexpr double pi = std::numbers::pi;

FourierField random_real(std::mt19937_64& rng, int N, int active) {
  std::normal_distribution<double> g;
  FourierField f(N, true);
  f[0] = g(rng);
  for (int k = 1; k <= active; ++k) {
    f[k] = cplx(g(rng), g(rng));
    f[-k] = std::conj(f[k]);
  }
  return f;
}

// Direct evaluation of sum c_k e^{ikx}.
cplx naive_value(const FourierField& f, double x) {
  cplx s = 0.0;
  for (int k = -f.max_mode(); k <= f.max_mode(); ++k) s += f[k] * std::exp(cplx(0.0, k * x));
  return s;
}

// Exact coefficients of a b by discrete convolution, truncated to the band.
FourierField convolution(const FourierField& a, const FourierField& b) {
  const int N = a.max_mode();
  FourierField out(N, true);
  for (int k = -N; k <= N; ++k)
    for (int j = -N; j <= N; ++j) out[k] += a[j] * b[k - j];
  return out;
}

}  // namespace

TEST_CASE("trig builds sin and cos coefficients") {
  const FourierField s = FourierField::trig(4, 2, 3.0, -1.0);
  for (double x : {-2.0, 0.1, 1.7}) CHECK(naive_value(s, x).real() == doctest::Approx(3 * std::sin(2 * x) - std::cos(2 * x)));
  CHECK(s.symmetry_defect() == 0.0);
}

TEST_CASE("physical values match direct summation on the shifted grid") {
  std::mt19937_64 rng(11);
  const FourierField f = random_real(rng, 7, 7);
  const int P = 32;
  const Eigen::VectorXd v = f.physical(P);
  for (int j = 0; j < P; ++j) {
    const double x = -pi + 2 * pi * j / P;
    CHECK(v(j) == doctest::Approx(naive_value(f, x).real()).epsilon(1e-12));
  }
  CHECK_THROWS_AS(f.physical(14), ShapeError);
}

TEST_CASE("from_physical inverts physical for band-limited data") {
  std::mt19937_64 rng(5);
  const FourierField f = random_real(rng, 10, 10);
  for (int P : {21, 32, 64}) {
    const FourierField g = FourierField::from_physical(f.physical(P), 10);
    CHECK((g - f).norm() < 1e-13 * f.norm());
  }
}

TEST_CASE("derivative of sin is cos") {
  const FourierField d = FourierField::trig(5, 3, 1.0).derivative();
  const FourierField expected = FourierField::trig(5, 3, 0.0, 3.0);
  CHECK((d - expected).norm() < 1e-15);
  const FourierField d2 = FourierField::trig(5, 3, 1.0).derivative(2);
  CHECK((d2 + 9.0 * FourierField::trig(5, 3, 1.0)).norm() < 1e-14);
}

TEST_CASE("dealiased product equals exact convolution and the double-resolution product") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    const int N = 16;
    const FourierField a = random_real(rng, N, N), b = random_real(rng, N, N);
    const FourierField p = product(a, b);
    CHECK((p - convolution(a, b)).norm() < 1e-12 * p.norm());
    const FourierField p2 = product(a.resized(2 * N), b.resized(2 * N)).resized(N);
    CHECK((p - p2).norm() < 1e-10 * p.norm());
  }
}

TEST_CASE("cubic pointwise maps are alias-free on the degree-aware grid") {
  std::mt19937_64 rng(9);
  const FourierField a = random_real(rng, 12, 12);
  const FourierField cube = pointwise({a}, 3, [](const std::vector<Eigen::ArrayXd>& x) -> Eigen::ArrayXd {
    return x[0] * x[0] * x[0];
  });
  const FourierField a2 = a.resized(24);
  const FourierField exact = convolution(convolution(a2, a2), a2).resized(12);
  CHECK((cube - exact).norm() < 1e-12 * exact.norm());
  CHECK(dealiased_grid(32, 2) == 128);
  CHECK(dealiased_grid(32, 5) == 256);
}

TEST_CASE("spectral_evolve with zero nonlinearity applies the per-mode propagator") {
  std::mt19937_64 rng(4);
  const int N = 6;
  SpectralSystem sys;
  sys.max_mode = N;
  sys.pattern = JordanPattern::jordan(2);
  sys.eigenvalue = [](int k) { return 0.5 + double(k) * k; };
  sys.nonlinearity = [N](const FieldState&) { return FieldState{FourierField(N), FourierField(N)}; };
  const FieldState x0{random_real(rng, N, N), random_real(rng, N, N)};
  const double T = 0.37;
  const FieldTrajectory tr = spectral_evolve(sys, x0, {0.0, T}, 0.05);
  CHECK(tr.times.back() == doctest::Approx(T));
  const FieldState& xT = tr.states.back();
  for (int k = -N; k <= N; ++k) {
    const Eigen::MatrixXd P = block_propagator(sys.eigenvalue(k), T, sys.pattern);
    Eigen::Vector2cd z(x0[0][k], x0[1][k]);
    const Eigen::Vector2cd expect = P.cast<cplx>() * z;
    CHECK(std::abs(xT[0][k] - expect(0)) < 1e-12);
    CHECK(std::abs(xT[1][k] - expect(1)) < 1e-12);
  }
}

TEST_CASE("spectral_evolve records the requested stride and the final state") {
  SpectralSystem sys;
  sys.max_mode = 2;
  sys.eigenvalue = [](int k) { return double(k) * k; };
  sys.nonlinearity = [](const FieldState& s) { return FieldState{FourierField(s[0].max_mode())}; };
  const FieldTrajectory tr = spectral_evolve(sys, {FourierField::trig(2, 1, 1.0)}, {0.0, 1.0}, 0.1, Scheme::etd2rk, 3);
  REQUIRE(tr.times.size() == 5);  // 0, 0.3, 0.6, 0.9, 1.0
  CHECK(tr.times[1] == doctest::Approx(0.3));
  CHECK(tr.times.back() == doctest::Approx(1.0));
  CHECK_THROWS_AS(spectral_evolve(sys, {FourierField(3)}, {0.0, 1.0}, 0.1), ShapeError);
  CHECK_THROWS_AS(spectral_evolve(sys, {FourierField(2)}, {0.0, 1.0}, 0.0), ParameterError);
}

TEST_CASE("blow-up raises DivergenceError") {
  SpectralSystem sys;
  sys.max_mode = 1;
  sys.eigenvalue = [](int) { return 0.0; };
  sys.nonlinearity = [](const FieldState& s) { return FieldState{pointwise({s[0]}, 2, [](const std::vector<Eigen::ArrayXd>& x) -> Eigen::ArrayXd { return x[0] * x[0]; })}; };
  FourierField u0(1);
  u0[0] = 10.0;
  CHECK_THROWS_AS(spectral_evolve(sys, {u0}, {0.0, 5.0}, 0.05), DivergenceError);
}

TEST_CASE("field arithmetic checks bands and indices") {
  FourierField a(3), b(4);
  CHECK_THROWS_AS(a += b, ShapeError);
  CHECK_THROWS_AS(a[4] = 1.0, IndexError);
  CHECK(std::as_const(a)[7] == cplx(0.0));
  CHECK_THROWS_AS(FourierField(Eigen::VectorXcd::Zero(4), true), ShapeError);
}
