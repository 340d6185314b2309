#include "kwakim/nonlinearities.hpp"

#include "kwakim/errors.hpp"

#include <cmath>
#include <random>

namespace kwakim {

namespace {

Eigen::MatrixXd gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = g(rng);
  return m;
}

void check_L(double L) {
  if (!(L >= 0.0) || !std::isfinite(L)) throw ParameterError("Lipschitz constant must be finite and non-negative");
}

}  // namespace

Eigen::MatrixXd seeded_orthogonal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(n, n, rng));
  Eigen::MatrixXd q = qr.householderQ();
  for (Eigen::Index j = 0; j < q.cols(); ++j)
    if (qr.matrixQR()(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

NonlinearitySpec saturating_general(std::size_t modes, std::size_t components, double L, std::uint64_t seed) {
  check_L(L);
  const Eigen::MatrixXd Q = seeded_orthogonal(modes * components, seed);
  return NonlinearitySpec::make_general(L, [Q, L, modes, components](const StateVector& xi) {
    const Eigen::Map<const Eigen::VectorXd> flat(xi.coeffs().data(), xi.coeffs().size());
    Eigen::MatrixXd out(modes, components);
    Eigen::Map<Eigen::VectorXd>(out.data(), out.size()) = L * (Q * flat.array().tanh().matrix());
    return StateVector(std::move(out));
  });
}

NonlinearitySpec saturating_lower_triangular(std::size_t modes, double L, std::uint64_t seed) {
  check_L(L);
  const Eigen::MatrixXd Q = seeded_orthogonal(modes, seed);
  return NonlinearitySpec::make_lower_triangular(
      L, [Q, L](const Eigen::VectorXd& u) -> Eigen::VectorXd { return L * (Q * u.array().tanh().matrix()); });
}

NonlinearitySpec random_linear(std::size_t modes, std::size_t components, double L, std::uint64_t seed) {
  check_L(L);
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd B = gaussian(modes * components, modes * components, rng);
  B /= B.jacobiSvd().singularValues()(0);
  return NonlinearitySpec::make_general(L, [B, L, modes, components](const StateVector& xi) {
    const Eigen::Map<const Eigen::VectorXd> flat(xi.coeffs().data(), xi.coeffs().size());
    Eigen::MatrixXd out(modes, components);
    Eigen::Map<Eigen::VectorXd>(out.data(), out.size()) = L * (B * flat);
    return StateVector(std::move(out));
  });
}

std::vector<NamedMap> lipschitz_family(std::size_t modes, double L, std::uint64_t seed) {
  check_L(L);
  using V = Eigen::VectorXd;
  const Eigen::MatrixXd Q1 = seeded_orthogonal(modes, seed);
  const Eigen::MatrixXd Q2 = seeded_orthogonal(modes, seed + 1);
  return {
      {"tanh", [L](const V& u) -> V { return L * u.array().tanh().matrix(); }},
      {"orthogonal", [L, Q1](const V& u) -> V { return L * (Q1 * u); }},
      {"sin", [L](const V& u) -> V { return L * u.array().sin().matrix(); }},
      {"radial", [L](const V& u) -> V { return (L / (1.0 + u.norm())) * u; }},
      {"rotated_tanh", [L, Q2](const V& u) -> V { return L * (Q2 * u.array().tanh().matrix()); }},
  };
}

}  // namespace kwakim
