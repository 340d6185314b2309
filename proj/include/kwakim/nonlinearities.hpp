#pragma once

#include "kwakim/dynamics.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace kwakim {

/// Seeded random orthogonal matrix (QR of a Gaussian matrix, signs fixed so
/// R has a positive diagonal).
Eigen::MatrixXd seeded_orthogonal(std::size_t n, std::uint64_t seed);

/// xi -> L Q tanh(xi) on the flattened state, Q orthogonal of size modes *
/// components. Mixes every mode and component; Lipschitz constant exactly L.
NonlinearitySpec saturating_general(std::size_t modes, std::size_t components, double L, std::uint64_t seed);

/// u -> L Q tanh(u) with Q orthogonal of size modes, for the lower-triangular form.
NonlinearitySpec saturating_lower_triangular(std::size_t modes, double L, std::uint64_t seed);

/// Linear map xi -> L B xi with B a seeded matrix of spectral norm one.
NonlinearitySpec random_linear(std::size_t modes, std::size_t components, double L, std::uint64_t seed);

struct NamedMap {
  std::string name;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> map;
};

/// Five maps on R^modes with Lipschitz constant L: L tanh(u), L Q u,
/// L sin(u), L u / (1 + |u|) and L Q tanh(u), Q seeded orthogonal.
std::vector<NamedMap> lipschitz_family(std::size_t modes, double L, std::uint64_t seed);

}  // namespace kwakim
