#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <variant>
#include <vector>

namespace kwakim {

// Ladder generators.

struct ExplicitList {
  std::vector<double> values;
};

/// lambda_k = c * k^p, k = 1..N.
struct PowerLaw {
  double c = 1.0;
  double p = 2.0;
};

/// lambda_k = nu * ceil(k/2)^2: the nonzero Fourier modes of -nu d^2/dx^2 on a
/// 2*pi-periodic interval, each listed twice (cos and sin).
struct PeriodicLaplacian {
  double nu = 1.0;
};

using LadderGenerator = std::variant<ExplicitList, PowerLaw, PeriodicLaplacian>;

/// Nondecreasing positive eigenvalues lambda_1 <= ... <= lambda_N of a
/// self-adjoint positive operator, together with the generator that produced
/// them. Immutable after construction.
///
/// Indices in the public API follow the mathematical convention: lambda(k)
/// takes k in [1, N]. A "gap index" n refers to the pair (lambda(n),
/// lambda(n+1)).
class EigenvalueLadder {
 public:
  EigenvalueLadder(LadderGenerator generator, std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double lambda(std::size_t k) const;
  const std::vector<double>& values() const noexcept { return values_; }
  const LadderGenerator& generator() const noexcept { return generator_; }
  double max() const noexcept { return values_.back(); }
  double min() const noexcept { return values_.front(); }

 private:
  LadderGenerator generator_;
  std::vector<double> values_;
};

/// Materializes N eigenvalues from a generator. For ExplicitList, N must equal
/// the list length.
EigenvalueLadder make_ladder(const LadderGenerator& generator, std::size_t N);
EigenvalueLadder make_ladder(const ExplicitList& list);

/// Formula value of the generator at index k (1-based). Throws for ExplicitList
/// out of range.
double generator_value(const LadderGenerator& generator, std::size_t k);

/// Orthoprojector P_n (low) and its complement Q_n (high) acting on
/// coefficient vectors of length `total`.
struct SpectralProjector {
  std::size_t n = 0;
  std::size_t total = 0;
};

enum class Part { low, high };

Eigen::VectorXd project(const Eigen::VectorXd& x, const SpectralProjector& proj, Part part);

}  // namespace kwakim
