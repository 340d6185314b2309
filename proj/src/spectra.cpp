#include "kwakim/spectra.hpp"

#include "kwakim/errors.hpp"

#include <cmath>
#include <string>
#include <type_traits>

namespace kwakim {

namespace {

void validate_values(const std::vector<double>& values) {
  if (values.size() < 2) throw SizeError("ladder needs at least 2 eigenvalues");
  if (!(values.front() > 0.0) || !std::isfinite(values.front()))
    throw ParameterError("ladder eigenvalues must be strictly positive");
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (!std::isfinite(values[k]) || values[k] < values[k - 1])
      throw ParameterError("ladder eigenvalues must be finite and nondecreasing (index " +
                           std::to_string(k + 1) + ")");
  }
}

}  // namespace

EigenvalueLadder::EigenvalueLadder(LadderGenerator generator, std::vector<double> values)
    : generator_(std::move(generator)), values_(std::move(values)) {
  validate_values(values_);
}

double EigenvalueLadder::lambda(std::size_t k) const {
  if (k < 1 || k > values_.size())
    throw IndexError("eigenvalue index " + std::to_string(k) + " outside [1, " +
                     std::to_string(values_.size()) + "]");
  return values_[k - 1];
}

double generator_value(const LadderGenerator& generator, std::size_t k) {
  if (k < 1) throw IndexError("generator index is 1-based");
  return std::visit(
      [k](const auto& g) -> double {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, ExplicitList>) {
          if (k > g.values.size()) throw IndexError("explicit list index out of range");
          return g.values[k - 1];
        } else if constexpr (std::is_same_v<G, PowerLaw>) {
          return g.c * std::pow(static_cast<double>(k), g.p);
        } else {
          const double m = static_cast<double>((k + 1) / 2);
          return g.nu * m * m;
        }
      },
      generator);
}

EigenvalueLadder make_ladder(const LadderGenerator& generator, std::size_t N) {
  if (N < 2) throw SizeError("ladder size N must be at least 2");
  std::visit(
      [N](const auto& g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, ExplicitList>) {
          if (g.values.size() != N)
            throw SizeError("explicit list has " + std::to_string(g.values.size()) +
                            " entries, N = " + std::to_string(N));
        } else if constexpr (std::is_same_v<G, PowerLaw>) {
          if (!(g.c > 0.0) || !(g.p > 0.0))
            throw ParameterError("power-law ladder needs c > 0 and p > 0");
        } else {
          if (!(g.nu > 0.0)) throw ParameterError("periodic Laplacian ladder needs nu > 0");
        }
      },
      generator);

  std::vector<double> values(N);
  for (std::size_t k = 1; k <= N; ++k) values[k - 1] = generator_value(generator, k);
  return EigenvalueLadder(generator, std::move(values));
}

EigenvalueLadder make_ladder(const ExplicitList& list) {
  return make_ladder(LadderGenerator{list}, list.values.size());
}

Eigen::VectorXd project(const Eigen::VectorXd& x, const SpectralProjector& proj, Part part) {
  if (static_cast<std::size_t>(x.size()) != proj.total)
    throw ShapeError("projector expects length " + std::to_string(proj.total) + ", got " +
                     std::to_string(x.size()));
  if (proj.n > proj.total) throw IndexError("projector rank exceeds vector length");
  Eigen::VectorXd out = x;
  const auto n = static_cast<Eigen::Index>(proj.n);
  if (part == Part::low)
    out.tail(x.size() - n).setZero();
  else
    out.head(n).setZero();
  return out;
}

}  // namespace kwakim
