#pragma once

#include "kwakim/spectra.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace kwakim {

/// Which spectral gap condition to evaluate. Every condition is normalized to
/// the form "lhs > L":
///   self_adjoint_general(beta): (l1 - l0) / (l0^{-beta/2} + l1^{-beta/2}), beta in (-2, 0]
///   self_adjoint_zero:          (l1 - l0) / 2
///   self_adjoint_half:          sqrt(l1) - sqrt(l0)
///   jordan_full:                (l1 - l0)^2 / (l1 + l0 + 2 sqrt(l1^2 - l0 l1 + l0^2))
///   jordan_truncated:           (sqrt(l1) - sqrt(l0))^2      (condition on sqrt(L), squared)
///   jordan_sufficient:          (sqrt(l1) - sqrt(l0))^2 / 3
enum class GapKind {
  self_adjoint_general,
  self_adjoint_zero,
  self_adjoint_half,
  jordan_full,
  jordan_truncated,
  jordan_sufficient,
};

struct GapConditionKind {
  GapKind kind = GapKind::jordan_full;
  double beta = 0.0;  // only read for self_adjoint_general
};

std::string to_string(GapKind kind);
GapKind gap_kind_from_string(const std::string& name);

struct SpectralGapReport {
  std::size_t n = 0;
  double lhs = 0.0;
  double L = 0.0;
  bool satisfied = false;
  GapConditionKind kind;
  std::optional<double> theta_star;  // optimal weight, jordan kinds with a strict gap
};

double gap_lhs(const EigenvalueLadder& ladder, std::size_t n, GapConditionKind kind);

/// lhs as a function of the eigenvalue pair only.
double gap_lhs(double lambda_n, double lambda_np1, GapConditionKind kind);

SpectralGapReport gap_report(const EigenvalueLadder& ladder, std::size_t n, double L,
                             GapConditionKind kind);

/// All n in [1, N-1] with gap_lhs(n) > L, ascending.
std::vector<std::size_t> find_admissible_n(const EigenvalueLadder& ladder, double L,
                                           GapConditionKind kind);

struct GapBounds {
  double lower = 0.0;   // (sqrt(l0) + sqrt(l1))^2
  double middle = 0.0;  // l0 + l1 + 2 sqrt(l0^2 + l1^2 - l0 l1)
  double upper = 0.0;   // 3 (sqrt(l0) + sqrt(l1))^2
};

GapBounds gap_equivalence_bounds(double lambda_n, double lambda_np1);

}  // namespace kwakim
