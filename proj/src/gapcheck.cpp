#include "kwakim/gapcheck.hpp"

#include "kwakim/errors.hpp"
#include "kwakim/linop.hpp"

#include <cmath>

namespace kwakim {

std::string to_string(GapKind kind) {
  switch (kind) {
    case GapKind::self_adjoint_general: return "self_adjoint_general";
    case GapKind::self_adjoint_zero: return "self_adjoint_zero";
    case GapKind::self_adjoint_half: return "self_adjoint_half";
    case GapKind::jordan_full: return "jordan_full";
    case GapKind::jordan_truncated: return "jordan_truncated";
    case GapKind::jordan_sufficient: return "jordan_sufficient";
  }
  return "unknown";
}

GapKind gap_kind_from_string(const std::string& name) {
  for (GapKind k : {GapKind::self_adjoint_general, GapKind::self_adjoint_zero,
                    GapKind::self_adjoint_half, GapKind::jordan_full, GapKind::jordan_truncated,
                    GapKind::jordan_sufficient}) {
    if (to_string(k) == name) return k;
  }
  throw ParseError("unknown gap condition kind '" + name + "'");
}

double gap_lhs(double l0, double l1, GapConditionKind kind) {
  if (!(l0 > 0.0) || l1 < l0) throw ParameterError("gap_lhs needs 0 < lambda_n <= lambda_{n+1}");
  if (l1 == l0) return 0.0;
  const double root_gap = std::sqrt(l1) - std::sqrt(l0);
  switch (kind.kind) {
    case GapKind::self_adjoint_general: {
      if (!(kind.beta > -2.0 && kind.beta <= 0.0))
        throw ParameterError("beta must lie in (-2, 0]");
      const double e = -kind.beta / 2.0;
      return (l1 - l0) / (std::pow(l0, e) + std::pow(l1, e));
    }
    case GapKind::self_adjoint_zero: return (l1 - l0) / 2.0;
    case GapKind::self_adjoint_half: return root_gap;
    case GapKind::jordan_full: {
      const double gap = l1 - l0;
      return gap * gap / (l1 + l0 + 2.0 * gap_radical(l0, l1));
    }
    case GapKind::jordan_truncated: return root_gap * root_gap;
    case GapKind::jordan_sufficient: return root_gap * root_gap / 3.0;
  }
  return 0.0;
}

double gap_lhs(const EigenvalueLadder& ladder, std::size_t n, GapConditionKind kind) {
  if (n < 1 || n >= ladder.size())
    throw IndexError("gap index n = " + std::to_string(n) + " outside [1, " +
                     std::to_string(ladder.size() - 1) + "]");
  return gap_lhs(ladder.lambda(n), ladder.lambda(n + 1), kind);
}

SpectralGapReport gap_report(const EigenvalueLadder& ladder, std::size_t n, double L,
                             GapConditionKind kind) {
  SpectralGapReport r;
  r.n = n;
  r.kind = kind;
  r.L = L;
  r.lhs = gap_lhs(ladder, n, kind);
  r.satisfied = r.lhs > L;
  const double l0 = ladder.lambda(n);
  const double l1 = ladder.lambda(n + 1);
  if (l0 < l1) {
    switch (kind.kind) {
      case GapKind::jordan_full:
      case GapKind::jordan_sufficient: r.theta_star = optimal_theta_full(l0, l1).theta; break;
      case GapKind::jordan_truncated: r.theta_star = optimal_theta_truncated(l0, l1).theta; break;
      default: break;
    }
  }
  return r;
}

std::vector<std::size_t> find_admissible_n(const EigenvalueLadder& ladder, double L,
                                           GapConditionKind kind) {
  std::vector<std::size_t> out;
  for (std::size_t n = 1; n < ladder.size(); ++n)
    if (gap_lhs(ladder, n, kind) > L) out.push_back(n);
  return out;
}

GapBounds gap_equivalence_bounds(double l0, double l1) {
  if (!(l0 > 0.0) || l1 < l0) throw ParameterError("bounds need 0 < lambda_n <= lambda_{n+1}");
  const double s = std::sqrt(l0) + std::sqrt(l1);
  return {s * s, l0 + l1 + 2.0 * gap_radical(l0, l1), 3.0 * s * s};
}

}  // namespace kwakim
