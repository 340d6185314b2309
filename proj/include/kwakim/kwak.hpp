#pragma once

#include "kwakim/dynamics.hpp"
#include "kwakim/fourier.hpp"
#include "kwakim/polynomial.hpp"
#include "kwakim/spectra.hpp"

#include <cstdint>
#include <functional>

namespace kwakim {

/// Smooth real field with random coefficients c_k ~ amplitude * g / |k|^4 for
/// 1 <= |k| <= active, zero elsewhere (including the mean).
FourierField random_smooth_field(int max_mode, int active, double amplitude, std::uint64_t seed);

// ---- viscous Burgers: u_t = nu u_xx + (u^2)_x - f(u) ----

struct BurgersKwakState {
  FourierField u;
  FourierField v;  // u_x
  FourierField w;  // u^2 / nu
  double nu = 1.0;
  Polynomial f;

  FieldState components() const { return {u, v, w}; }
};

/// f must not depend on ux.
FieldTrajectory burgers_evolve(const FourierField& u0, double nu, const Polynomial& f, TimeSpan span, double dt,
                               int record_every = 1);

BurgersKwakState burgers_kwak_transform(const FourierField& u, double nu, const Polynomial& f);

/// max of ||v - u_x|| and ||w - u^2/nu|| (dealiased product, truncated band).
double burgers_consistency_defect(const BurgersKwakState& s);

/// The transformed system: per mode nu k^2 [[1,0,0],[0,1,1],[0,0,1]] with
/// nonlinearity (2uv - f(u), -f'(u) v, 2 u (2uv - f(u)) / nu - 2 v^2).
SpectralSystem burgers_transformed_system(int max_mode, double nu, const Polynomial& f);
FieldTrajectory burgers_system_evolve(const BurgersKwakState& state0, TimeSpan span, double dt,
                                      int record_every = 1);

// ---- scalar reaction-diffusion-advection: u_t + (1 - d_xx) u = f(u, u_x) ----

struct RdaKwakState {
  FourierField u;
  FourierField v;  // (d_xx - 1)^{-1} f(u, u_x)
  Polynomial f;

  FieldState components() const { return {u, v}; }
};

/// 1 + k^2.
double rda_eigenvalue(int k);
/// The ladder 1 + k^2 for k = 1..N, each eigenvalue listed once.
EigenvalueLadder rda_ladder(std::size_t N);

FieldTrajectory rda_evolve(const FourierField& u0, const Polynomial& f, TimeSpan span, double dt,
                           int record_every = 1);

/// (d_xx - 1)^{-1} f(u, u_x).
FourierField rda_auxiliary(const FourierField& u, const Polynomial& f);
RdaKwakState rda_kwak_transform(const FourierField& u, const Polynomial& f);
double rda_consistency_defect(const RdaKwakState& s);

/// F(u) = (d_xx - 1)^{-1} [ f_u f + f_p (f_u u_x + f_p u_xx) - f_u u - f_p u_x + f
///                          - f_uu u_x^2 - 2 f_up u_x u_xx - f_pp u_xx^2 ]
/// with p standing for u_x, so that v = (d_xx - 1)^{-1} f satisfies
/// v_t + (1 - d_xx) v = F(u) along solutions.
FourierField rda_nonlinearity_F(const FourierField& u, const Polynomial& f);

/// Per mode (1 + k^2) [[1,1],[0,1]] with nonlinearity (0, F(u)).
SpectralSystem rda_jordan_system(int max_mode, const Polynomial& f);
FieldTrajectory rda_jordan_evolve(const RdaKwakState& state0, TimeSpan span, double dt, int record_every = 1);

/// Evolves the direct equation with step dt and returns the largest relative
/// norm of the centered difference residual
///   (v(t+dt) - v(t-dt)) / (2 dt) + (1 - d_xx) v(t) - F(u(t))
/// over interior grid points, v = rda_auxiliary(u).
double rda_chain_rule_residual(const FourierField& u0, const Polynomial& f, double T, double dt);

// ---- commuting diagrams ----

struct CommutingReport {
  double error = 0.0;      // relative difference of the two routes at T
  double reference = 0.0;  // norm of transform(evolve(u0))
  int max_mode = 0;
  double dt = 0.0;
  double T = 0.0;
};

/// transform(evolve(u0)) versus evolve_transformed(transform(u0)) at T, as a
/// relative norm over every component.
CommutingReport burgers_commuting_error(const FourierField& u0, double nu, const Polynomial& f, double T, double dt);
CommutingReport rda_commuting_error(const FourierField& u0, const Polynomial& f, double T, double dt);

// ---- self-adjoint re-embedding of a two-component Jordan system ----

/// (u, v) -> (A^{-1/2} u, v). Requires m = 2 and a positive ladder.
StateVector self_adjoint_reembedding(const StateVector& state, const EigenvalueLadder& ladder);
StateVector inverse_reembedding(const StateVector& state, const EigenvalueLadder& ladder);

/// Conjugating lambda [[1,1],[0,1]] by diag(lambda^{-1/2}, 1) gives
/// lambda I + [[0, sqrt(lambda)], [0, 0]]; the off-diagonal part is what the
/// re-embedded nonlinearity absorbs as -A^{1/2} v. Returns the largest entry
/// deviation from that form over the ladder.
double reembedding_linear_defect(const EigenvalueLadder& ladder);

using ModeMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// (u~, v) -> (-A^{1/2} v, F(A^{1/2} u~)).
StateVector reembedded_nonlinearity(const StateVector& state, const EigenvalueLadder& ladder, const ModeMap& F);

/// (L ||u||^2 + ||v||^2)^{1/2}.
double weighted_norm_HL(const StateVector& state, double L);

struct LipschitzSample {
  double measured_F = 0.0;  // sampled Lipschitz constant of F itself
  double max_ratio = 0.0;   // sup of ||dF||_{H_L} / ||A^{1/2} d xi||_{H_L}
  double bound = 0.0;       // sqrt(L)
  std::size_t pairs = 0;
};

/// Random pairs with coefficients scaled by lambda^{-1/2} so that both sides
/// stay of unit order.
LipschitzSample reembedded_lipschitz_ratio(const EigenvalueLadder& ladder, const ModeMap& F, double L,
                                           std::size_t pairs, std::uint64_t seed);

}  // namespace kwakim
