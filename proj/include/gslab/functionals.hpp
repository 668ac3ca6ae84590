#pragma once

#include <optional>

#include "gslab/params.hpp"
#include "gslab/profile.hpp"

namespace gslab {

/// Surface area of the unit sphere in R^N.
double sphere_area(int N);

/// ∫_{R^N} of a radial quantity split by region: [0, r0] series core,
/// stored grid panels, analytic tail.
struct IntegralBreakdown {
  double core = 0.0;
  double grid = 0.0;
  double tail = 0.0;
  double total() const { return core + grid + tail; }
};

/// ∫|u|^s dx, by region. Algebraic tails with s(N-2) <= N throw DivergenceError.
IntegralBreakdown radial_norm_breakdown(const RadialProfile& u, double s);
double radial_norm(const RadialProfile& u, double s);

/// ‖∇u‖₂², by region.
IntegralBreakdown dirichlet_breakdown(const RadialProfile& u);
double dirichlet_norm(const RadialProfile& u);

/// ∫_{B_R} |u|^s dx.
double ball_mass(const RadialProfile& u, double s, double R);

struct GroundStateSolution {
  RadialProfile profile;
  /// NaN when the integral diverges (algebraic tails in low dimension).
  double norm_L2_sq = 0.0;
  double norm_Lp_p = 0.0;
  double norm_Lq_q = 0.0;
  double dirichlet_sq = 0.0;
  double energy = 0.0;
  double level_S = 0.0;
  double nehari_residual = 0.0;
  double pokhozhaev_residual = 0.0;
};

/// Computes every functional of a profile solving its own params.
GroundStateSolution evaluate(const RadialProfile& u);

/// E = ½‖∇u‖² - ∫F(u) from the stored norms.
double energy(const GroundStateSolution& sol);

struct IdentityResiduals {
  double nehari = 0.0;
  double pokhozhaev = 0.0;
};

/// Relative residuals of ‖∇u‖² = ∫f(u)u and ‖∇u‖² = p*∫F(u).
IdentityResiduals identity_residuals(const GroundStateSolution& sol);

/// S from E = (½ - 1/p*) S^{N/2}.
double extract_level(const GroundStateSolution& sol);

/// w(y) = u(√S·y).
RadialProfile to_minimizer_frame(const RadialProfile& u, double S);

/// p*∫F(w) for a minimizer-frame profile, empty when the amplitude exceeds 1
/// (the constraint is stated for the truncated nonlinearity there).
std::optional<double> minimizer_constraint(const RadialProfile& w, const ProblemParams& params);

struct KappaReport {
  double kappa = 0.0;
  double q_norm = 0.0;        // ‖w‖_q^q
  double eps_L2 = 0.0;        // ε‖w‖₂²
  double p_norm = 0.0;        // ‖w‖_p^p
  double ratio = 0.0;         // ‖w‖_q^q / (ε‖w‖₂²)
  double residual_q = 0.0;    // relative, ‖w‖_q^q vs κε‖w‖₂²
  double residual_p = 0.0;    // relative, ‖w‖_p^p vs 1 + (κ+1)ε‖w‖₂²
};

double kappa(double p, double q);

/// Critical-case identities in the minimizer frame; requires p = p*.
KappaReport kappa_identities(const RadialProfile& w, const ProblemParams& params);

struct LimitReport {
  /// P_zero: ‖w‖_p^p and ‖w‖_q^q. R_zero: ‖w‖₂² and ‖w‖_p^p.
  double first = 0.0, first_expected = 0.0, first_residual = 0.0;
  double second = 0.0, second_expected = 0.0, second_residual = 0.0;
};

/// Closed-form norms of ε = 0 minimizers (family P_zero or R_zero).
LimitReport limit_identities(const RadialProfile& w0, const ProblemParams& params);

}  // namespace gslab
