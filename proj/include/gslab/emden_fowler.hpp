#pragma once

#include "gslab/profile.hpp"

namespace gslab {

/// U_λ(r) = λ^{-(N-2)/2} U₁(r/λ), U₁(r) = (1 + r²/(N(N-2)))^{-(N-2)/2}.
double eval_U(int N, double lambda, double r);
double eval_U_slope(int N, double lambda, double r);
double eval_U_curvature(int N, double lambda, double r);

/// W_λ(r) = U_λ(√S*·r).
double eval_W(int N, double lambda, double r);

struct EmdenFowlerProfile {
  enum class Frame { U, W };

  int N = 3;
  double lambda = 1.0;
  Frame frame = Frame::U;

  double value(double r) const;
  double slope(double r) const;
  double curvature(double r) const;
  /// u'' + (N-1)/r u' + u^{p*-1}, zero for the exact profile.
  double ode_residual(double r) const;

  /// Tabulated copy on a geometric grid with exact values, slopes and
  /// curvatures and an algebraic tail, for the generic profile functionals.
  RadialProfile to_profile(double grid_ratio = 1.02, double outer_scale = 1e5) const;
};

/// S* = ‖∇U₁‖₂^{4/N} = ‖U₁‖_{p*}^{2p*/N}, both by θ-substitution quadrature;
/// throws InconsistentSolution if the two routes differ by more than 1e-6.
double sobolev_constant(int N);

struct SobolevRoutes {
  double from_dirichlet = 0.0;
  double from_norm = 0.0;
};
SobolevRoutes sobolev_routes(int N);

/// ∫_{B_R} U₁^{p*} dx and its exterior complement, by quadrature.
double u1_ball_mass(int N, double R);
double u1_exterior_mass(int N, double R);

/// Q* = ∫_{B₁} W₁^{p*}.
double q_star(int N);
/// Q₀(λ) = ∫_{B₁} W_λ^{p*}.
double q0(int N, double lambda);

/// ‖U_λ‖_s^s and ‖W_λ‖_s^s by quadrature; DivergenceError when s(N-2) <= N.
double u_norm(int N, double lambda, double s);
double w_norm(int N, double lambda, double s);

}  // namespace gslab
