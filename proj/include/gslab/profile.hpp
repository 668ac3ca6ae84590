#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "gslab/ode.hpp"
#include "gslab/params.hpp"

namespace gslab {

/// Far-field model of a profile beyond the last stored grid point.
///
/// Exponential: u = A r^{-ν} K_ν(k r) with ν = N/2 - 1, the decaying
/// solution of the linearized equation. For large r this behaves like
/// C r^{-(N-1)/2} e^{-k r} with C = A sqrt(π/(2k)), which is what
/// `prefactor` reports.
/// Algebraic: u = C r^{-(N-2)}.
struct TailModel {
  enum class Kind { Exponential, Algebraic };

  Kind kind = Kind::Exponential;
  int dimension = 3;
  /// Decay rate k (Exponential) or power N-2 (Algebraic).
  double rate_or_power = 1.0;
  /// A for Exponential, C for Algebraic.
  double coefficient = 0.0;
  double prefactor = 0.0;
  double match_radius = 0.0;
  double match_value = 0.0;

  double value(double r) const;
  double slope(double r) const;

  static TailModel exponential(int N, double k, double r_match, double u_match);
  static TailModel algebraic(int N, double r_match, double u_match);
};

std::string_view to_string(TailModel::Kind k);

struct SolveDiagnostics {
  std::size_t iterations = 0;
  std::size_t integrations = 0;
  std::size_t rhs_evaluations = 0;
  bool iteration_cap_hit = false;
  double r_max = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double reliable_radius = 0.0;
  /// Relative slope mismatch between grid and tail at the match radius.
  double tail_slope_mismatch = 0.0;
  /// Relative value mismatch between the trusted grid and the tail at twice
  /// the match radius, capped at the reliable radius.
  double tail_residual_2x = 0.0;
};

/// A radial function on [0, ∞): stored grid on [r0, R], series-like core on
/// [0, r0), tail model on (R, ∞).
struct RadialProfile {
  int dimension = 3;
  double amplitude = 0.0;
  Trajectory grid;
  TailModel tail;
  /// Equation the profile solves in its own variables; empty for
  /// closed-form profiles and for rescaled frames.
  std::optional<ProblemParams> params;
  SolveDiagnostics diagnostics;

  double value(double r) const;
  double slope(double r) const;
  double core_radius() const { return grid.radii.front(); }
  double outer_radius() const { return grid.radii.back(); }
};

/// u_new(r) = alpha · u(beta · r), applied exactly to grid and tail.
RadialProfile dilate(const RadialProfile& u, double alpha, double beta);

}  // namespace gslab
