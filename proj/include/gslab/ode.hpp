#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "gslab/errors.hpp"
#include "gslab/params.hpp"
#include "gslab/quadrature.hpp"

namespace gslab {

/// Why an outward integration stopped.
///
/// DecayOvershoot and SlowDecay only fire for the algebraically decaying
/// P_zero family, where undershooting solutions never rebound: the former
/// means -r u'/u > N-2 (a zero crossing is then unavoidable), the latter
/// means the Pokhozhaev function went negative in the region where it can
/// only decrease (the solution must decay like r^{-2/(p-2)}).
enum class TerminalEvent {
  ZeroCrossing,
  SlopeSignFlip,
  ReachedRmax,
  Underflow,
  DecayOvershoot,
  SlowDecay,
};

std::string_view to_string(TerminalEvent e);

struct StepControls {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double min_step = 1e-14;
  double event_tol = 1e-10;
  /// Underflow floor relative to the amplitude.
  double underflow_rel = 1e-14;
  std::size_t max_steps = 2'000'000;
};

/// Accepted integration points, origin excluded. Curvatures hold u'' from
/// the equation itself so that consecutive points define a quintic Hermite
/// panel.
struct Trajectory {
  int dimension = 3;
  double amplitude = 0.0;
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<double> slopes;
  std::vector<double> curvatures;
  TerminalEvent terminal_event = TerminalEvent::ReachedRmax;
  double terminal_radius = 0.0;
  std::size_t rhs_evaluations = 0;

  std::size_t size() const { return radii.size(); }
  quad::HermitePanel panel(std::size_t i) const;
  /// Interpolated (u, u') at r within [radii.front(), radii.back()].
  std::pair<double, double> at(double r) const;
  /// Keep points with radius <= r_cut (plus an interpolated endpoint).
  Trajectory truncated(double r_cut) const;
};

class IntegrationFailure : public Error {
 public:
  IntegrationFailure(const std::string& what, Trajectory partial)
      : Error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  Trajectory partial_;
};

/// u'' of the selected radial equation at (r, u, u').
double rhs_eval(const ProblemParams& params, double r, double u, double du);

/// Hand-off radius used by integrate for amplitude a.
double series_radius(const ProblemParams& params, double a);

/// Taylor start at r0: u = a - f(a) r0²/(2N) + f(a) f'(a) r0⁴/(8N(N+2)).
std::pair<double, double> series_start(const ProblemParams& params, double a, double r0);

/// Integrate outward from the series hand-off until the first terminal event.
Trajectory integrate(const ProblemParams& params, double a, double r_max,
                     const StepControls& tol = {});

}  // namespace gslab
