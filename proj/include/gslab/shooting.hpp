#pragma once

#include <optional>
#include <string_view>
#include <utility>

#include "gslab/ode.hpp"
#include "gslab/params.hpp"
#include "gslab/profile.hpp"

namespace gslab {

enum class Shot { Overshoot, Undershoot, Converged };

std::string_view to_string(Shot s);

struct ShootControls {
  /// Relative bracket width at which bisection stops.
  double amp_tol = 1e-14;
  std::size_t max_iterations = 200;
  /// Terminal value below converge_rel·a counts as decayed.
  double converge_rel = 1e-8;
  /// Divergence between the bracketing trajectories that ends the trusted
  /// part of the grid, relative to u.
  double reliable_rel = 1e-6;
  StepControls step{1e-10, 1e-14};
  /// Overrides the family default r_max.
  std::optional<double> r_max;
  /// Overrides the automatic (undershoot, overshoot) bracket.
  std::optional<std::pair<double, double>> amp_search_range;
  std::size_t max_bracket_steps = 60;
  /// Largest accepted relative slope jump between grid and tail model at the
  /// hand-off radius.
  double max_tail_mismatch = 1e-3;
};

/// Classification of a single shot. Undecided far-field trajectories are
/// resolved by the sign of the growing linear mode at the last point.
Shot classify(const Trajectory& t, const ProblemParams& params, double converge_rel = 1e-8);

/// Which side of the ground-state amplitude a trajectory lies on, judged
/// by the growing far-field mode at its last point. Never returns Converged.
Shot lean(const Trajectory& t, const ProblemParams& params);

/// Default outer radius for amplitude a.
double default_r_max(const ProblemParams& params, double a);

RadialProfile find_ground_state(const ProblemParams& params, const ShootControls& ctrl = {});

}  // namespace gslab
