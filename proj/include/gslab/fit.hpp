#pragma once

#include <span>
#include <utility>
#include <vector>

namespace gslab {

struct FitResult {
  double intercept = 0.0;
  double exponent = 0.0;
  /// Coefficient of log log(1/x); 0 without the log term.
  double log_power = 0.0;
  double r2 = 0.0;
  /// RMS residual of log y.
  double rms_residual = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t points = 0;
  bool with_log = false;
};

/// Least squares on log y = a + b log x (+ c log log(1/x)).
/// Needs >= 4 points with positive x, y; with_log also needs x < 1.
/// Throws IllConditionedFit when max x / min x < 4.
FitResult fit_exponent(std::span<const std::pair<double, double>> points, bool with_log);

/// log y = a + b log(x log(1/x)): power law in the log-corrected variable,
/// so the log power is tied to the exponent.
FitResult fit_tied_log(std::span<const std::pair<double, double>> points);

}  // namespace gslab
