#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gslab/fit.hpp"
#include "gslab/profile.hpp"
#include "gslab/shooting.hpp"

namespace gslab {

struct ConcentrationResult {
  double lambda_eps = 0.0;
  double q_star_used = 0.0;
  RadialProfile v_profile;
  double dist_D1 = 0.0;
  double dist_Lp = 0.0;
  double dist_Linf_tail = 0.0;
};

/// The λ with ∫_{B_λ}|w|^{p*} = Qstar. Throws NotAsymptotic when the total
/// mass does not exceed Qstar.
double concentration_lambda(const RadialProfile& w, double Qstar);

/// v(x) = λ^{(N-2)/2} w(λx).
RadialProfile rescale_to_v(const RadialProfile& w, double lambda);

/// ‖∇(v - W₁)‖₂, ‖v - W₁‖_{p*}, and sup_{r>=1} |v - W₁| on the grid.
double dist_D1(const RadialProfile& v);
double dist_Lp(const RadialProfile& v);
double dist_Linf_tail(const RadialProfile& v);

ConcentrationResult concentrate(const RadialProfile& w, double Qstar);

enum class Regime { Subcritical, Critical, Supercritical, DeltaSupercritical, PUpSubcritical };

std::string_view to_string(Regime r);
Regime regime_from_string(std::string_view s);

struct Exponent {
  double power = 0.0;
  double log_power = 0.0;
  /// False where the paper gives no two-sided law (upper bounds, or the
  /// small-q δ-family); such fits are recorded but not asserted.
  bool asserted = true;
};

struct PredictedExponents {
  std::optional<Exponent> amplitude;
  std::optional<Exponent> lambda;
  std::optional<Exponent> sigma;
};

/// Paper exponents in the sweep variable (ε, or δ for the δ-regimes).
PredictedExponents predict_exponents(Regime regime, int N, double p, double q);

/// Geometric grid from `start` to `stop` (either order) with `points` values,
/// returned in decreasing order.
struct GridSpec {
  double start = 1e-2;
  double stop = 1e-5;
  std::size_t points = 11;
  double ratio() const;
  std::vector<double> values() const;
};

struct FitWindow {
  std::size_t drop_largest = 2;
  double residual_max = 1e-5;
  std::optional<double> x_min;
  std::optional<double> x_max;
};

struct SweepSpec {
  Regime regime = Regime::Critical;
  int N = 5;
  /// Ignored for Critical (p = p*) and the δ-regimes (p = p* ± δ).
  double p = 4.0;
  double q = 6.0;
  GridSpec grid;
  ShootControls shoot;
  FitWindow window;
};

struct SweepPoint {
  /// ε, or δ for the δ-regimes.
  double x = 0.0;
  bool converged = false;
  std::string error;
  double amplitude = 0.0;
  double S = 0.0;
  double sigma = 0.0;
  double lambda = 0.0;
  double dist_D1 = 0.0;
  double dist_Lp = 0.0;
  double v_q_norm = 0.0;
  double v_L2_sq = 0.0;
  double kappa_residual = 0.0;
  double important_residual = 0.0;
  double nehari_residual = 0.0;
  double pokhozhaev_residual = 0.0;
  /// ε‖u‖₂².
  double eps_L2 = 0.0;
  /// |u(0) - u₀(0)| (supercritical).
  double amplitude_gap = 0.0;
  /// ε^{-1/(p-2)} u(0) and its relative gap to v₀(0) (subcritical).
  double scaled_amplitude = 0.0;
  double scaled_gap = 0.0;
  std::size_t integrations = 0;
  std::size_t iterations = 0;
};

struct ObservableFit {
  std::string name;
  std::optional<Exponent> predicted;
  std::optional<FitResult> pure;
  std::optional<FitResult> with_log;
  /// log y against log(x log 1/x), N = 4 only.
  std::optional<FitResult> tied_log;
  std::string error;
};

struct ScalingReport {
  Regime regime = Regime::Critical;
  int N = 3;
  double p = 0.0;
  double q = 0.0;
  std::vector<SweepPoint> grid;
  /// u₀(0), v₀(0), or U₁-based S* depending on regime; NaN when unused.
  double reference_amplitude = 0.0;
  double reference_level = 0.0;
  std::vector<ObservableFit> fits;
  /// Amplitude fit summary (log-corrected where the prediction has a log).
  double fitted_exponent = 0.0;
  double fitted_log_power = 0.0;
  double predicted_exponent = 0.0;
  double predicted_log_power = 0.0;
  double fit_r2 = 0.0;
  double window_min = 0.0;
  double window_max = 0.0;

  const ObservableFit* fit(std::string_view name) const;
};

/// One grid point; exposed for tests. `reference` is u₀(0) / v₀(0) where
/// the regime needs it.
SweepPoint sweep_point(const SweepSpec& spec, double x, double reference);

/// OpenMP sweep over the grid; `jobs` <= 0 uses the runtime default.
ScalingReport sweep(const SweepSpec& spec, int jobs = 0);

/// Serial reference implementation; results are bitwise identical to sweep().
ScalingReport sweep_serial(const SweepSpec& spec);

/// Re-fit an existing report (e.g. loaded from disk) with a new window.
void refit(ScalingReport& report, const FitWindow& window);

}  // namespace gslab
