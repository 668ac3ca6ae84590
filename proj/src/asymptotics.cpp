#include "gslab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "gslab/emden_fowler.hpp"
#include "gslab/errors.hpp"
#include "gslab/functionals.hpp"
#include "gslab/quadrature.hpp"

namespace gslab {

double concentration_lambda(const RadialProfile& w, double Qstar) {
  if (!(Qstar > 0.0)) throw InvalidArgument("Qstar must be positive");
  const int N = w.dimension;
  const double ps = 2.0 * N / (N - 2.0);
  const double total = radial_norm(w, ps);
  if (!(total > Qstar))
    throw NotAsymptotic("total p*-mass " + std::to_string(total) + " does not exceed Q*; eps too large");
  double lo = 0.0, hi = w.outer_radius();
  while (ball_mass(w, ps, hi) <= Qstar) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ball_mass(w, ps, mid) < Qstar) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

RadialProfile rescale_to_v(const RadialProfile& w, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  return dilate(w, std::pow(lambda, 0.5 * (w.dimension - 2.0)), lambda);
}

namespace {

// ω ∫_0^∞ g(r) r^{N-1} dr where g is built from (v, W₁) values or slopes.
double against_w1(const RadialProfile& v, const std::function<double(double, double)>& g, bool slopes) {
  const int N = v.dimension;
  const double sqS = std::sqrt(sobolev_constant(N));
  auto w1 = [&](double r) { return slopes ? sqS * eval_U_slope(N, 1.0, sqS * r) : eval_U(N, 1.0, sqS * r); };
  const auto& t = v.grid;
  const double r0 = v.core_radius();
  double sum = 0.0;
  // Core: the difference is ~ linear (slopes) or ~ constant (values) in r.
  {
    const double d = g(slopes ? t.slopes.front() : t.values.front(), w1(r0));
    sum += slopes ? d * std::pow(r0, N) / (N + 2.0) : d * std::pow(r0, N) / N;
  }
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const auto pn = t.panel(i);
    sum += quad::gauss(
        [&](double r) { return g(slopes ? pn.slope(r) : pn.value(r), w1(r)) * std::pow(r, N - 1.0); },
        t.radii[i], t.radii[i + 1]);
  }
  const double R = v.outer_radius();
  sum += quad::exp_sinh(
      [&](double r) {
        const double a = slopes ? v.tail.slope(r) : v.tail.value(r);
        return g(a, w1(r)) * std::pow(r, N - 1.0);
      },
      R, R, 1e-12);
  return sphere_area(N) * sum;
}

}  // namespace

double dist_D1(const RadialProfile& v) {
  return std::sqrt(against_w1(
      v, [](double a, double b) { return (a - b) * (a - b); }, true));
}

double dist_Lp(const RadialProfile& v) {
  const double ps = 2.0 * v.dimension / (v.dimension - 2.0);
  return std::pow(against_w1(
                      v, [ps](double a, double b) { return std::pow(std::abs(a - b), ps); }, false),
                  1.0 / ps);
}

double dist_Linf_tail(const RadialProfile& v) {
  const int N = v.dimension;
  const double sqS = std::sqrt(sobolev_constant(N));
  double m = 0.0;
  const auto& t = v.grid;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t.radii[i] >= 1.0) m = std::max(m, std::abs(t.values[i] - eval_U(N, 1.0, sqS * t.radii[i])));
  return m;
}

ConcentrationResult concentrate(const RadialProfile& w, double Qstar) {
  ConcentrationResult c;
  c.q_star_used = Qstar;
  c.lambda_eps = concentration_lambda(w, Qstar);
  c.v_profile = rescale_to_v(w, c.lambda_eps);
  c.dist_D1 = dist_D1(c.v_profile);
  c.dist_Lp = dist_Lp(c.v_profile);
  c.dist_Linf_tail = dist_Linf_tail(c.v_profile);
  return c;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Subcritical:
      return "subcritical";
    case Regime::Critical:
      return "critical";
    case Regime::Supercritical:
      return "supercritical";
    case Regime::DeltaSupercritical:
      return "delta-supercritical";
    case Regime::PUpSubcritical:
      return "p-up-subcritical";
  }
  return "?";
}

Regime regime_from_string(std::string_view s) {
  for (auto r : {Regime::Subcritical, Regime::Critical, Regime::Supercritical, Regime::DeltaSupercritical,
                 Regime::PUpSubcritical})
    if (s == to_string(r)) return r;
  throw InvalidArgument("unknown regime '" + std::string(s) + "'");
}

PredictedExponents predict_exponents(Regime regime, int N, double p, double q) {
  if (N < 3) throw InvalidArgument("N must be >= 3");
  const double ps = 2.0 * N / (N - 2.0);
  PredictedExponents e;
  switch (regime) {
    case Regime::Subcritical:
      if (!(p > 2.0 && p < ps)) throw InvalidArgument("subcritical regime needs 2 < p < p*");
      e.amplitude = Exponent{1.0 / (p - 2.0), 0.0};
      break;
    case Regime::Critical:
      if (std::abs(p - ps) > 1e-9 * ps) throw InvalidArgument("critical regime needs p = p*");
      if (!(q > p)) throw InvalidArgument("critical regime needs q > p*");
      if (N >= 5) {
        e.amplitude = Exponent{1.0 / (q - 2.0), 0.0};
        e.lambda = Exponent{-(p - 2.0) / (2.0 * q - 4.0), 0.0};
        e.sigma = Exponent{(q - p) / (q - 2.0), 0.0, false};
      } else if (N == 4) {
        e.amplitude = Exponent{1.0 / (q - 2.0), 1.0 / (q - 2.0)};
        e.lambda = Exponent{-1.0 / (q - 2.0), -1.0 / (q - 2.0)};
        e.sigma = Exponent{(q - 4.0) / (q - 2.0), (q - 4.0) / (q - 2.0), false};
      } else {
        e.amplitude = Exponent{1.0 / (2.0 * q - 8.0), 0.0};
        e.lambda = Exponent{-1.0 / (q - 4.0), 0.0};
        e.sigma = Exponent{(q - 6.0) / (2.0 * q - 8.0), 0.0, false};
      }
      break;
    case Regime::Supercritical:
      if (!(p > ps && q > p)) throw InvalidArgument("supercritical regime needs q > p > p*");
      e.amplitude = Exponent{0.0, 0.0};
      break;
    case Regime::DeltaSupercritical:
      if (!(q > ps)) throw InvalidArgument("delta-supercritical regime needs q > p*");
      e.amplitude = Exponent{1.0 / (q - ps), 0.0, q > N * (N + 2.0) / (2.0 * (N - 2.0))};
      break;
    case Regime::PUpSubcritical:
      if (N >= 5) e.amplitude = Exponent{-(N - 2.0) / 4.0, 0.0};
      else if (N == 4) e.amplitude = Exponent{-0.5, 1.0};
      else e.amplitude = Exponent{-0.5, 0.0};
      break;
  }
  return e;
}

double GridSpec::ratio() const {
  if (points < 2) return 1.0;
  return std::pow(std::max(start, stop) / std::min(start, stop), 1.0 / static_cast<double>(points - 1));
}

std::vector<double> GridSpec::values() const {
  if (!(start > 0.0) || !(stop > 0.0)) throw InvalidArgument("grid bounds must be positive");
  if (points < 2) throw InvalidArgument("grid needs at least 2 points");
  const double hi = std::max(start, stop), lo = std::min(start, stop);
  std::vector<double> v(points);
  const double l0 = std::log(hi), l1 = std::log(lo);
  for (std::size_t i = 0; i < points; ++i)
    v[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(points - 1));
  v.front() = hi;
  v.back() = lo;
  return v;
}

const ObservableFit* ScalingReport::fit(std::string_view name) const {
  for (const auto& f : fits)
    if (f.name == name) return &f;
  return nullptr;
}

void refit(ScalingReport& rep, const FitWindow& window) {
  std::vector<const SweepPoint*> pts;
  for (const auto& pt : rep.grid) {
    if (!pt.converged) continue;
    if (!(std::abs(pt.nehari_residual) <= window.residual_max) ||
        !(std::abs(pt.pokhozhaev_residual) <= window.residual_max))
      continue;
    pts.push_back(&pt);
  }
  std::sort(pts.begin(), pts.end(), [](auto* a, auto* b) { return a->x > b->x; });
  pts.erase(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(std::min(window.drop_largest, pts.size())));
  std::erase_if(pts, [&](auto* pt) {
    return (window.x_min && pt->x < *window.x_min) || (window.x_max && pt->x > *window.x_max);
  });

  const auto pred = predict_exponents(rep.regime, rep.N, rep.p, rep.q);
  struct Obs {
    const char* name;
    double SweepPoint::*field;
    std::optional<Exponent> predicted;
  };
  std::vector<Obs> obs{{"amplitude", &SweepPoint::amplitude, pred.amplitude}};
  if (rep.regime == Regime::Critical) {
    obs.push_back({"lambda", &SweepPoint::lambda, pred.lambda});
    obs.push_back({"sigma", &SweepPoint::sigma, pred.sigma});
    obs.push_back({"dist_D1", &SweepPoint::dist_D1, std::nullopt});
  } else if (rep.regime == Regime::Supercritical) {
    obs.push_back({"amplitude_gap", &SweepPoint::amplitude_gap, std::nullopt});
    obs.push_back({"eps_L2", &SweepPoint::eps_L2, std::nullopt});
  } else if (rep.regime == Regime::Subcritical) {
    obs.push_back({"scaled_gap", &SweepPoint::scaled_gap, std::nullopt});
  } else if (rep.regime == Regime::DeltaSupercritical) {
    obs.push_back({"sigma", &SweepPoint::sigma, std::nullopt});
  }

  rep.fits.clear();
  for (const auto& o : obs) {
    ObservableFit f;
    f.name = o.name;
    f.predicted = o.predicted;
    std::vector<std::pair<double, double>> xy;
    for (auto* pt : pts) {
      const double y = pt->*(o.field);
      if (y > 0.0 && std::isfinite(y)) xy.emplace_back(pt->x, y);
    }
    try {
      f.pure = fit_exponent(xy, false);
      const bool logged = o.predicted ? o.predicted->log_power != 0.0 : rep.N == 4;
      if (logged) {
        f.with_log = fit_exponent(xy, true);
        f.tied_log = fit_tied_log(xy);
      }
    } catch (const Error& e) {
      f.error = e.what();
    }
    rep.fits.push_back(std::move(f));
  }

  const auto& amp = rep.fits.front();
  const FitResult* best = amp.with_log ? &*amp.with_log : (amp.pure ? &*amp.pure : nullptr);
  if (best) {
    rep.fitted_exponent = best->exponent;
    rep.fitted_log_power = best->log_power;
    rep.fit_r2 = best->r2;
    rep.window_min = best->x_min;
    rep.window_max = best->x_max;
  } else {
    rep.fitted_exponent = rep.fitted_log_power = rep.fit_r2 = std::nan("");
    rep.window_min = rep.window_max = std::nan("");
  }
  if (pred.amplitude) {
    rep.predicted_exponent = pred.amplitude->power;
    rep.predicted_log_power = pred.amplitude->log_power;
  }
}

}  // namespace gslab
