#include "gslab/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gslab/bessel.hpp"

namespace gslab {

std::string_view to_string(Shot s) {
  switch (s) {
    case Shot::Overshoot:
      return "Overshoot";
    case Shot::Undershoot:
      return "Undershoot";
    case Shot::Converged:
      return "Converged";
  }
  return "?";
}

Shot lean(const Trajectory& t, const ProblemParams& params) {
  const double r = t.radii.back();
  const double u = t.values.back();
  const double du = t.slopes.back();
  const int N = params.N;
  if (params.algebraic_far_field()) {
    // u = A r^{2-N} + B
    const double B = u + r * du / (N - 2.0);
    return B < 0.0 ? Shot::Overshoot : Shot::Undershoot;
  }
  // u = A r^{-ν}K_ν(kr) + B r^{-ν}I_ν(kr); sign(B) = sign(u' + k u K_{ν+1}/K_ν)
  const double k = params.decay_rate();
  const double nu = 0.5 * N - 1.0;
  const double rho = bessel::k_scaled(nu + 1.0, k * r) / bessel::k_scaled(nu, k * r);
  return du + k * u * rho < 0.0 ? Shot::Overshoot : Shot::Undershoot;
}

Shot classify(const Trajectory& t, const ProblemParams& params, double converge_rel) {
  switch (t.terminal_event) {
    case TerminalEvent::ZeroCrossing:
    case TerminalEvent::DecayOvershoot:
      return Shot::Overshoot;
    case TerminalEvent::SlopeSignFlip:
    case TerminalEvent::SlowDecay:
      return Shot::Undershoot;
    case TerminalEvent::Underflow:
      return Shot::Converged;
    case TerminalEvent::ReachedRmax:
      break;
  }
  const double r = t.radii.back();
  const double u = t.values.back();
  const double du = t.slopes.back();
  if (u < converge_rel * t.amplitude) return Shot::Converged;
  if (params.algebraic_far_field() && u > 0.0) {
    const double gamma = -r * du / u;
    if (std::abs(gamma - (params.N - 2.0)) < 1e-3) return Shot::Converged;
  }
  return lean(t, params);
}

double default_r_max(const ProblemParams& params, double a) {
  const Nonlinearity nl(params);
  const double fa = std::abs(nl.f(a));
  const double scale = fa > 0.0 ? std::sqrt(a / fa) : 1.0;
  if (params.algebraic_far_field()) return std::min(1e6, 1e4 * scale);
  return std::max(50.0 / params.decay_rate(), 100.0 * scale);
}

namespace {

struct Prober {
  const ProblemParams& params;
  const ShootControls& ctrl;
  SolveDiagnostics& diag;

  Trajectory run(double a) const {
    double r_max = ctrl.r_max ? *ctrl.r_max : default_r_max(params, a);
    Trajectory t;
    for (int grow = 0;; ++grow) {
      t = integrate(params, a, r_max, ctrl.step);
      ++diag.integrations;
      diag.rhs_evaluations += t.rhs_evaluations;
      diag.r_max = std::max(diag.r_max, r_max);
      // Still deep in the nonlinear region at r_max: the far-field lean
      // would be meaningless, so look further out.
      const bool stuck = t.terminal_event == TerminalEvent::ReachedRmax &&
                         !params.algebraic_far_field() && t.values.back() > 1e-3 * a;
      if (!stuck || grow == 4 || ctrl.r_max) break;
      r_max *= 4.0;
    }
    return t;
  }

  Shot side(const Trajectory& t) const {
    const Shot s = classify(t, params, ctrl.converge_rel);
    return s == Shot::Converged ? lean(t, params) : s;
  }
};

}  // namespace

RadialProfile find_ground_state(const ProblemParams& params, const ShootControls& ctrl) {
  params.validate();
  if (!(ctrl.amp_tol > 0.0)) throw InvalidArgument("amp_tol must be positive");

  SolveDiagnostics diag;
  const Prober probe{params, ctrl, diag};
  const auto eq = equilibria(params);

  double lo = 0.0, hi = 0.0;
  Trajectory t_lo, t_hi;
  auto try_lo = [&](double a) {
    auto t = probe.run(a);
    if (probe.side(t) != Shot::Undershoot) return false;
    lo = a;
    t_lo = std::move(t);
    return true;
  };
  auto try_hi = [&](double a) {
    auto t = probe.run(a);
    if (probe.side(t) != Shot::Overshoot) return false;
    hi = a;
    t_hi = std::move(t);
    return true;
  };

  if (ctrl.amp_search_range) {
    const auto [a0, a1] = *ctrl.amp_search_range;
    if (!(a0 > 0.0) || !(a1 > a0)) throw InvalidArgument("amp_search_range must satisfy 0 < lo < hi");
    if (!try_lo(a0) || !try_hi(a1))
      throw BracketNotFound("amplitude range does not bracket a ground state");
  } else {
    switch (params.family) {
      case Family::P_eps:
      case Family::R_eps: {
        if (!eq.zeta1 || !eq.beta2 || !(*eq.zeta1 < *eq.beta2))
          throw BracketNotFound("F has no positive zero below the upper equilibrium; no ground state for eps = " +
                                std::to_string(params.eps));
        const double z = *eq.zeta1, b = *eq.beta2;
        // F(z) = 0: the energy can never return to zero, so z undershoots.
        if (!try_lo(z)) throw BracketNotFound("lower bracket end does not undershoot");
        bool found = false;
        for (std::size_t k = 1; k <= ctrl.max_bracket_steps && !found; ++k) {
          const double a = b - (b - z) * std::ldexp(1.0, -static_cast<int>(k));
          if (a <= lo) continue;
          if (try_hi(a)) found = true;
          else try_lo(a);
        }
        if (!found) throw BracketNotFound("no overshooting amplitude below the upper equilibrium");
        break;
      }
      case Family::R_zero: {
        const double z = *eq.zeta1;
        if (!try_lo(z)) throw BracketNotFound("lower bracket end does not undershoot");
        bool found = false;
        double a = z;
        for (std::size_t k = 1; k <= ctrl.max_bracket_steps && !found; ++k) {
          a *= 1.5;
          if (try_hi(a)) found = true;
          else try_lo(a);
        }
        if (!found) throw BracketNotFound("no overshooting amplitude found scanning upward");
        break;
      }
      case Family::P_zero: {
        const double b = eq.beta2.value_or(1.0);
        bool found = false;
        for (std::size_t k = 1; k <= ctrl.max_bracket_steps && !found; ++k)
          found = try_hi(b * (1.0 - std::ldexp(1.0, -static_cast<int>(k))));
        if (!found) throw BracketNotFound("no overshooting amplitude below the upper equilibrium");
        found = false;
        double a = hi;
        for (std::size_t k = 1; k <= ctrl.max_bracket_steps && !found; ++k) {
          a /= 1.5;
          found = try_lo(a);
        }
        if (!found) throw BracketNotFound("no undershooting amplitude found scanning downward");
        break;
      }
    }
  }
  diag.bracket_lo = lo;
  diag.bracket_hi = hi;

  while (hi / lo - 1.0 > ctrl.amp_tol) {
    if (diag.iterations >= ctrl.max_iterations) {
      diag.iteration_cap_hit = true;
      break;
    }
    const double mid = hi / lo > 1.01 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    ++diag.iterations;
    auto t = probe.run(mid);
    if (probe.side(t) == Shot::Overshoot) {
      hi = mid;
      t_hi = std::move(t);
    } else {
      lo = mid;
      t_lo = std::move(t);
    }
  }

  const double a = 0.5 * (lo + hi);
  Trajectory t_mid = probe.run(a);

  // Trusted part of the grid: where the bracketing shots still agree.
  const double r_end = std::min({t_lo.radii.back(), t_hi.radii.back(), t_mid.radii.back()});
  double r_rel = r_end;
  for (std::size_t i = 0; i < t_mid.size(); ++i) {
    const double r = t_mid.radii[i];
    const double u = t_mid.values[i];
    if (r > r_end || !(u > 0.0) || t_mid.slopes[i] >= 0.0) {
      r_rel = std::min(r, r_end);
      break;
    }
    const double gap = std::abs(t_hi.at(r).first - t_lo.at(r).first);
    if (gap > ctrl.reliable_rel * u) {
      r_rel = r;
      break;
    }
  }
  diag.reliable_radius = r_rel;

  auto tail_at = [&](double r, double u) {
    return params.algebraic_far_field() ? TailModel::algebraic(params.N, r, u)
                                        : TailModel::exponential(params.N, params.decay_rate(), r, u);
  };
  // Hand off where the linear tail fits the trajectory best: further out the
  // nonlinearity has decayed, closer in the growing mode has not yet entered.
  double r_match = 0.5 * r_rel;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t_mid.size(); ++i) {
    const double r = t_mid.radii[i];
    if (r < 0.25 * r_rel) continue;
    if (r > r_rel) break;
    const double du = t_mid.slopes[i];
    if (!(t_mid.values[i] > 0.0) || !(du < 0.0)) break;
    const double m = std::abs(tail_at(r, t_mid.values[i]).slope(r) - du) / std::abs(du);
    if (m < best) {
      best = m;
      r_match = r;
    }
  }
  if (!(r_match > t_mid.radii.front()))
    throw ShootingError("bracketing shots disagree before the hand-off radius");

  RadialProfile prof;
  prof.dimension = params.N;
  prof.amplitude = a;
  prof.params = params;
  prof.grid = t_mid.truncated(r_match);
  const double u_m = prof.grid.values.back();
  const double du_m = prof.grid.slopes.back();
  prof.tail = tail_at(r_match, u_m);
  diag.tail_slope_mismatch = std::abs(prof.tail.slope(r_match) - du_m) / std::abs(du_m);
  {
    const double r2 = std::min({2.0 * r_match, r_rel, t_mid.radii.back()});
    const double u2 = t_mid.at(r2).first;
    diag.tail_residual_2x = std::abs(prof.tail.value(r2) - u2) / std::abs(u2);
  }
  prof.diagnostics = diag;
  if (!(diag.tail_slope_mismatch <= ctrl.max_tail_mismatch))
    throw ShootingError("tail hand-off at r = " + std::to_string(r_match) +
                        " is not in the far field (slope mismatch " + std::to_string(diag.tail_slope_mismatch) +
                        "); amplitude resolution is too coarse for this profile");

  const auto& g = prof.grid;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g.values[i] > 0.0)) throw InconsistentSolution("ground state is not positive on the grid");
    if (i > 0 && !(g.values[i] < g.values[i - 1]))
      throw InconsistentSolution("ground state is not strictly decreasing on the grid");
  }
  if (params.family == Family::P_eps && a > 1.0)
    throw InconsistentSolution("P_eps amplitude exceeds 1");
  return prof;
}

}  // namespace gslab
