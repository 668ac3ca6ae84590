#include "gslab/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>

namespace gslab {

std::string_view to_string(TerminalEvent e) {
  switch (e) {
    case TerminalEvent::ZeroCrossing:
      return "ZeroCrossing";
    case TerminalEvent::SlopeSignFlip:
      return "SlopeSignFlip";
    case TerminalEvent::ReachedRmax:
      return "ReachedRmax";
    case TerminalEvent::Underflow:
      return "Underflow";
    case TerminalEvent::DecayOvershoot:
      return "DecayOvershoot";
    case TerminalEvent::SlowDecay:
      return "SlowDecay";
  }
  return "?";
}

quad::HermitePanel Trajectory::panel(std::size_t i) const {
  return {radii[i],       radii[i + 1] - radii[i], values[i],    slopes[i],
          curvatures[i],  values[i + 1],           slopes[i + 1], curvatures[i + 1]};
}

std::pair<double, double> Trajectory::at(double r) const {
  if (radii.empty()) throw InvalidArgument("empty trajectory");
  if (r <= radii.front()) return {values.front(), slopes.front()};
  if (r >= radii.back()) return {values.back(), slopes.back()};
  const auto it = std::upper_bound(radii.begin(), radii.end(), r);
  const auto i = static_cast<std::size_t>(it - radii.begin()) - 1;
  const auto pn = panel(i);
  return {pn.value(r), pn.slope(r)};
}

Trajectory Trajectory::truncated(double r_cut) const {
  Trajectory t;
  t.dimension = dimension;
  t.amplitude = amplitude;
  t.terminal_event = TerminalEvent::ReachedRmax;
  t.rhs_evaluations = rhs_evaluations;
  const auto end = std::upper_bound(radii.begin(), radii.end(), r_cut);
  const auto n = static_cast<std::size_t>(end - radii.begin());
  t.radii.assign(radii.begin(), radii.begin() + n);
  t.values.assign(values.begin(), values.begin() + n);
  t.slopes.assign(slopes.begin(), slopes.begin() + n);
  t.curvatures.assign(curvatures.begin(), curvatures.begin() + n);
  if (n == 0) throw InvalidArgument("truncated: cut lies before the first point");
  if (n < radii.size() && t.radii.back() < r_cut) {
    const auto pn = panel(n - 1);
    t.radii.push_back(r_cut);
    t.values.push_back(pn.value(r_cut));
    t.slopes.push_back(pn.slope(r_cut));
    // Linear blend of the end curvatures; only used as Hermite data.
    const double w = (r_cut - pn.r0) / pn.h;
    t.curvatures.push_back((1.0 - w) * pn.c0 + w * pn.c1);
  }
  t.terminal_radius = t.radii.back();
  return t;
}

namespace {

inline double second_derivative(const Nonlinearity& nl, int N, double r, double u, double du) {
  return -(N - 1.0) / r * du - nl.f(u);
}

}  // namespace

double rhs_eval(const ProblemParams& params, double r, double u, double du) {
  if (!std::isfinite(r) || !std::isfinite(u) || !std::isfinite(du))
    throw InvalidArgument("rhs_eval: non-finite input");
  if (!(r > 0.0)) throw InvalidArgument("rhs_eval: r must be positive");
  params.validate();
  return second_derivative(Nonlinearity(params), params.N, r, u, du);
}

double series_radius(const ProblemParams& params, double a) {
  const Nonlinearity nl(params);
  const double fa = std::abs(nl.f(a));
  const double dfa = std::abs(nl.df(a));
  const double inf = std::numeric_limits<double>::infinity();
  const double s1 = fa > 0.0 ? 1.0 / std::sqrt(fa) : inf;
  const double s2 = dfa > 0.0 ? 1.0 / std::sqrt(dfa) : inf;
  double s = std::min(s1, s2);
  if (!std::isfinite(s)) s = 1.0;
  return 1e-4 * std::max(1.0, s);
}

std::pair<double, double> series_start(const ProblemParams& params, double a, double r0) {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("series_start: amplitude must be positive");
  if (!(r0 > 0.0)) throw InvalidArgument("series_start: r0 must be positive");
  params.validate();
  const Nonlinearity nl(params);
  const double N = params.N;
  const double fa = nl.f(a);
  const double c2 = -fa / (2.0 * N);
  const double c4 = fa * nl.df(a) / (8.0 * N * (N + 2.0));
  const double r2 = r0 * r0;
  return {a + c2 * r2 + c4 * r2 * r2, 2.0 * c2 * r0 + 4.0 * c4 * r2 * r0};
}

Trajectory integrate(const ProblemParams& params, double a, double r_max, const StepControls& tol) {
  params.validate();
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("integrate: amplitude must be positive");
  const double r0 = series_radius(params, a);
  if (!(r_max > r0)) throw InvalidArgument("integrate: r_max must exceed the hand-off radius");

  const Nonlinearity nl(params);
  const int N = params.N;
  const bool algebraic = params.algebraic_far_field();
  const double floor_value = tol.underflow_rel * a;
  // Pokhozhaev slope coefficients, dP/dr = r^{N-1} u^p (A - B u^{q-p}).
  const double coefA = N / params.p - (N - 2.0) / 2.0;
  const double coefB = N / params.q - (N - 2.0) / 2.0;
  const double slow_threshold = algebraic ? coefA / coefB : 0.0;

  Trajectory traj;
  traj.dimension = N;
  traj.amplitude = a;

  std::size_t evals = 0;
  auto accel = [&](double r, double u, double du) {
    ++evals;
    return second_derivative(nl, N, r, u, du);
  };

  auto [u, du] = series_start(params, a, r0);
  double r = r0;
  double ddu = accel(r, u, du);
  auto push = [&](double rr, double uu, double dd, double cc) {
    traj.radii.push_back(rr);
    traj.values.push_back(uu);
    traj.slopes.push_back(dd);
    traj.curvatures.push_back(cc);
  };
  push(r, u, du, ddu);

  auto finish = [&](TerminalEvent e) {
    traj.terminal_event = e;
    traj.terminal_radius = traj.radii.back();
    traj.rhs_evaluations = evals;
    return traj;
  };

  if (du > 0.0) return finish(TerminalEvent::SlopeSignFlip);

  // Scaled Pokhozhaev function P(r)/r^{N-1}.
  auto pokhozhaev = [&](double rr, double uu, double dd) {
    return rr * (0.5 * dd * dd + nl.F(uu)) + 0.5 * (N - 2.0) * uu * dd;
  };

  // Dormand–Prince 5(4).
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  double h = r0;
  std::array<double, 2> k1{du, ddu};
  std::size_t steps = 0;

  while (true) {
    if (++steps > tol.max_steps) {
      traj.rhs_evaluations = evals;
      throw IntegrationFailure("integrate: step budget exhausted", traj);
    }
    h = std::min(h, r_max - r);
    auto stage = [&](double rr, double uu, double dd) { return std::array<double, 2>{dd, accel(rr, uu, dd)}; };

    const auto k2 = stage(r + c2 * h, u + h * (a21 * k1[0]), du + h * (a21 * k1[1]));
    const auto k3 = stage(r + c3 * h, u + h * (a31 * k1[0] + a32 * k2[0]),
                          du + h * (a31 * k1[1] + a32 * k2[1]));
    const auto k4 = stage(r + c4 * h, u + h * (a41 * k1[0] + a42 * k2[0] + a43 * k3[0]),
                          du + h * (a41 * k1[1] + a42 * k2[1] + a43 * k3[1]));
    const auto k5 =
        stage(r + c5 * h, u + h * (a51 * k1[0] + a52 * k2[0] + a53 * k3[0] + a54 * k4[0]),
              du + h * (a51 * k1[1] + a52 * k2[1] + a53 * k3[1] + a54 * k4[1]));
    const auto k6 = stage(
        r + h, u + h * (a61 * k1[0] + a62 * k2[0] + a63 * k3[0] + a64 * k4[0] + a65 * k5[0]),
        du + h * (a61 * k1[1] + a62 * k2[1] + a63 * k3[1] + a64 * k4[1] + a65 * k5[1]));
    const double u_new = u + h * (b1 * k1[0] + b3 * k3[0] + b4 * k4[0] + b5 * k5[0] + b6 * k6[0]);
    const double du_new =
        du + h * (b1 * k1[1] + b3 * k3[1] + b4 * k4[1] + b5 * k5[1] + b6 * k6[1]);
    const double r_new = r + h;
    const auto k7 = stage(r_new, u_new, du_new);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
      const double y0 = i == 0 ? u : du;
      const double y1 = i == 0 ? u_new : du_new;
      const double sc = tol.abs_tol + tol.rel_tol * std::max(std::abs(y0), std::abs(y1));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(0.5 * err);

    if (!std::isfinite(err) || err > 1.0) {
      const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h *= fac;
      if (h < std::max(tol.min_step, 4.0 * std::numeric_limits<double>::epsilon() * r)) {
        traj.rhs_evaluations = evals;
        throw IntegrationFailure("integrate: step size collapsed", traj);
      }
      continue;
    }

    const double u_old = u, du_old = du, r_old = r;
    r = r_new;
    u = u_new;
    du = du_new;
    k1 = k7;
    push(r, u, du, k7[1]);

    // Event detection on the accepted step.
    std::optional<std::pair<double, TerminalEvent>> hit;
    const auto pn = traj.panel(traj.size() - 2);
    auto refine = [&](auto&& g, TerminalEvent ev) {
      // g > 0 at r_old, g <= 0 at r_new.
      double lo = r_old, hi = r_new;
      for (int it = 0; it < 200 && hi - lo > tol.event_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (g(mid) > 0.0) lo = mid;
        else hi = mid;
      }
      if (!hit || hi < hit->first) hit = std::make_pair(hi, ev);
    };
    if (u <= 0.0) refine([&](double x) { return pn.value(x); }, TerminalEvent::ZeroCrossing);
    if (du > 0.0 && u > 0.0) refine([&](double x) { return -pn.slope(x); }, TerminalEvent::SlopeSignFlip);
    if (u > 0.0 && u < floor_value && du < 0.0)
      refine([&](double x) { return pn.value(x) - floor_value; }, TerminalEvent::Underflow);
    if (algebraic && u > 0.0) {
      if ((N - 2.0) * u + r * du < 0.0)
        refine([&](double x) { return (N - 2.0) * pn.value(x) + x * pn.slope(x); },
               TerminalEvent::DecayOvershoot);
      if (pokhozhaev(r, u, du) < 0.0 && std::pow(u, params.q - params.p) < slow_threshold) {
        if (pokhozhaev(r_old, u_old, du_old) > 0.0)
          refine([&](double x) { return pokhozhaev(x, pn.value(x), pn.slope(x)); }, TerminalEvent::SlowDecay);
        else if (!hit || r < hit->first)
          hit = std::make_pair(r, TerminalEvent::SlowDecay);
      }
    }
    if (hit) {
      const double re = hit->first;
      if (re < r) {
        const double ue = pn.value(re), de = pn.slope(re);
        traj.radii.back() = re;
        traj.values.back() = ue;
        traj.slopes.back() = de;
        traj.curvatures.back() = accel(re, ue, de);
      }
      return finish(hit->second);
    }
    if (r >= r_max) return finish(TerminalEvent::ReachedRmax);

    const double fac = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
    h *= fac;
  }
}

}  // namespace gslab
