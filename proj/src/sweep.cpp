#include <omp.h>

#include <cmath>
#include <limits>

#include "gslab/asymptotics.hpp"
#include "gslab/emden_fowler.hpp"
#include "gslab/errors.hpp"
#include "gslab/functionals.hpp"

namespace gslab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::size_t kMinConverged = 6;

double p_star_of(int N) { return 2.0 * N / (N - 2.0); }

void check_spec(const SweepSpec& spec) {
  if (spec.N < 3) throw InvalidArgument("sweep: N must be >= 3");
  if (spec.grid.points < 8) throw InvalidArgument("sweep: grid needs at least 8 points");
  if (spec.grid.ratio() > 2.0 + 1e-12) throw InvalidArgument("sweep: grid ratio must be <= 2");
  // Throws on regime/exponent mismatch.
  const double p = spec.regime == Regime::Critical ? p_star_of(spec.N) : spec.p;
  predict_exponents(spec.regime, spec.N, p, spec.q);
}

ProblemParams point_params(const SweepSpec& spec, double x) {
  const double ps = p_star_of(spec.N);
  switch (spec.regime) {
    case Regime::Subcritical:
    case Regime::Supercritical:
      return {spec.N, spec.p, spec.q, x, Family::P_eps};
    case Regime::Critical:
      return {spec.N, ps, spec.q, x, Family::P_eps};
    case Regime::DeltaSupercritical:
      return {spec.N, ps + x, spec.q, 0.0, Family::P_zero};
    case Regime::PUpSubcritical:
      return {spec.N, ps - x, spec.q, 0.0, Family::R_zero};
  }
  throw InvalidArgument("unknown regime");
}

double reference_amplitude(const SweepSpec& spec) {
  switch (spec.regime) {
    case Regime::Supercritical:
      return find_ground_state({spec.N, spec.p, spec.q, 0.0, Family::P_zero}, spec.shoot).amplitude;
    case Regime::Subcritical:
      return find_ground_state({spec.N, spec.p, spec.q, 0.0, Family::R_zero}, spec.shoot).amplitude;
    default:
      return kNaN;
  }
}

ScalingReport assemble(const SweepSpec& spec, std::vector<SweepPoint> points, double reference) {
  ScalingReport rep;
  rep.regime = spec.regime;
  rep.N = spec.N;
  rep.p = spec.regime == Regime::Critical ? p_star_of(spec.N) : spec.p;
  rep.q = spec.q;
  rep.grid = std::move(points);
  rep.reference_amplitude = reference;
  rep.reference_level = sobolev_constant(spec.N);
  std::size_t ok = 0;
  for (const auto& pt : rep.grid) ok += pt.converged ? 1 : 0;
  if (ok < kMinConverged)
    throw ShootingError("sweep: only " + std::to_string(ok) + " grid points converged (need 6)");
  refit(rep, spec.window);
  return rep;
}

}  // namespace

SweepPoint sweep_point(const SweepSpec& spec, double x, double reference) {
  SweepPoint pt;
  pt.x = x;
  pt.sigma = pt.lambda = pt.dist_D1 = pt.dist_Lp = pt.v_q_norm = pt.v_L2_sq = kNaN;
  pt.kappa_residual = pt.important_residual = pt.eps_L2 = pt.amplitude_gap = kNaN;
  pt.scaled_amplitude = pt.scaled_gap = kNaN;
  try {
    const auto pp = point_params(spec, x);
    const auto prof = find_ground_state(pp, spec.shoot);
    const auto sol = evaluate(prof);
    pt.amplitude = prof.amplitude;
    pt.S = sol.level_S;
    pt.nehari_residual = sol.nehari_residual;
    pt.pokhozhaev_residual = sol.pokhozhaev_residual;
    pt.integrations = prof.diagnostics.integrations;
    pt.iterations = prof.diagnostics.iterations;
    const double Sstar = sobolev_constant(spec.N);
    switch (spec.regime) {
      case Regime::Critical: {
        pt.sigma = pt.S - Sstar;
        pt.eps_L2 = x * sol.norm_L2_sq;
        const auto w = to_minimizer_frame(prof, pt.S);
        const auto c = concentrate(w, q_star(spec.N));
        pt.lambda = c.lambda_eps;
        pt.dist_D1 = c.dist_D1;
        pt.dist_Lp = c.dist_Lp;
        pt.v_q_norm = radial_norm(c.v_profile, pp.q);
        pt.v_L2_sq = radial_norm(c.v_profile, 2.0);
        pt.kappa_residual = kappa_identities(w, pp).residual_q;
        const double k = kappa(pp.p, pp.q);
        const double lhs = std::pow(pt.lambda, -2.0 * (pp.q - pp.p) / (pp.p - 2.0)) * pt.v_q_norm;
        const double rhs = k * x * pt.lambda * pt.lambda * pt.v_L2_sq;
        pt.important_residual = (lhs - rhs) / rhs;
        break;
      }
      case Regime::Supercritical:
        pt.eps_L2 = x * sol.norm_L2_sq;
        pt.amplitude_gap = std::abs(pt.amplitude - reference);
        break;
      case Regime::Subcritical:
        pt.eps_L2 = x * sol.norm_L2_sq;
        pt.scaled_amplitude = pt.amplitude * std::pow(x, -1.0 / (pp.p - 2.0));
        pt.scaled_gap = std::abs(pt.scaled_amplitude - reference) / reference;
        break;
      case Regime::DeltaSupercritical:
      case Regime::PUpSubcritical:
        pt.sigma = pt.S - Sstar;
        break;
    }
    pt.converged = !prof.diagnostics.iteration_cap_hit;
    if (!pt.converged) pt.error = "bisection iteration cap hit";
  } catch (const std::exception& e) {
    pt.converged = false;
    pt.error = e.what();
  }
  return pt;
}

ScalingReport sweep(const SweepSpec& spec, int jobs) {
  check_spec(spec);
  const auto xs = spec.grid.values();
  const double ref = reference_amplitude(spec);
  // Warm the per-dimension caches before the workers start.
  sobolev_constant(spec.N);
  std::vector<SweepPoint> points(xs.size());
  const int n = static_cast<int>(xs.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int i = 0; i < n; ++i) points[static_cast<std::size_t>(i)] = sweep_point(spec, xs[static_cast<std::size_t>(i)], ref);
  return assemble(spec, std::move(points), ref);
}

ScalingReport sweep_serial(const SweepSpec& spec) {
  check_spec(spec);
  const auto xs = spec.grid.values();
  const double ref = reference_amplitude(spec);
  std::vector<SweepPoint> points;
  points.reserve(xs.size());
  for (double x : xs) points.push_back(sweep_point(spec, x, ref));
  return assemble(spec, std::move(points), ref);
}

}  // namespace gslab
