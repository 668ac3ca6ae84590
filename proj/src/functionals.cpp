#include "gslab/functionals.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gslab/errors.hpp"
#include "gslab/quadrature.hpp"

namespace gslab {

double sphere_area(int N) {
  if (N < 1) throw InvalidArgument("sphere_area: N must be positive");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

namespace {

void check_divergence(const RadialProfile& u, double s) {
  const int N = u.dimension;
  if (u.tail.kind == TailModel::Kind::Algebraic && !(s * (N - 2.0) > N))
    throw DivergenceError("algebraic tail: |u|^" + std::to_string(s) + " is not integrable in dimension " +
                              std::to_string(N),
                          s);
}

// ∫_a^b g(r) r^{N-1} dr over the grid panels intersecting [a, b].
template <class G>
double grid_integral(const Trajectory& t, int N, double a, double b, const G& g) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double lo = std::max(a, t.radii[i]);
    const double hi = std::min(b, t.radii[i + 1]);
    if (!(hi > lo)) continue;
    const auto pn = t.panel(i);
    sum += quad::gauss([&](double r) { return g(pn, r) * std::pow(r, N - 1.0); }, lo, hi);
  }
  return sum;
}

// ∫_a^∞ of |tail|^s r^{N-1} (which = 0) or tail'^2 r^{N-1} (which = 1).
double tail_integral(const TailModel& tm, double s, double a, int which) {
  const int N = tm.dimension;
  if (tm.kind == TailModel::Kind::Algebraic) {
    const double C = std::abs(tm.coefficient);
    if (which == 0) {
      const double e = s * (N - 2.0) - N;
      return std::pow(C, s) * std::pow(a, -e) / e;
    }
    return (N - 2.0) * C * C * std::pow(a, 2.0 - N);
  }
  const double k = tm.rate_or_power;
  const double rate = which == 0 ? s * k : 2.0 * k;
  auto g = [&](double r) {
    const double v = which == 0 ? std::pow(std::abs(tm.value(r)), s) : tm.slope(r) * tm.slope(r);
    return v * std::pow(r, N - 1.0);
  };
  return quad::exp_sinh(g, a, std::min(a, 1.0 / rate), 1e-13);
}

double norm_for(const GroundStateSolution& sol, double e, const ProblemParams& pp) {
  if (e == 2.0) return sol.norm_L2_sq;
  if (e == pp.p) return sol.norm_Lp_p;
  if (e == pp.q) return sol.norm_Lq_q;
  throw InvalidArgument("no stored norm for exponent " + std::to_string(e));
}

const ProblemParams& params_of(const GroundStateSolution& sol) {
  if (!sol.profile.params) throw InvalidArgument("solution carries no equation parameters");
  return *sol.profile.params;
}

}  // namespace

IntegralBreakdown radial_norm_breakdown(const RadialProfile& u, double s) {
  if (!(s >= 1.0)) throw InvalidArgument("radial_norm: s must be >= 1");
  check_divergence(u, s);
  const int N = u.dimension;
  const double omega = sphere_area(N);
  const auto& t = u.grid;
  const double r0 = u.core_radius();
  const double a = u.amplitude;
  const double c = (t.values.front() - a) / (r0 * r0);

  IntegralBreakdown b;
  b.core = omega * (std::pow(a, s) * std::pow(r0, N) / N +
                    s * std::pow(a, s - 1.0) * c * std::pow(r0, N + 2.0) / (N + 2.0));
  b.grid = omega * grid_integral(t, N, r0, u.outer_radius(), [s](const quad::HermitePanel& pn, double r) {
             return std::pow(std::abs(pn.value(r)), s);
           });
  b.tail = omega * tail_integral(u.tail, s, u.outer_radius(), 0);
  return b;
}

double radial_norm(const RadialProfile& u, double s) { return radial_norm_breakdown(u, s).total(); }

IntegralBreakdown dirichlet_breakdown(const RadialProfile& u) {
  const int N = u.dimension;
  const double omega = sphere_area(N);
  const auto& t = u.grid;
  const double r0 = u.core_radius();
  IntegralBreakdown b;
  const double d0 = t.slopes.front();
  b.core = omega * d0 * d0 * std::pow(r0, N) / (N + 2.0);
  b.grid = omega * grid_integral(t, N, r0, u.outer_radius(), [](const quad::HermitePanel& pn, double r) {
             const double d = pn.slope(r);
             return d * d;
           });
  b.tail = omega * tail_integral(u.tail, 2.0, u.outer_radius(), 1);
  return b;
}

double dirichlet_norm(const RadialProfile& u) { return dirichlet_breakdown(u).total(); }

double ball_mass(const RadialProfile& u, double s, double R) {
  if (!(R >= 0.0)) throw InvalidArgument("ball_mass: negative radius");
  const int N = u.dimension;
  const double omega = sphere_area(N);
  const double r0 = u.core_radius();
  const double rout = u.outer_radius();
  if (R <= r0) return omega * std::pow(u.amplitude, s) * std::pow(R, N) / N;
  const double a = u.amplitude;
  const double c = (u.grid.values.front() - a) / (r0 * r0);
  double m = std::pow(a, s) * std::pow(r0, N) / N +
             s * std::pow(a, s - 1.0) * c * std::pow(r0, N + 2.0) / (N + 2.0);
  m += grid_integral(u.grid, N, r0, std::min(R, rout), [s](const quad::HermitePanel& pn, double r) {
    return std::pow(std::abs(pn.value(r)), s);
  });
  if (R > rout) {
    if (u.tail.kind == TailModel::Kind::Algebraic && !(s * (N - 2.0) > N)) {
      const double C = std::abs(u.tail.coefficient);
      const double e = N - s * (N - 2.0);
      m += std::pow(C, s) * (e == 0.0 ? std::log(R / rout) : (std::pow(R, e) - std::pow(rout, e)) / e);
    } else if (u.tail.kind == TailModel::Kind::Algebraic) {
      m += tail_integral(u.tail, s, rout, 0) - tail_integral(u.tail, s, R, 0);
    } else {
      const auto& tm = u.tail;
      m += quad::tanh_sinh(
          [&](double r, double) { return std::pow(std::abs(tm.value(r)), s) * std::pow(r, N - 1.0); }, rout,
          R, 1e-13);
    }
  }
  return omega * m;
}

GroundStateSolution evaluate(const RadialProfile& u) {
  if (!u.params) throw InvalidArgument("evaluate: profile carries no equation parameters");
  const auto& pp = *u.params;
  GroundStateSolution sol;
  sol.profile = u;
  auto safe_norm = [&](double s) {
    try {
      return radial_norm(u, s);
    } catch (const DivergenceError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  sol.norm_L2_sq = safe_norm(2.0);
  sol.norm_Lp_p = safe_norm(pp.p);
  sol.norm_Lq_q = safe_norm(pp.q);
  sol.dirichlet_sq = dirichlet_norm(u);
  sol.energy = energy(sol);
  const auto res = identity_residuals(sol);
  sol.nehari_residual = res.nehari;
  sol.pokhozhaev_residual = res.pokhozhaev;
  sol.level_S = sol.energy > 0.0 ? extract_level(sol) : std::numeric_limits<double>::quiet_NaN();
  return sol;
}

double energy(const GroundStateSolution& sol) {
  const auto& pp = params_of(sol);
  const Nonlinearity nl(pp);
  double potential = 0.0;
  for (std::size_t i = 0; i < nl.size(); ++i) {
    const auto& t = nl.term(i);
    potential += t.coeff / t.exponent * norm_for(sol, t.exponent, pp);
  }
  return 0.5 * sol.dirichlet_sq - potential;
}

IdentityResiduals identity_residuals(const GroundStateSolution& sol) {
  const auto& pp = params_of(sol);
  const Nonlinearity nl(pp);
  const double D = sol.dirichlet_sq;
  if (D == 0.0) return {};
  double nehari = 0.0, potential = 0.0;
  for (std::size_t i = 0; i < nl.size(); ++i) {
    const auto& t = nl.term(i);
    const double n = norm_for(sol, t.exponent, pp);
    nehari += t.coeff * n;
    potential += t.coeff / t.exponent * n;
  }
  return {(D - nehari) / D, (D - pp.p_star() * potential) / D};
}

double extract_level(const GroundStateSolution& sol) {
  const int N = sol.profile.dimension;
  const double ps = 2.0 * N / (N - 2.0);
  if (!(sol.energy > 0.0)) throw InconsistentSolution("extract_level: energy must be positive");
  return std::pow(sol.energy / (0.5 - 1.0 / ps), 2.0 / N);
}

RadialProfile to_minimizer_frame(const RadialProfile& u, double S) {
  if (!(S > 0.0)) throw InvalidArgument("to_minimizer_frame: S must be positive");
  return dilate(u, 1.0, std::sqrt(S));
}

std::optional<double> minimizer_constraint(const RadialProfile& w, const ProblemParams& params) {
  if (w.amplitude > 1.0) return std::nullopt;
  const Nonlinearity nl(params);
  double potential = 0.0;
  for (std::size_t i = 0; i < nl.size(); ++i) {
    const auto& t = nl.term(i);
    potential += t.coeff / t.exponent * radial_norm(w, t.exponent);
  }
  return params.p_star() * potential;
}

double kappa(double p, double q) {
  if (!(q > p) || !(p > 2.0)) throw InvalidArgument("kappa requires q > p > 2");
  return q * (p - 2.0) / (2.0 * (q - p));
}

KappaReport kappa_identities(const RadialProfile& w, const ProblemParams& params) {
  if (std::abs(params.p - params.p_star()) > 1e-12 * params.p_star())
    throw InvalidArgument("kappa_identities requires p = p*");
  if (!(params.eps > 0.0)) throw InvalidArgument("kappa_identities requires eps > 0");
  KappaReport r;
  r.kappa = kappa(params.p, params.q);
  r.q_norm = radial_norm(w, params.q);
  r.p_norm = radial_norm(w, params.p);
  r.eps_L2 = params.eps * radial_norm(w, 2.0);
  r.ratio = r.q_norm / r.eps_L2;
  r.residual_q = (r.ratio - r.kappa) / r.kappa;
  const double rhs = 1.0 + (r.kappa + 1.0) * r.eps_L2;
  r.residual_p = (r.p_norm - rhs) / rhs;
  return r;
}

LimitReport limit_identities(const RadialProfile& w0, const ProblemParams& params) {
  const double p = params.p, q = params.q, ps = params.p_star();
  LimitReport r;
  switch (params.family) {
    case Family::P_zero:
      r.first = radial_norm(w0, p);
      r.first_expected = (q - ps) * p / ((q - p) * ps);
      r.second = radial_norm(w0, q);
      r.second_expected = (p - ps) * q / ((q - p) * ps);
      break;
    case Family::R_zero:
      r.first = radial_norm(w0, 2.0);
      r.first_expected = 2.0 * (ps - p) / (ps * (p - 2.0));
      r.second = radial_norm(w0, p);
      r.second_expected = (ps - 2.0) * p / ((p - 2.0) * ps);
      break;
    default:
      throw InvalidArgument("limit_identities requires family P_zero or R_zero");
  }
  r.first_residual = (r.first - r.first_expected) / r.first_expected;
  r.second_residual = (r.second - r.second_expected) / r.second_expected;
  return r;
}

}  // namespace gslab
