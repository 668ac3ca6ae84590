#include "gslab/emden_fowler.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "gslab/errors.hpp"
#include "gslab/functionals.hpp"
#include "gslab/quadrature.hpp"

namespace gslab {

namespace {

void check_args(int N, double lambda) {
  if (N < 3) throw InvalidArgument("Emden-Fowler profiles need N >= 3");
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
}

double c2_of(int N) { return N * (N - 2.0); }

// ∫_{θ0}^{θ1} sin^a θ cos^b θ dθ with 0 <= θ0 < θ1 <= π/2. b may be in (-1, 0).
double sin_cos_integral(double a, double b, double th0, double th1) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  const bool top = th1 == half_pi;
  const double mid = 0.5 * (th0 + th1);
  return quad::tanh_sinh(
      [&](double x, double dist) {
        const double c = (top && x > mid) ? std::sin(dist) : std::cos(x);
        const double s = (th0 == 0.0 && x < mid) ? std::sin(dist) : std::sin(x);
        return std::pow(s, a) * std::pow(c, b);
      },
      th0, th1, 1e-15);
}

double u1_norm(int N, double s) {
  if (!(s * (N - 2.0) > N))
    throw DivergenceError("U_lambda is not in L^" + std::to_string(s) + " in dimension " + std::to_string(N), s);
  const double c = std::sqrt(c2_of(N));
  return sphere_area(N) * std::pow(c, N) *
         sin_cos_integral(N - 1.0, s * (N - 2.0) - N - 1.0, 0.0, std::numbers::pi / 2.0);
}

}  // namespace

double eval_U(int N, double lambda, double r) {
  check_args(N, lambda);
  if (r < 0.0) throw InvalidArgument("radius must be non-negative");
  const double x = r / lambda;
  return std::pow(lambda, -0.5 * (N - 2.0)) * std::pow(1.0 + x * x / c2_of(N), -0.5 * (N - 2.0));
}

double eval_U_slope(int N, double lambda, double r) {
  check_args(N, lambda);
  const double x = r / lambda;
  // U₁' = -(x/N) (1 + x²/c²)^{-N/2}
  return std::pow(lambda, -0.5 * N) * (-(x / N) * std::pow(1.0 + x * x / c2_of(N), -0.5 * N));
}

double eval_U_curvature(int N, double lambda, double r) {
  check_args(N, lambda);
  const double x = r / lambda;
  const double c2 = c2_of(N);
  const double g = 1.0 + x * x / c2;
  // U₁'' = -(1/N) g^{-N/2} + (x²/c²) g^{-N/2-1}
  return std::pow(lambda, -0.5 * N - 1.0) * (-std::pow(g, -0.5 * N) / N + (x * x / c2) * std::pow(g, -0.5 * N - 1.0));
}

double eval_W(int N, double lambda, double r) { return eval_U(N, lambda, std::sqrt(sobolev_constant(N)) * r); }

double EmdenFowlerProfile::value(double r) const {
  if (frame == Frame::U) return eval_U(N, lambda, r);
  return eval_U(N, lambda, std::sqrt(sobolev_constant(N)) * r);
}

double EmdenFowlerProfile::slope(double r) const {
  if (frame == Frame::U) return eval_U_slope(N, lambda, r);
  const double s = std::sqrt(sobolev_constant(N));
  return s * eval_U_slope(N, lambda, s * r);
}

double EmdenFowlerProfile::curvature(double r) const {
  if (frame == Frame::U) return eval_U_curvature(N, lambda, r);
  const double S = sobolev_constant(N);
  return S * eval_U_curvature(N, lambda, std::sqrt(S) * r);
}

double EmdenFowlerProfile::ode_residual(double r) const {
  if (!(r > 0.0)) throw InvalidArgument("ode_residual needs r > 0");
  const double ps = 2.0 * N / (N - 2.0);
  // In the W frame the equation is -ΔW = S* W^{p*-1}.
  const double weight = frame == Frame::U ? 1.0 : sobolev_constant(N);
  return curvature(r) + (N - 1.0) / r * slope(r) + weight * std::pow(value(r), ps - 1.0);
}

RadialProfile EmdenFowlerProfile::to_profile(double grid_ratio, double outer_scale) const {
  if (!(grid_ratio > 1.0)) throw InvalidArgument("grid_ratio must exceed 1");
  const double scale = frame == Frame::U ? lambda : lambda / std::sqrt(sobolev_constant(N));
  RadialProfile prof;
  prof.dimension = N;
  prof.amplitude = value(0.0);
  auto& g = prof.grid;
  g.dimension = N;
  g.amplitude = prof.amplitude;
  const double r_end = outer_scale * scale;
  for (double r = 1e-4 * scale;; r *= grid_ratio) {
    const double rr = std::min(r, r_end);
    g.radii.push_back(rr);
    g.values.push_back(value(rr));
    g.slopes.push_back(slope(rr));
    g.curvatures.push_back(curvature(rr));
    if (rr >= r_end) break;
  }
  g.terminal_event = TerminalEvent::ReachedRmax;
  g.terminal_radius = r_end;
  prof.tail = TailModel::algebraic(N, r_end, g.values.back());
  prof.diagnostics.r_max = r_end;
  prof.diagnostics.reliable_radius = r_end;
  return prof;
}

SobolevRoutes sobolev_routes(int N) {
  check_args(N, 1.0);
  const double c = std::sqrt(c2_of(N));
  const double omega = sphere_area(N);
  const double half_pi = std::numbers::pi / 2.0;
  const double D = omega * std::pow(c, N + 2.0) / (N * N) * sin_cos_integral(N + 1.0, N - 3.0, 0.0, half_pi);
  const double P = omega * std::pow(c, N) * sin_cos_integral(N - 1.0, N - 1.0, 0.0, half_pi);
  return {std::pow(D, 2.0 / N), std::pow(P, 2.0 / N)};
}

double sobolev_constant(int N) {
  static std::mutex mu;
  static std::map<int, double> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(N); it != cache.end()) return it->second;
  }
  const auto r = sobolev_routes(N);
  if (std::abs(r.from_dirichlet - r.from_norm) > 1e-6 * r.from_norm)
    throw InconsistentSolution("Sobolev constant routes disagree");
  std::lock_guard lock(mu);
  cache.emplace(N, r.from_norm);
  return r.from_norm;
}

double u1_ball_mass(int N, double R) {
  check_args(N, 1.0);
  if (!(R >= 0.0)) throw InvalidArgument("radius must be non-negative");
  if (R == 0.0) return 0.0;
  const double c = std::sqrt(c2_of(N));
  return sphere_area(N) * std::pow(c, N) * sin_cos_integral(N - 1.0, N - 1.0, 0.0, std::atan(R / c));
}

double u1_exterior_mass(int N, double R) {
  check_args(N, 1.0);
  if (!(R >= 0.0)) throw InvalidArgument("radius must be non-negative");
  const double c = std::sqrt(c2_of(N));
  return sphere_area(N) * std::pow(c, N) *
         sin_cos_integral(N - 1.0, N - 1.0, std::atan(R / c), std::numbers::pi / 2.0);
}

double q_star(int N) { return q0(N, 1.0); }

double q0(int N, double lambda) {
  check_args(N, lambda);
  const double S = sobolev_constant(N);
  return u1_ball_mass(N, std::sqrt(S) / lambda) / std::pow(S, 0.5 * N);
}

double u_norm(int N, double lambda, double s) {
  check_args(N, lambda);
  return std::pow(lambda, N - 0.5 * s * (N - 2.0)) * u1_norm(N, s);
}

double w_norm(int N, double lambda, double s) {
  return std::pow(sobolev_constant(N), -0.5 * N) * u_norm(N, lambda, s);
}

}  // namespace gslab
