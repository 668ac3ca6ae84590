#include "gslab/profile.hpp"

#include <cmath>
#include <numbers>

#include "gslab/bessel.hpp"
#include "gslab/errors.hpp"

namespace gslab {

namespace bessel {

namespace {

constexpr double kSwitch = 500.0;

// Σ_k (±1)^k a_k(ν) / x^k, the Hankel expansion factor.
double hankel_sum(double nu, double x, double sign) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 12; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= sign * (mu - odd * odd) / (k * 8.0 * x);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

double k_scaled(double nu, double x) {
  if (!(x > 0.0)) throw InvalidArgument("k_scaled: x must be positive");
  if (x < kSwitch) return std::exp(x) * std::cyl_bessel_k(nu, x);
  return std::sqrt(std::numbers::pi / (2.0 * x)) * hankel_sum(nu, x, 1.0);
}

double i_scaled(double nu, double x) {
  if (!(x > 0.0)) throw InvalidArgument("i_scaled: x must be positive");
  if (x < kSwitch) return std::exp(-x) * std::cyl_bessel_i(nu, x);
  return hankel_sum(nu, x, -1.0) / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace bessel

std::string_view to_string(TailModel::Kind k) {
  return k == TailModel::Kind::Exponential ? "Exponential" : "Algebraic";
}

namespace {

double nu_of(int N) { return 0.5 * N - 1.0; }

}  // namespace

TailModel TailModel::exponential(int N, double k, double r_match, double u_match) {
  if (!(k > 0.0) || !(r_match > 0.0)) throw InvalidArgument("exponential tail needs k, r > 0");
  TailModel t;
  t.kind = Kind::Exponential;
  t.dimension = N;
  t.rate_or_power = k;
  t.match_radius = r_match;
  t.match_value = u_match;
  const double nu = nu_of(N);
  const double x = k * r_match;
  // log A = log u + ν log r + x - log(e^x K_ν(x)), guarded against overflow.
  const double logA = std::log(u_match) + nu * std::log(r_match) + x - std::log(bessel::k_scaled(nu, x));
  t.coefficient = std::exp(logA);
  t.prefactor = std::exp(logA + 0.5 * std::log(std::numbers::pi / (2.0 * k)));
  return t;
}

TailModel TailModel::algebraic(int N, double r_match, double u_match) {
  if (!(r_match > 0.0)) throw InvalidArgument("algebraic tail needs r > 0");
  TailModel t;
  t.kind = Kind::Algebraic;
  t.dimension = N;
  t.rate_or_power = N - 2.0;
  t.match_radius = r_match;
  t.match_value = u_match;
  t.coefficient = u_match * std::pow(r_match, N - 2.0);
  t.prefactor = t.coefficient;
  return t;
}

double TailModel::value(double r) const {
  if (kind == Kind::Algebraic) return coefficient * std::pow(r, -rate_or_power);
  const double nu = nu_of(dimension);
  const double k = rate_or_power;
  const double xm = k * match_radius;
  // Ratio to the match point keeps A r^{-ν} K_ν(kr) finite for any kr.
  return match_value * std::pow(match_radius / r, nu) * std::exp(xm - k * r) *
         bessel::k_scaled(nu, k * r) / bessel::k_scaled(nu, xm);
}

double TailModel::slope(double r) const {
  if (kind == Kind::Algebraic)
    return -rate_or_power * coefficient * std::pow(r, -rate_or_power - 1.0);
  const double nu = nu_of(dimension);
  const double k = rate_or_power;
  const double xm = k * match_radius;
  return -k * match_value * std::pow(match_radius / r, nu) * std::exp(xm - k * r) *
         bessel::k_scaled(nu + 1.0, k * r) / bessel::k_scaled(nu, xm);
}

double RadialProfile::value(double r) const {
  if (r < 0.0) throw InvalidArgument("profile evaluated at negative radius");
  const double r0 = core_radius();
  if (r < r0) {
    const double w = (r / r0) * (r / r0);
    return amplitude + (grid.values.front() - amplitude) * w;
  }
  if (r <= outer_radius()) return grid.at(r).first;
  return tail.value(r);
}

double RadialProfile::slope(double r) const {
  if (r < 0.0) throw InvalidArgument("profile evaluated at negative radius");
  const double r0 = core_radius();
  if (r < r0) return grid.slopes.front() * (r / r0);
  if (r <= outer_radius()) return grid.at(r).second;
  return tail.slope(r);
}

RadialProfile dilate(const RadialProfile& u, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw InvalidArgument("dilate: factors must be positive");
  RadialProfile v = u;
  if (alpha == 1.0 && beta == 1.0) return v;
  v.params.reset();
  v.amplitude *= alpha;
  auto& g = v.grid;
  g.amplitude = v.amplitude;
  for (auto& r : g.radii) r /= beta;
  for (auto& x : g.values) x *= alpha;
  for (auto& x : g.slopes) x *= alpha * beta;
  for (auto& x : g.curvatures) x *= alpha * beta * beta;
  g.terminal_radius /= beta;

  auto& t = v.tail;
  const int N = t.dimension;
  t.match_radius /= beta;
  t.match_value *= alpha;
  if (t.kind == TailModel::Kind::Algebraic) {
    t.coefficient *= alpha * std::pow(beta, 2.0 - N);
    t.prefactor = t.coefficient;
  } else {
    t.coefficient *= alpha * std::pow(beta, -nu_of(N));
    t.rate_or_power *= beta;
    t.prefactor = t.coefficient * std::sqrt(std::numbers::pi / (2.0 * t.rate_or_power));
  }
  v.diagnostics.r_max /= beta;
  v.diagnostics.reliable_radius /= beta;
  return v;
}

}  // namespace gslab
