#include "gslab/quadrature.hpp"

#include <map>
#include <mutex>
#include <numbers>

namespace gslab::quad {

namespace {

GaussRule build_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double tanh_sinh(const std::function<double(double, double)>& g, double a, double b,
                 double rel_tol) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  const double half = 0.5 * (b - a);
  // Nodes reach within ~1e-270 of the endpoints, so integrable endpoint
  // singularities lose nothing measurable to truncation.
  const double t_max = 6.0;

  auto term = [&](double t) {
    const double s = half_pi * std::sinh(t);
    const double e = std::exp(-2.0 * std::abs(s));
    // 1/cosh²(s) and 1 - tanh|s| written without overflow.
    const double w = half_pi * std::cosh(t) * 4.0 * e / ((1.0 + e) * (1.0 + e));
    const double d = 2.0 * e / (1.0 + e);
    const double dist = half * d;
    if (dist <= 0.0) return 0.0;
    const double x = s >= 0.0 ? b - dist : a + dist;
    return w * g(x, dist);
  };

  double h = 1.0;
  double sum = term(0.0);
  for (double t = h; t <= t_max; t += h) sum += term(t) + term(-t);
  double estimate = sum * h * half;
  for (int level = 0; level < 12; ++level) {
    h *= 0.5;
    for (double t = h; t <= t_max; t += 2.0 * h) sum += term(t) + term(-t);
    const double next = sum * h * half;
    if (level >= 2 && std::abs(next - estimate) <= rel_tol * std::abs(next)) return next;
    estimate = next;
  }
  return estimate;
}

double exp_sinh(const std::function<double(double)>& g, double a, double scale, double rel_tol) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  auto term = [&](double t) {
    const double e = std::exp(half_pi * std::sinh(t));
    const double w = half_pi * std::cosh(t) * e;
    const double x = a + scale * e;
    if (!std::isfinite(x) || !std::isfinite(w)) return 0.0;
    const double v = g(x);
    return std::isfinite(v) ? w * v : 0.0;
  };
  const double t_lo = -4.0, t_hi = 4.5;
  double h = 0.5;
  double sum = 0.0;
  for (double t = t_lo; t <= t_hi; t += h) sum += term(t);
  double estimate = sum * h * scale;
  for (int level = 0; level < 12; ++level) {
    h *= 0.5;
    for (double t = t_lo + h; t <= t_hi; t += 2.0 * h) sum += term(t);
    const double next = sum * h * scale;
    if (level >= 2 && std::abs(next - estimate) <= rel_tol * std::abs(next)) return next;
    estimate = next;
  }
  return estimate;
}

double HermitePanel::value(double r) const {
  const double t = (r - r0) / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double h5 = 10 * t3 - 15 * t4 + 6 * t5;
  const double h0 = 1.0 - h5;
  const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const double h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
  const double h3 = 0.5 * t3 - t4 + 0.5 * t5;
  const double h4 = -4 * t3 + 7 * t4 - 3 * t5;
  return h0 * u0 + h5 * u1 + h * (h1 * d0 + h4 * d1) + h * h * (h2 * c0 + h3 * c1);
}

double HermitePanel::slope(double r) const {
  const double t = (r - r0) / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
  const double g5 = 30 * t2 - 60 * t3 + 30 * t4;
  const double g1 = 1.0 - 18 * t2 + 32 * t3 - 15 * t4;
  const double g2 = t - 4.5 * t2 + 6 * t3 - 2.5 * t4;
  const double g3 = 1.5 * t2 - 4 * t3 + 2.5 * t4;
  const double g4 = -12 * t2 + 28 * t3 - 15 * t4;
  return (g5 * (u1 - u0)) / h + (g1 * d0 + g4 * d1) + h * (g2 * c0 + g3 * c1);
}

}  // namespace gslab::quad
