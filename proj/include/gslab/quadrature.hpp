#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace gslab::quad {

/// Gauss–Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule with n points (computed once by Newton iteration).
const GaussRule& gauss_legendre(int n);

/// ∫_a^b g with a single n-point Gauss–Legendre panel.
template <class G>
double gauss(const G& g, double a, double b, int n = 8) {
  const auto& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * g(mid + half * rule.nodes[i]);
  return s * half;
}

/// Tanh–sinh quadrature on [a, b]; tolerant of integrable endpoint
/// singularities. The integrand receives (x, distance to nearest endpoint)
/// so that singular factors can be evaluated without cancellation.
double tanh_sinh(const std::function<double(double, double)>& g, double a, double b,
                 double rel_tol = 1e-14);

/// Exp–sinh quadrature on [a, ∞) with x = a + scale·exp(π/2·sinh t).
double exp_sinh(const std::function<double(double)>& g, double a, double scale,
                double rel_tol = 1e-14);

/// Quintic Hermite interpolation on one panel from value, first and second
/// derivative at both ends.
struct HermitePanel {
  double r0, h;
  double u0, d0, c0;
  double u1, d1, c1;

  double value(double r) const;
  double slope(double r) const;
};

}  // namespace gslab::quad
