#include "gslab/params.hpp"

#include <cmath>

#include "gslab/errors.hpp"

namespace gslab {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::P_eps:
      return "P_eps";
    case Family::P_zero:
      return "P_zero";
    case Family::R_zero:
      return "R_zero";
    case Family::R_eps:
      return "R_eps";
  }
  return "?";
}

Family family_from_string(std::string_view s) {
  if (s == "P_eps") return Family::P_eps;
  if (s == "P_zero") return Family::P_zero;
  if (s == "R_zero") return Family::R_zero;
  if (s == "R_eps") return Family::R_eps;
  throw InvalidArgument("unknown family '" + std::string(s) + "'");
}

void ProblemParams::validate() const {
  if (N < 3) throw InvalidArgument("dimension N must be >= 3");
  if (!std::isfinite(p) || !std::isfinite(q) || !std::isfinite(eps))
    throw InvalidArgument("exponents and eps must be finite");
  if (!(p > 2.0)) throw InvalidArgument("p must exceed 2");
  if (!(q > p)) throw InvalidArgument("q must exceed p");
  if (eps < 0.0) throw InvalidArgument("eps must be non-negative");
  switch (family) {
    case Family::P_zero:
      if (eps != 0.0) throw InvalidArgument("family P_zero requires eps = 0");
      if (!(p > p_star())) throw InvalidArgument("family P_zero requires p > p*");
      break;
    case Family::R_zero:
      if (eps != 0.0) throw InvalidArgument("family R_zero requires eps = 0");
      if (!(p < p_star())) throw InvalidArgument("family R_zero requires p < p*");
      break;
    case Family::P_eps:
    case Family::R_eps:
      break;
  }
}

double ProblemParams::r_coupling() const {
  if (family == Family::R_zero || eps == 0.0) return 0.0;
  return std::pow(eps, (q - p) / (p - 2.0));
}

double ProblemParams::decay_rate() const {
  switch (family) {
    case Family::P_eps:
      return std::sqrt(eps);
    case Family::P_zero:
      return 0.0;
    case Family::R_zero:
    case Family::R_eps:
      return 1.0;
  }
  return 0.0;
}

Nonlinearity::Nonlinearity(const ProblemParams& params) {
  auto push = [this](double e, double c) {
    if (c != 0.0) terms_[count_++] = PowerTerm{e, c};
  };
  switch (params.family) {
    case Family::P_eps:
    case Family::P_zero:
      push(params.p, 1.0);
      push(params.q, -1.0);
      push(2.0, -params.eps);
      break;
    case Family::R_zero:
    case Family::R_eps:
      push(params.p, 1.0);
      push(2.0, -1.0);
      push(params.q, -params.r_coupling());
      break;
  }
}

double Nonlinearity::f(double u) const {
  const double a = std::abs(u);
  double s = 0.0;
  for (std::size_t i = 0; i < count_; ++i) {
    const auto& t = terms_[i];
    s += t.coeff * (t.exponent == 2.0 ? a : std::pow(a, t.exponent - 1.0));
  }
  return u < 0.0 ? -s : s;
}

double Nonlinearity::df(double u) const {
  const double a = std::abs(u);
  double s = 0.0;
  for (std::size_t i = 0; i < count_; ++i) {
    const auto& t = terms_[i];
    s += t.coeff * (t.exponent - 1.0) *
         (t.exponent == 2.0 ? 1.0 : std::pow(a, t.exponent - 2.0));
  }
  return s;
}

double Nonlinearity::F(double u) const {
  const double a = std::abs(u);
  double s = 0.0;
  for (std::size_t i = 0; i < count_; ++i) {
    const auto& t = terms_[i];
    s += t.coeff * std::pow(a, t.exponent) / t.exponent;
  }
  return s;
}

namespace {

// g(u) = u^{p-2} - b u^{q-2} - c, a single-humped function on (0, ∞) for
// b > 0. Both f(u)/u and 2F(u)/u² (with rescaled b, c) have this shape.
struct Hump {
  double p, q, b, c;
  double operator()(double u) const {
    return std::pow(u, p - 2.0) - b * std::pow(u, q - 2.0) - c;
  }
  double argmax() const { return std::pow((p - 2.0) / ((q - 2.0) * b), 1.0 / (q - p)); }
};

template <class G>
double bisect_root(const G& g, double lo, double hi) {
  double glo = g(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

EquilibriumStructure equilibria(const ProblemParams& params) {
  params.validate();
  const double p = params.p;
  const double q = params.q;
  double b = 0.0;  // weight of the u^{q-2} term in f(u)/u
  double c = 0.0;  // constant term in f(u)/u
  switch (params.family) {
    case Family::P_eps:
    case Family::P_zero:
      b = 1.0;
      c = params.eps;
      break;
    case Family::R_zero:
    case Family::R_eps:
      b = params.r_coupling();
      c = 1.0;
      break;
  }

  EquilibriumStructure eq;
  if (b == 0.0) {
    // R_zero: f(v)/v = v^{p-2} - 1, F(v)/v² = v^{p-2}/p - 1/2.
    eq.beta1 = 1.0;
    eq.zeta1 = std::pow(p / 2.0, 1.0 / (p - 2.0));
    return eq;
  }

  const Hump hf{p, q, b, c};
  const Hump hF{p, q, b * p / q, c * p / 2.0};  // p·F(u)/u²
  const double uf = hf.argmax();
  if (hf(uf) > 0.0) {
    eq.beta1 = c == 0.0 ? 0.0 : bisect_root(hf, 0.0, uf);
    double hi = 2.0 * uf;
    while (hf(hi) > 0.0) hi *= 2.0;
    eq.beta2 = bisect_root(hf, uf, hi);
  }
  const double uF = hF.argmax();
  if (hF(uF) > 0.0) eq.zeta1 = c == 0.0 ? 0.0 : bisect_root(hF, 0.0, uF);
  return eq;
}

double epsilon_star(double p, double q) {
  if (!(p > 2.0) || !(q > p)) throw InvalidArgument("epsilon_star requires q > p > 2");
  // F = f = 0 at u: u^{q-p} = q(p-2)/(p(q-2)), then ε = u^{p-2} - u^{q-2}.
  const double t = q * (p - 2.0) / (p * (q - 2.0));
  const double u = std::pow(t, 1.0 / (q - p));
  return std::pow(u, p - 2.0) * (1.0 - t);
}

}  // namespace gslab
