#include <doctest.h>

#include <cmath>
#include <vector>

#include "gslab/asymptotics.hpp"
#include "gslab/emden_fowler.hpp"
#include "gslab/errors.hpp"
#include "gslab/fit.hpp"
#include "gslab/functionals.hpp"

using namespace gslab;

namespace {

SweepSpec critical5() {
  SweepSpec s;
  s.regime = Regime::Critical;
  s.N = 5;
  s.q = 6.0;
  s.grid = {1e-2, 1e-4, 8};
  return s;
}

const ScalingReport& critical5_report() {
  static const ScalingReport rep = sweep(critical5(), 4);
  return rep;
}

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

}  // namespace

TEST_CASE("power-law fits recover synthetic exponents") {
  std::vector<std::pair<double, double>> pure, logged;
  for (int i = 0; i < 12; ++i) {
    const double x = std::pow(10.0, -2.0 - 0.5 * i);
    pure.emplace_back(x, 3.0 * std::pow(x, 0.25));
    logged.emplace_back(x, 2.0 * std::pow(x, 0.2) * std::pow(std::log(1 / x), 0.5));
  }
  const auto f = fit_exponent(pure, false);
  CHECK(f.exponent == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.rms_residual < 1e-12);
  const auto g = fit_exponent(logged, true);
  CHECK(g.exponent == doctest::Approx(0.2).epsilon(1e-10));
  CHECK(g.log_power == doctest::Approx(0.5).epsilon(1e-9));
  // y = (x log 1/x)^{0.2}
  std::vector<std::pair<double, double>> tied;
  for (const auto& [x, y] : pure) tied.emplace_back(x, std::pow(x * std::log(1 / x), 0.2));
  const auto t = fit_tied_log(tied);
  CHECK(t.exponent == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(t.rms_residual < 1e-12);
  CHECK(fit_exponent(tied, false).rms_residual > 10 * t.rms_residual);
}

TEST_CASE("fit preconditions") {
  std::vector<std::pair<double, double>> three{{0.1, 1}, {0.01, 2}, {0.001, 3}};
  CHECK_THROWS_AS(fit_exponent(three, false), IllConditionedFit);
  std::vector<std::pair<double, double>> narrow{{0.1, 1}, {0.09, 2}, {0.08, 3}, {0.07, 4}};
  CHECK_THROWS_AS(fit_exponent(narrow, false), IllConditionedFit);
  std::vector<std::pair<double, double>> big{{10, 1}, {1, 2}, {0.1, 3}, {0.01, 4}};
  CHECK_NOTHROW(fit_exponent(big, false));
  CHECK_THROWS_AS(fit_exponent(big, true), InvalidArgument);
  std::vector<std::pair<double, double>> neg{{0.1, 1}, {0.01, -2}, {0.001, 3}, {1e-4, 4}};
  CHECK_THROWS_AS(fit_exponent(neg, false), InvalidArgument);
}

TEST_CASE("predicted exponents") {
  const auto c5 = predict_exponents(Regime::Critical, 5, 10.0 / 3.0, 6.0);
  CHECK(c5.amplitude->power == doctest::Approx(0.25));
  CHECK(c5.lambda->power == doctest::Approx(-1.0 / 6));
  const auto c3 = predict_exponents(Regime::Critical, 3, 6.0, 10.0);
  CHECK(c3.amplitude->power == doctest::Approx(1.0 / 12));
  CHECK(c3.lambda->power == doctest::Approx(-1.0 / 6));
  const auto c4 = predict_exponents(Regime::Critical, 4, 4.0, 8.0);
  CHECK(c4.lambda->power == doctest::Approx(-1.0 / 6));
  CHECK(c4.lambda->log_power == doctest::Approx(-1.0 / 6));
  CHECK(predict_exponents(Regime::Subcritical, 3, 4.0, 6.0).amplitude->power == doctest::Approx(0.5));
  const auto d12 = predict_exponents(Regime::DeltaSupercritical, 3, 6.0, 12.0).amplitude;
  CHECK(d12->power == doctest::Approx(1.0 / 6));
  CHECK(d12->asserted);
  CHECK_FALSE(predict_exponents(Regime::DeltaSupercritical, 3, 6.0, 7.0).amplitude->asserted);
  CHECK_THROWS_AS(predict_exponents(Regime::Critical, 5, 3.0, 6.0), InvalidArgument);
  CHECK_THROWS_AS(predict_exponents(Regime::Subcritical, 3, 7.0, 8.0), InvalidArgument);
  for (auto r : {Regime::Subcritical, Regime::Critical, Regime::Supercritical, Regime::DeltaSupercritical,
                 Regime::PUpSubcritical})
    CHECK(regime_from_string(to_string(r)) == r);
}

TEST_CASE("grid spec") {
  const GridSpec g{1e-5, 1e-2, 4};
  const auto v = g.values();
  REQUIRE(v.size() == 4);
  CHECK(v.front() == 1e-2);
  CHECK(v.back() == 1e-5);
  CHECK(v[1] == doctest::Approx(1e-3));
  CHECK(g.ratio() == doctest::Approx(10.0));
}

TEST_CASE("concentration of an exact bubble recovers its scale") {
  for (int N : {3, 5}) {
    CAPTURE(N);
    const double mu = 0.35;
    const auto w = EmdenFowlerProfile{N, mu, EmdenFowlerProfile::Frame::W}.to_profile();
    const auto c = concentrate(w, q_star(N));
    CHECK(c.lambda_eps == doctest::Approx(mu).epsilon(1e-9));
    CHECK(c.dist_D1 < 1e-6);
    CHECK(c.dist_Lp < 1e-6);
    CHECK(c.dist_Linf_tail < 1e-8);
    const auto half = dilate(w, 0.5, 1.0);
    CHECK_THROWS_AS(concentration_lambda(half, q_star(N)), NotAsymptotic);
  }
}

TEST_CASE("parallel sweep is bitwise identical to the serial reference") {
  const auto& par = critical5_report();
  const auto ser = sweep_serial(critical5());
  REQUIRE(par.grid.size() == ser.grid.size());
  for (std::size_t i = 0; i < ser.grid.size(); ++i) {
    const auto &a = par.grid[i], &b = ser.grid[i];
    CHECK(a.x == b.x);
    CHECK(a.converged == b.converged);
    CHECK(same(a.amplitude, b.amplitude));
    CHECK(same(a.S, b.S));
    CHECK(same(a.lambda, b.lambda));
    CHECK(same(a.dist_D1, b.dist_D1));
    CHECK(same(a.nehari_residual, b.nehari_residual));
    CHECK(a.integrations == b.integrations);
  }
  CHECK(par.fitted_exponent == ser.fitted_exponent);
}

TEST_CASE("critical sweep diagnostics") {
  const auto& rep = critical5_report();
  const double p = rep.p, q = rep.q;
  double c1 = 1e300, c2 = 0.0;
  for (std::size_t i = 0; i < rep.grid.size(); ++i) {
    const auto& pt = rep.grid[i];
    CAPTURE(pt.x);
    REQUIRE(pt.converged);
    CHECK(pt.sigma > 0.0);
    CHECK(std::abs(pt.kappa_residual) < 1e-6);
    CHECK(std::abs(pt.important_residual) < 1e-6);
    if (i > 0) {
      const auto& prev = rep.grid[i - 1];
      CHECK(pt.sigma < prev.sigma);
      CHECK(pt.S <= prev.S + 1e-8);
      CHECK(pt.dist_D1 < 1.05 * prev.dist_D1);
      CHECK(pt.dist_Lp < 1.05 * prev.dist_Lp);
    }
    c1 = std::min(c1, pt.lambda / std::pow(pt.sigma, -(p - 2) / (2 * (q - p))));
    c2 = std::max(c2, pt.lambda / (std::pow(pt.x, -0.5) * std::sqrt(pt.sigma) / std::sqrt(pt.v_L2_sq)));
  }
  // Two-sided λ bound with sweep-fitted constants.
  CHECK(c1 >= 0.1);
  CHECK(c1 <= 10.0);
  CHECK(c2 >= 0.1);
  CHECK(c2 <= 10.0);
  const auto* amp = rep.fit("amplitude");
  REQUIRE(amp);
  REQUIRE(amp->pure);
  CHECK(amp->pure->points == rep.grid.size() - 2);
}

TEST_CASE("fit window rules") {
  auto rep = critical5_report();
  rep.grid[4].converged = false;
  FitWindow w;
  w.drop_largest = 0;
  refit(rep, w);
  CHECK(rep.fit("amplitude")->pure->points == rep.grid.size() - 1);
  w.x_max = 2e-3;
  refit(rep, w);
  CHECK(rep.fit("amplitude")->pure->x_max <= 2e-3);
  rep.grid[5].nehari_residual = 1e-3;
  refit(rep, w);
  CHECK(rep.fit("amplitude")->pure->points < rep.grid.size() - 3);
}

TEST_CASE("sweep argument errors") {
  auto s = critical5();
  s.grid = {1e-2, 1e-6, 8};
  CHECK_THROWS_AS(sweep(s), InvalidArgument);
  s.grid = {1e-2, 1e-3, 4};
  CHECK_THROWS_AS(sweep(s), InvalidArgument);
  s = critical5();
  s.regime = Regime::Supercritical;
  s.p = 3.0;
  CHECK_THROWS_AS(sweep(s), InvalidArgument);
}
