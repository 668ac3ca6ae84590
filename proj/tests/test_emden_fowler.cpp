#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gslab/emden_fowler.hpp"
#include "gslab/errors.hpp"
#include "gslab/functionals.hpp"

using namespace gslab;

namespace {

// Best Sobolev constant π N(N-2) (Γ(N/2)/Γ(N))^{2/N}.
double sobolev_gamma(int N) {
  return std::numbers::pi * N * (N - 2.0) * std::pow(std::tgamma(0.5 * N) / std::tgamma(N), 2.0 / N);
}

}  // namespace

TEST_CASE("Sobolev constant: quadrature routes and Gamma-function closed form") {
  for (int N : {3, 4, 5, 6}) {
    CAPTURE(N);
    const auto r = sobolev_routes(N);
    CHECK(std::abs(r.from_dirichlet - r.from_norm) < 1e-8 * r.from_norm);
    CHECK(sobolev_constant(N) == doctest::Approx(sobolev_gamma(N)).epsilon(1e-12));
  }
  CHECK(sobolev_constant(3) == doctest::Approx(3 * std::pow(std::numbers::pi / 2, 4.0 / 3)).epsilon(1e-14));
  CHECK_THROWS_AS(sobolev_constant(2), InvalidArgument);
}

TEST_CASE("U and W profiles") {
  for (int N : {3, 4, 5, 6}) {
    CAPTURE(N);
    const double ps = 2.0 * N / (N - 2.0);
    CHECK(eval_U(N, 1.0, 0.0) == 1.0);
    CHECK(eval_W(N, 1.0, 0.0) == 1.0);
    CHECK(std::pow(w_norm(N, 1.0, ps), 1.0 / ps) == doctest::Approx(1.0).epsilon(1e-10));
    for (auto frame : {EmdenFowlerProfile::Frame::U, EmdenFowlerProfile::Frame::W}) {
      const EmdenFowlerProfile P{N, 0.7, frame};
      double worst = 0.0;
      for (int i = 0; i < 100; ++i) {
        const double r = std::pow(10.0, -3.0 + 6.0 * i / 99.0);
        worst = std::max(worst, std::abs(P.ode_residual(r)));
      }
      CHECK(worst < 1e-10);
    }
    const double r = 1.3, h = 1e-5;
    CHECK(eval_U_slope(N, 0.8, r) ==
          doctest::Approx((eval_U(N, 0.8, r + h) - eval_U(N, 0.8, r - h)) / (2 * h)).epsilon(1e-8));
    CHECK(eval_U_curvature(N, 0.8, r) ==
          doctest::Approx((eval_U_slope(N, 0.8, r + h) - eval_U_slope(N, 0.8, r - h)) / (2 * h)).epsilon(1e-8));
  }
}

TEST_CASE("norm scaling in lambda and divergence") {
  const int N = 5;
  const double s = 4.0;
  CHECK(u_norm(N, 2.0, s) == doctest::Approx(std::pow(2.0, N - 0.5 * s * (N - 2)) * u_norm(N, 1.0, s)));
  CHECK_THROWS_AS(u_norm(3, 1.0, 2.0), DivergenceError);
  CHECK_THROWS_AS(u_norm(4, 1.0, 2.0), DivergenceError);
  CHECK_NOTHROW(u_norm(5, 1.0, 2.0));
}

TEST_CASE("concentration level Q*") {
  for (int N : {3, 4, 5, 6}) {
    CAPTURE(N);
    const double ps = 2.0 * N / (N - 2.0);
    const double S = sobolev_constant(N);
    const double total = u_norm(N, 1.0, ps);
    for (double R : {0.3, 2.0, 40.0})
      CHECK(u1_ball_mass(N, R) + u1_exterior_mass(N, R) == doctest::Approx(total).epsilon(1e-13));
    // Generic ball_mass on the tabulated W₁.
    const auto W = EmdenFowlerProfile{N, 1.0, EmdenFowlerProfile::Frame::W}.to_profile();
    CHECK(q_star(N) == doctest::Approx(ball_mass(W, ps, 1.0)).epsilon(1e-9));
    CHECK(q0(N, 2.0) == doctest::Approx(u1_ball_mass(N, std::sqrt(S) / 2.0) / std::pow(S, 0.5 * N)));
    CHECK(q_star(N) > 0.0);
    CHECK(q_star(N) < 1.0);
  }
}
