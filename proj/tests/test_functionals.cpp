#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gslab/emden_fowler.hpp"
#include "gslab/errors.hpp"
#include "gslab/functionals.hpp"
#include "gslab/shooting.hpp"

using namespace gslab;

TEST_CASE("sphere areas") {
  constexpr double pi = std::numbers::pi;
  CHECK(sphere_area(3) == doctest::Approx(4 * pi).epsilon(1e-15));
  CHECK(sphere_area(4) == doctest::Approx(2 * pi * pi).epsilon(1e-15));
  CHECK(sphere_area(5) == doctest::Approx(8 * pi * pi / 3).epsilon(1e-15));
}

TEST_CASE("profile norms of the tabulated Emden-Fowler profile against Beta functions") {
  for (int N : {3, 4, 5}) {
    CAPTURE(N);
    const double ps = 2.0 * N / (N - 2.0);
    const double c2 = N * (N - 2.0);
    // ∫U₁^{p*} = ω c^N B(N/2, N/2)/2 and ∫|∇U₁|² equals it.
    const double exact = sphere_area(N) * std::pow(c2, 0.5 * N) * std::beta(0.5 * N, 0.5 * N) / 2.0;
    const auto prof = EmdenFowlerProfile{N, 1.0, EmdenFowlerProfile::Frame::U}.to_profile();
    CHECK(radial_norm(prof, ps) == doctest::Approx(exact).epsilon(1e-9));
    CHECK(dirichlet_norm(prof) == doctest::Approx(exact).epsilon(1e-9));
    const auto b = radial_norm_breakdown(prof, ps);
    CHECK(b.total() == doctest::Approx(b.core + b.grid + b.tail));
    CHECK(b.tail > 0.0);
  }
}

TEST_CASE("norms follow the dilation law") {
  const auto u = find_ground_state({3, 4.0, 6.0, 0.01, Family::P_eps});
  const double alpha = 1.7, beta = 0.6;
  const auto v = dilate(u, alpha, beta);
  for (double s : {2.0, 4.0, 6.0}) {
    CAPTURE(s);
    CHECK(radial_norm(v, s) == doctest::Approx(std::pow(alpha, s) * std::pow(beta, -3.0) * radial_norm(u, s))
                                   .epsilon(1e-12));
  }
  CHECK(dirichlet_norm(v) ==
        doctest::Approx(alpha * alpha * std::pow(beta, 2.0 - 3.0) * dirichlet_norm(u)).epsilon(1e-12));
  CHECK(v.value(1.0) == doctest::Approx(alpha * u.value(beta)).epsilon(1e-14));
}

TEST_CASE("ball mass") {
  const auto u = find_ground_state({3, 4.0, 6.0, 0.01, Family::P_eps});
  const double total = radial_norm(u, 4.0);
  CHECK(ball_mass(u, 4.0, 1e6) == doctest::Approx(total).epsilon(1e-12));
  const double R = 1e-3;
  CHECK(ball_mass(u, 4.0, R) == doctest::Approx(std::pow(u.amplitude, 4) * sphere_area(3) * R * R * R / 3).epsilon(1e-5));
  CHECK(ball_mass(u, 4.0, 2.0) < ball_mass(u, 4.0, 3.0));
}

TEST_CASE("Nehari and Pokhozhaev identities hold for computed ground states") {
  for (const ProblemParams& pp : {ProblemParams{3, 4.0, 6.0, 0.01, Family::P_eps},
                                  ProblemParams{4, 3.0, 5.0, 0.01, Family::P_eps},
                                  ProblemParams{5, 4.0, 6.0, 0.0, Family::P_zero},
                                  ProblemParams{3, 4.0, 6.0, 0.0, Family::R_zero}}) {
    CAPTURE(to_string(pp.family));
    CAPTURE(pp.N);
    const auto sol = evaluate(find_ground_state(pp));
    CHECK(std::abs(sol.nehari_residual) < 1e-6);
    CHECK(std::abs(sol.pokhozhaev_residual) < 1e-6);
    const auto ir = identity_residuals(sol);
    CHECK(ir.nehari == sol.nehari_residual);
    CHECK(sol.energy == doctest::Approx(energy(sol)));
    CHECK(sol.level_S == doctest::Approx(extract_level(sol)));
  }
}

TEST_CASE("negative control: a profile scaled by 1.01 breaks the identities") {
  const auto u = find_ground_state({3, 4.0, 6.0, 0.01, Family::P_eps});
  auto bad = dilate(u, 1.01, 1.0);
  bad.params = u.params;
  const auto sol = evaluate(bad);
  CHECK(std::abs(sol.nehari_residual) > 1e-3);
  auto stretched = dilate(u, 1.0, 1.01);
  stretched.params = u.params;
  CHECK(std::abs(evaluate(stretched).pokhozhaev_residual) > 1e-3);
}

TEST_CASE("minimizer frame normalisation") {
  const ProblemParams pp{4, 3.0, 5.0, 0.01, Family::P_eps};
  const auto sol = evaluate(find_ground_state(pp));
  const auto w = to_minimizer_frame(sol.profile, sol.level_S);
  const auto con = minimizer_constraint(w, pp);
  REQUIRE(con);
  // Both rest on the Pokhozhaev identity, which holds to the solver's 1e-6 contract.
  CHECK(*con == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(dirichlet_norm(w) == doctest::Approx(sol.level_S).epsilon(1e-6));
}

TEST_CASE("closed-form norms of the supercritical limit") {
  const ProblemParams pp{3, 8.0, 12.0, 0.0, Family::P_zero};
  const auto sol = evaluate(find_ground_state(pp));
  const auto w = to_minimizer_frame(sol.profile, sol.level_S);
  const auto L = limit_identities(w, pp);
  CHECK(L.first_expected == doctest::Approx(2.0));
  CHECK(L.second_expected == doctest::Approx(1.0));
  CHECK(std::abs(L.first_residual) < 1e-4);
  CHECK(std::abs(L.second_residual) < 1e-4);
  CHECK(std::isnan(sol.norm_L2_sq));
  CHECK_THROWS_AS(radial_norm(sol.profile, 2.0), DivergenceError);
}

TEST_CASE("critical kappa identity") {
  const ProblemParams pp{5, 10.0 / 3.0, 6.0, 1e-3, Family::P_eps};
  CHECK(kappa(pp.p, pp.q) == doctest::Approx(6.0 * (4.0 / 3.0) / (2.0 * (6.0 - 10.0 / 3.0))));
  const auto sol = evaluate(find_ground_state(pp));
  const auto k = kappa_identities(to_minimizer_frame(sol.profile, sol.level_S), pp);
  CHECK(std::abs(k.residual_q) < 1e-4);
  CHECK(std::abs(k.residual_p) < 1e-4);
  CHECK_THROWS_AS(kappa_identities(sol.profile, {5, 4.0, 6.0, 1e-3, Family::P_eps}), InvalidArgument);
}

TEST_CASE("S_eps is non-decreasing in eps") {
  double prev = -1.0;
  for (double eps : {1e-5, 1e-4, 1e-3, 1e-2}) {
    const double S = evaluate(find_ground_state({5, 10.0 / 3.0, 6.0, eps, Family::P_eps})).level_S;
    CHECK(S > prev - 1e-8);
    CHECK(S > sobolev_constant(5));
    prev = S;
  }
}
