#include <doctest.h>

#include <cmath>

#include "caplab/radial.hpp"

using namespace caplab;

TEST_CASE("constant source on the ball gives the exact parabolic profile") {
  // u = (1 - r^2)/6 solves u'' + (2/r) u' + 1 = 0, u(1) = 0, u'(0) = 0.
  const RadialSolution sol = solve_radial_ball(3, make_constant(1.0, 3), 1.0, 1e-10);
  CHECK(sol.kind == RadialSolution::Kind::ball);
  CHECK(sol.max_value() == doctest::Approx(1.0 / 6).epsilon(1e-6));
  CHECK(sol.argmax_radius() == doctest::Approx(0.0).epsilon(1e-3));
  for (double r : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    CHECK(sol.eval(r) == doctest::Approx((1.0 - r * r) / 6).epsilon(1e-7));
    CHECK(sol.deval(r) == doctest::Approx(-r / 3).epsilon(1e-4));
  }
  CHECK(std::abs(sol.eval(1.0)) < 1e-9);
}

TEST_CASE("profile derivative is consistent with finite differences of the values") {
  const RadialSolution sol = solve_radial_ball(3, make_power(3.0, 3), 1.0, 1e-10);
  for (double r : {0.2, 0.4, 0.6, 0.8}) {
    const double eps = 1e-5;
    const double fd = (sol.eval(r + eps) - sol.eval(r - eps)) / (2 * eps);
    CHECK(sol.deval(r) == doctest::Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("cubic ball solution satisfies the radial equation") {
  const Nonlinearity f = make_power(3.0, 3);
  const RadialSolution sol = solve_radial_ball(3, f, 1.0, 1e-10);
  // Independent check: second difference of the interpolant against the ODE.
  double worst = 0.0;
  for (double r = 0.1; r < 0.9; r += 0.05) {
    const double eps = 1e-4;
    const double upp = (sol.eval(r + eps) - 2 * sol.eval(r) + sol.eval(r - eps)) / (eps * eps);
    const double res = upp + 2.0 / r * sol.deval(r) + f(sol.eval(r));
    worst = std::max(worst, std::abs(res));
  }
  CHECK(worst < 1e-2);
  CHECK(std::abs(sol.eval(1.0)) < 1e-8);
  CHECK(sol.max_value() > 0.0);
}

TEST_CASE("annulus profile vanishes at both radii and peaks inside") {
  const RadialSolution sol =
      solve_radial_annulus(3, make_power(3.0, 3), 1.0, 2.0, 1e-10);
  CHECK(sol.kind == RadialSolution::Kind::annulus);
  CHECK(std::abs(sol.eval(1.0)) < 1e-9);
  CHECK(std::abs(sol.eval(2.0)) < 1e-8);
  const double rmax = sol.argmax_radius();
  CHECK(rmax > 1.0);
  CHECK(rmax < 1.5 + 1e-6);  // interior max sits in the inner half-shell
  CHECK(sol.max_value() > 1.0);
}

TEST_CASE("critical power on the ball has no shooting bracket") {
  CHECK_THROWS_WITH_AS(solve_radial_ball(3, make_power(5.0, 3), 1.0, 1e-8),
                       doctest::Contains("no positive solution bracketed"), SolverError);
}

TEST_CASE("subcritical powers and the staircase all produce bounded profiles") {
  for (double p : {2.0, 2.5, 3.0, 4.0}) {
    const RadialSolution sol = solve_radial_ball(3, make_power(p, 3), 1.0, 1e-9);
    CHECK(std::isfinite(sol.max_value()));
    CHECK(sol.max_value() > 0.0);
  }
  const RadialSolution st = solve_radial_ball(3, make_staircase(2.0, 3.0, 2.0, 3, 6), 1.0, 1e-9);
  CHECK(std::isfinite(st.max_value()));
  CHECK(st.max_value() > 0.0);
}

TEST_CASE("ball profiles are radially decreasing") {
  const RadialSolution sol = solve_radial_ball(3, make_power(2.0, 3), 1.0, 1e-9);
  double prev = sol.eval(0.0);
  for (double r = 0.02; r <= 1.0; r += 0.02) {
    const double cur = sol.eval(r);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}
