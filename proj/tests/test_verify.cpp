#include <doctest.h>

#include <cmath>

#include "caplab/radial.hpp"
#include "caplab/verify.hpp"

using namespace caplab;

namespace {

ScalarField disk_poisson_field() {
  // u = (1 - |x|^2)/4 solves -Delta u = 1 on the unit disk in the plane.
  return ScalarField::analytic([](const Vec2& x) { return 0.25 * (1.0 - x.squaredNorm()); },
                               [](const Vec2& x) { return Vec2(-0.5 * x); });
}

}  // namespace

TEST_CASE("planar parabolic profile passes cap monotonicity with the exact margin") {
  const Domain disk = Domain::disk(Vec2::Zero(), 1.0, 0.5);
  const double h = 1.0 / 64;
  const CapSpec cap = compute_lambda_star(disk, Vec2(1, 0), h, 1e-2 * h);
  const CheckReport rep = check_cap_monotonicity(disk_poisson_field(), disk, cap, h, 1e-9);
  CHECK(rep.pass);
  CHECK(rep.violations.empty());

  // du/dx1 = -x1/2, so on {x1 < -eps} the normal derivative is at least eps/2.
  const double eps = 0.25;
  double min_deriv = 1e300;
  const RegionMask mask = interior_mask(disk, h);
  const ScalarField u = disk_poisson_field();
  for (int j = 0; j < mask.grid.ny; ++j)
    for (int i = 0; i < mask.grid.nx; ++i) {
      if (!mask.at(i, j)) continue;
      const Vec2 x = mask.grid.node(i, j);
      if (x.x() >= -eps) continue;
      min_deriv = std::min(min_deriv, u.grad(x)->x());
    }
  CHECK(std::abs(min_deriv - eps / 2) <= 2 * h);
}

TEST_CASE("a synthetic saddle inside the cap is caught with its location") {
  const Domain disk = Domain::disk(Vec2::Zero(), 1.0, 0.5);
  const double h = 1.0 / 64;
  // Oscillation in x1 modulated by a boundary bump: not a solution, and not
  // cap-monotone.
  const ScalarField bad = ScalarField::analytic(
      [](const Vec2& x) {
        return std::sin(2.0 * 3.141592653589793 * x.x()) * (1.0 - x.squaredNorm());
      },
      [](const Vec2& x) {
        const double pi = 3.141592653589793;
        const double b = 1.0 - x.squaredNorm();
        return Vec2(2 * pi * std::cos(2 * pi * x.x()) * b -
                        2 * x.x() * std::sin(2 * pi * x.x()),
                    -2 * x.y() * std::sin(2 * pi * x.x()));
      });
  const CapSpec cap = compute_lambda_star(disk, Vec2(1, 0), h, 1e-2 * h);
  const CheckReport rep = check_cap_monotonicity(bad, disk, cap, h, 1e-6);
  CHECK(!rep.pass);
  CHECK(!rep.violations.empty());
}

TEST_CASE("degenerate caps are refused") {
  const Domain disk = Domain::disk(Vec2::Zero(), 1.0, 0.5);
  CapSpec cap;
  cap.degenerate = true;
  CHECK_THROWS_AS(check_cap_monotonicity(disk_poisson_field(), disk, cap, 1.0 / 32, 1e-6),
                  VerifyError);
}

TEST_CASE("max location: disk max sits at the center, inside the complement") {
  const Domain disk = Domain::disk(Vec2::Zero(), 1.0, 0.5);
  const double h = 1.0 / 64;
  const RegionMask star = optimal_cap_set(disk, h, 16, 1e-2 * h);
  const CheckReport rep = check_max_location(disk_poisson_field(), disk, star, 1e-9);
  CHECK(rep.pass);
  CHECK(std::abs(rep.margin) <= 1e-12);
  const auto& arg = rep.params.at("argmax_complement");
  CHECK(std::abs(arg[0].get<double>()) <= 2 * h);
  CHECK(std::abs(arg[1].get<double>()) <= 2 * h);
}

TEST_CASE("max location: annulus profile peaks in the inner half-shell") {
  const Domain ann = Domain::annulus(Vec2::Zero(), 1.0, 2.0, 0.5);
  const double h = 1.0 / 64;
  const RadialSolution sol = solve_radial_annulus(3, make_power(3.0, 3), 1.0, 2.0, 1e-10);
  const ScalarField u = ScalarField::from_radial(sol, Vec2::Zero());
  const RegionMask star = optimal_cap_set(ann, h, 16, 1e-2 * h);
  const CheckReport rep = check_max_location(u, ann, star, 5e-2 * sol.max_value());
  CHECK(rep.pass);
  const double rmax = sol.argmax_radius();
  CHECK(rmax > 1.0);
  CHECK(rmax <= 1.5 + 2 * h);
}

TEST_CASE("global bound margin is monotone in delta and records the frontier") {
  const Domain disk = Domain::disk(Vec2::Zero(), 1.0, 0.5);
  const ScalarField u = disk_poisson_field();
  const double C = 10.0;
  double prev_margin = 1e300;
  for (double delta : {0.05, 0.15, 0.3, 0.5}) {
    const CheckReport rep = check_global_bound(u, disk, delta, C, 1.0 / 64);
    CHECK(rep.pass);
    CHECK(rep.margin <= prev_margin + 1e-12);
    prev_margin = rep.margin;
    CHECK(rep.params.at("delta_max_passing").get<double>() >= delta);
  }
  CHECK_THROWS_AS(check_global_bound(u, disk, 1.5, C, 1.0 / 64), VerifyError);
}

TEST_CASE("interior-max profiles give ratio one") {
  const Domain disk = Domain::disk(Vec2::Zero(), 1.0, 0.5);
  const CheckReport rep = check_global_bound(disk_poisson_field(), disk, 0.25, 10.0, 1.0 / 64);
  CHECK(rep.params.at("ratio").get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.margin == doctest::Approx(9.0).epsilon(1e-9));
}

TEST_CASE("transformed solutions keep a critical-point-free cap near the touch point") {
  const Domain disk = Domain::disk(Vec2::Zero(), 1.0, 0.5);
  const RadialSolution sol = solve_radial_ball(3, make_constant(1.0, 3), 1.0, 1e-10);
  const ScalarField u = ScalarField::from_radial(sol, Vec2::Zero());
  const double h_out = 0.005;
  const CheckReport rep =
      check_kelvin_no_critical(u, disk, Vec2(1, 0), make_constant(1.0, 3), 3, h_out);
  CHECK(rep.pass);
  const double min_grad = rep.params.at("min_grad").get<double>();
  const double max_grad = rep.params.at("max_grad").get<double>();
  CHECK(min_grad >= 10.0 * h_out * max_grad);
  CHECK(rep.params.at("delta_max").get<double>() > 0.0);
}

TEST_CASE("reflection monotonicity of the transformed source term") {
  const Domain ann = Domain::annulus(Vec2::Zero(), 1.0, 2.0, 0.5);
  const KelvinFrame frame = build_frame(ann, Vec2(1, 0), 0.5);
  const TransformedDomain tdom = transform_domain(ann, frame);
  const CapSpec cap = compute_lambda_star(tdom.domain, Vec2(-1, 0), 0.005, 5e-5);

  // Critical power: exact invariance, margin ~ 0.
  const CheckReport crit =
      check_g_reflection(make_power(5.0, 3), tdom, cap, 3, 1000, 1e-9);
  CHECK(crit.pass);
  CHECK(std::abs(crit.margin) <= 1e-9);

  // Subcritical-type quotient: strictly positive margin.
  const CheckReport logc =
      check_g_reflection(make_log_critical(3), tdom, cap, 3, 1000, 1e-9);
  CHECK(logc.pass);
  CHECK(logc.margin >= 0.0);

  // Exponential growth: violations found.
  const CheckReport bad = check_g_reflection(make_exponential(3), tdom, cap, 3, 1000, 1e-9);
  CHECK(!bad.pass);
  CHECK(!bad.violations.empty());
}

TEST_CASE("boundedness table: in-hypothesis presets are finite, critical power is flagged") {
  std::vector<Nonlinearity> family = {make_power(2.0, 3), make_power(2.5, 3),
                                      make_power(3.0, 3), make_power(4.0, 3),
                                      make_staircase(2.0, 3.0, 2.0, 3, 6),
                                      make_power(5.0, 3)};
  const BoundednessTable table = boundedness_experiment(3, 1.0, family, 0.1, 1e-9);
  REQUIRE(table.rows.size() == 6);
  for (size_t k = 0; k + 1 < table.rows.size(); ++k) {
    CHECK(table.rows[k].solved);
    CHECK(std::isfinite(table.rows[k].sup_norm));
    CHECK(table.rows[k].sup_norm > 0.0);
    CHECK(table.rows[k].ratio_delta >= 1.0);
  }
  CHECK(!table.rows.back().solved);
  CHECK(table.rows.back().out_of_hypothesis);
}

TEST_CASE("boundedness experiment refuses an all-failing family") {
  std::vector<Nonlinearity> family = {make_power(5.0, 3)};
  CHECK_THROWS_AS(boundedness_experiment(3, 1.0, family, 0.1, 1e-8), VerifyError);
}

TEST_CASE("radial field adapters agree with the profile") {
  const RadialSolution sol = solve_radial_ball(3, make_constant(1.0, 3), 1.0, 1e-10);
  const ScalarField u = ScalarField::from_radial(sol, Vec2::Zero());
  CHECK(*u.eval(Vec2(0.3, 0.4)) == doctest::Approx((1.0 - 0.25) / 6).epsilon(1e-6));
  CHECK(!u.eval(Vec2(1.2, 0)).has_value());
  const Vec2 g = *u.grad(Vec2(0.3, 0.4));
  CHECK(g.norm() == doctest::Approx(0.5 / 3).epsilon(1e-3));  // |u'(0.5)| = r/3
}
