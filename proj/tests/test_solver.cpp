#include <doctest.h>

#include <cmath>
#include <numbers>

#include "caplab/solver.hpp"

using namespace caplab;

namespace {

// Independent oracle: first positive zero of J0 by bisection on the library
// Bessel function, squared for the principal Dirichlet eigenvalue of the
// unit disk.
double bessel_j0_first_root() {
  double lo = 2.0, hi = 3.0;
  REQUIRE(std::cyl_bessel_j(0.0, lo) > 0);
  REQUIRE(std::cyl_bessel_j(0.0, hi) < 0);
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (std::cyl_bessel_j(0.0, mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double poisson_disk_error(double h) {
  const Domain disk = Domain::disk(Vec2::Zero(), 1.0, 0.5);
  const GridFunction skel = make_grid_function(disk, h);
  const NewtonResult res = solve_semilinear(disk, make_constant(1.0, 3), h, skel, 1e-12);
  REQUIRE(res.converged);
  double err = 0.0;
  for (int j = 0; j < res.u.grid.ny; ++j)
    for (int i = 0; i < res.u.grid.nx; ++i) {
      if (!res.u.is_interior(i, j)) continue;
      const Vec2 x = res.u.grid.node(i, j);
      err = std::max(err, std::abs(res.u.at(i, j) - 0.25 * (1.0 - x.squaredNorm())));
    }
  return err;
}

}  // namespace

TEST_CASE("constant source on the disk reproduces the parabolic profile") {
  // The 5-point stencil is exact on quadratics, so only rounding remains.
  const double err = poisson_disk_error(1.0 / 64);
  CHECK(err < 1e-10);
}

TEST_CASE("disk eigenvalue converges at second order") {
  const double exact = bessel_j0_first_root() * bessel_j0_first_root();
  const Domain disk = Domain::disk(Vec2::Zero(), 1.0, 0.5);
  const double e1 = std::abs(principal_eigenpair(disk, 1.0 / 32, 1e-12).lambda1 - exact);
  const double e2 = std::abs(principal_eigenpair(disk, 1.0 / 64, 1e-12).lambda1 - exact);
  const double ratio = e1 / e2;
  CHECK(ratio >= 3.4);
  CHECK(ratio <= 4.6);
}

TEST_CASE("square principal eigenvalue approaches 2 pi^2") {
  const Domain sq = Domain::rectangle(Vec2(0, 0), Vec2(1, 1), 0.25);
  const EigenPair ep = principal_eigenpair(sq, 1.0 / 64, 1e-11);
  const double exact = 2.0 * std::numbers::pi * std::numbers::pi;
  CHECK(std::abs(ep.lambda1 - exact) / exact < 0.005);
  CHECK(ep.phi1.max_interior() == doctest::Approx(1.0));  // max-normalized
  CHECK(ep.phi1.min_interior() > 0.0);                    // positive mode
}

TEST_CASE("disk principal eigenvalue matches the Bessel oracle") {
  const double j01 = bessel_j0_first_root();
  const Domain disk = Domain::disk(Vec2::Zero(), 1.0, 0.5);
  const EigenPair ep = principal_eigenpair(disk, 1.0 / 64, 1e-11);
  CHECK(std::abs(ep.lambda1 - j01 * j01) / (j01 * j01) < 0.005);
}

TEST_CASE("eigen solve refuses under-resolved grids") {
  const Domain disk = Domain::disk(Vec2::Zero(), 1.0, 0.5);
  CHECK_THROWS_AS(principal_eigenpair(disk, 0.25, 1e-10), SolverError);
}

TEST_CASE("semilinear sweep finds a positive solution for the quadratic source") {
  const Domain disk = Domain::disk(Vec2::Zero(), 1.0, 0.5);
  const NewtonResult res =
      solve_semilinear_sweep(disk, make_power(2.0, 3), 1.0 / 48, {1.0, 2.0, 4.0, 8.0}, 1e-9);
  CHECK(res.converged);
  CHECK(res.positive);
  CHECK(res.residual < 1e-8);
  CHECK(res.u.max_interior() > 1.0);
  // Discrete residual check with an independent 5-point stencil away from
  // the boundary: -Delta_h u ~ u^2.
  const double h = res.u.grid.h;
  double worst = 0.0;
  for (int j = 2; j < res.u.grid.ny - 2; ++j)
    for (int i = 2; i < res.u.grid.nx - 2; ++i) {
      if (!res.u.is_interior(i, j) || !res.u.is_interior(i - 1, j) ||
          !res.u.is_interior(i + 1, j) || !res.u.is_interior(i, j - 1) ||
          !res.u.is_interior(i, j + 1))
        continue;
      const double lap = (res.u.at(i + 1, j) + res.u.at(i - 1, j) + res.u.at(i, j + 1) +
                          res.u.at(i, j - 1) - 4 * res.u.at(i, j)) /
                         (h * h);
      worst = std::max(worst, std::abs(-lap - res.u.at(i, j) * res.u.at(i, j)));
    }
  CHECK(worst < 1e-6);
}

TEST_CASE("zero initial guess converges to the trivial branch and is reported") {
  const Domain disk = Domain::disk(Vec2::Zero(), 1.0, 0.5);
  GridFunction zero = make_grid_function(disk, 1.0 / 32);
  const NewtonResult res = solve_semilinear(disk, make_power(2.0, 3), 1.0 / 32, zero, 1e-10);
  CHECK(res.converged);
  CHECK(!res.positive);
}

TEST_CASE("critical point detection flags a planted saddle and clears a cone") {
  const Domain disk = Domain::disk(Vec2::Zero(), 1.0, 0.5);
  const double h = 1.0 / 64;
  GridFunction u = make_grid_function(disk, h);
  for (int j = 0; j < u.grid.ny; ++j)
    for (int i = 0; i < u.grid.nx; ++i) {
      const Vec2 x = u.grid.node(i, j);
      const int idx = u.grid.index(i, j);
      if (u.interior[idx]) u.value[idx] = x.x() * x.x() - x.y() * x.y();  // saddle at 0
    }
  RegionMask region = u.interior_mask();
  const CriticalPointReport rep = critical_points(u, region, 1e-2);
  CHECK(!rep.nodes.empty());
  bool found_origin = false;
  for (const auto& [i, j] : rep.nodes)
    if (u.grid.node(i, j).norm() < 3 * h) found_origin = true;
  CHECK(found_origin);

  // A strictly monotone field has no flagged nodes away from scale.
  for (int j = 0; j < u.grid.ny; ++j)
    for (int i = 0; i < u.grid.nx; ++i) {
      const int idx = u.grid.index(i, j);
      if (u.interior[idx]) u.value[idx] = u.grid.node(i, j).x();
    }
  const CriticalPointReport mono = critical_points(u, region, 1e-3);
  CHECK(mono.nodes.empty());
  CHECK(mono.min_grad > 0.9);
}
