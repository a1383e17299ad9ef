#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "caplab/geometry.hpp"

using namespace caplab;

TEST_CASE("reflection is an involution and fixes the plane") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    const Vec2 x(d(rng), d(rng));
    const double th = d(rng);
    const Vec2 nu(std::cos(th), std::sin(th));
    const double lambda = d(rng);
    const Vec2 xl = reflect_point(x, nu, lambda);
    CHECK((reflect_point(xl, nu, lambda) - x).norm() == doctest::Approx(0.0).epsilon(1e-12));
    // Midpoint lies on the plane.
    CHECK((0.5 * (x + xl)).dot(nu) == doctest::Approx(lambda).epsilon(1e-12));
  }
  CHECK_THROWS_AS(reflect_point(Vec2(1, 0), Vec2(2, 0), 0.0), GeometryError);
}

TEST_CASE("inversion is an involution away from the origin") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    Vec2 x(d(rng), d(rng));
    if (x.norm() < 1e-3) continue;
    CHECK((invert_point(invert_point(x)) - x).norm() < 1e-12 * x.norm());
    CHECK(invert_point(x).norm() == doctest::Approx(1.0 / x.norm()));
  }
  CHECK_THROWS_AS(invert_point(Vec2(0, 0)), GeometryError);
}

TEST_CASE("disk sweep terminates at the center plane") {
  const Domain disk = Domain::disk(Vec2::Zero(), 1.0, 0.5);
  const double h = 1.0 / 64;
  const CapSpec cap = compute_lambda_star(disk, Vec2(1, 0), h, 1e-2 * h);
  CHECK(cap.lambda0 == doctest::Approx(-1.0).epsilon(1e-2));
  CHECK(std::abs(cap.lambda_star) <= 2 * h);
  CHECK(!cap.degenerate);
}

TEST_CASE("annulus sweep stops when reflected caps reach the hole") {
  const Domain ann = Domain::annulus(Vec2::Zero(), 1.0, 2.0, 0.5);
  const double h = 1.0 / 64;
  const CapSpec cap = compute_lambda_star(ann, Vec2(1, 0), h, 1e-2 * h);
  CHECK(cap.lambda0 == doctest::Approx(-2.0).epsilon(1e-2));
  // Oracle: the leftmost outer-boundary point (-2, 0) reflects to
  // (2*lambda + 2, 0), which enters the hole for lambda > -1.5.
  CHECK(std::abs(cap.lambda_star - (-1.5)) <= 2 * h);
}

TEST_CASE("brute-force containment scan agrees with the bisection result") {
  // Independent oracle: direct dense scan over lambda, testing every
  // reflected interior node and boundary point against the signed distance.
  const Domain ann = Domain::annulus(Vec2::Zero(), 1.0, 2.0, 0.5);
  const double h = 1.0 / 48;
  const Vec2 nu = Vec2(1, 1).normalized();
  const RegionMask mask = interior_mask(ann, h);

  auto cap_ok = [&](double lambda) {
    for (int j = 0; j < mask.grid.ny; ++j)
      for (int i = 0; i < mask.grid.nx; ++i) {
        if (!mask.at(i, j)) continue;
        const Vec2 x = mask.grid.node(i, j);
        if (x.dot(nu) >= lambda) continue;
        if (ann.sd(reflect_point(x, nu, lambda)) >= 0.0) return false;
      }
    return true;
  };
  // Ascending scan with early stop enforces "every mu <= lambda" directly.
  double scan_star = -2.0;
  for (double lam = -2.0 + h / 8; lam <= 0.0; lam += h / 8) {
    if (!cap_ok(lam)) break;
    scan_star = lam;
  }
  const CapSpec cap = compute_lambda_star(ann, nu, h, 1e-2 * h);
  CHECK(std::abs(cap.lambda_star - scan_star) <= 2 * h);
}

TEST_CASE("maximal cap scales with the domain") {
  const double h = 1.0 / 64;
  const CapSpec small = compute_lambda_star(Domain::annulus(Vec2::Zero(), 1.0, 2.0, 0.5),
                                            Vec2(1, 0), h, 1e-2 * h);
  const CapSpec big = compute_lambda_star(Domain::annulus(Vec2::Zero(), 2.0, 4.0, 1.0),
                                          Vec2(1, 0), 2 * h, 2e-2 * h);
  CHECK(big.lambda_star == doctest::Approx(2.0 * small.lambda_star).epsilon(0.05));
}

TEST_CASE("optimal cap set of the annulus leaves the inner half-shell") {
  const Domain ann = Domain::annulus(Vec2::Zero(), 1.0, 2.0, 0.5);
  const double h = 1.0 / 64;
  const RegionMask star = optimal_cap_set(ann, h, 16, 1e-2 * h);
  int complement = 0;
  for (int j = 0; j < star.grid.ny; ++j)
    for (int i = 0; i < star.grid.nx; ++i) {
      const Vec2 x = star.grid.node(i, j);
      if (ann.sd(x) >= 0) continue;
      const double r = x.norm();
      if (!star.at(i, j)) {
        ++complement;
        CHECK(r <= 1.5 + 2 * h);  // complement stays in the inner half-shell
      } else {
        CHECK(r > 1.5 - 2 * h);  // caps cover the outer half-shell
      }
    }
  CHECK(complement > 0);
}

TEST_CASE("optimal cap set complement is invariant under quarter turns") {
  const Domain ann = Domain::annulus(Vec2::Zero(), 1.0, 2.0, 0.5);
  const double h = 1.0 / 48;
  const RegionMask star = optimal_cap_set(ann, h, 16, 1e-2 * h);
  // Node (x, y) -> (-y, x) stays on the grid lattice for a symmetric bbox.
  int mismatches = 0, checked = 0;
  for (int j = 0; j < star.grid.ny; ++j)
    for (int i = 0; i < star.grid.nx; ++i) {
      const Vec2 x = star.grid.node(i, j);
      if (ann.sd(x) >= -h) continue;
      const Vec2 xr(-x.y(), x.x());
      int ir, jr;
      double fx, fy;
      if (!star.grid.locate(xr, ir, jr, fx, fy)) continue;
      if (fx > 0.01 && fx < 0.99) continue;  // not a lattice image; skip
      const int ii = static_cast<int>(std::lround((xr.x() - star.grid.x0) / star.grid.h));
      const int jj = static_cast<int>(std::lround((xr.y() - star.grid.y0) / star.grid.h));
      if (!star.grid.contains(ii, jj)) continue;
      ++checked;
      if (star.at(i, j) != star.at(ii, jj)) ++mismatches;
    }
  CHECK(checked > 1000);
  CHECK(mismatches <= checked / 100);  // grid-symmetry slack
}

TEST_CASE("interior region shrinks and warns when empty") {
  const Domain disk = Domain::disk(Vec2::Zero(), 1.0, 0.5);
  const double h = 1.0 / 32;
  const RegionMask full = interior_region(disk, h, 0.0);
  const RegionMask shrunk = interior_region(disk, h, 0.5);
  const RegionMask gone = interior_region(disk, h, 1.5);
  CHECK(full.count() > shrunk.count());
  CHECK(shrunk.count() > 0);
  CHECK(gone.count() == 0);
  CHECK(gone.warning);
  for (int j = 0; j < shrunk.grid.ny; ++j)
    for (int i = 0; i < shrunk.grid.nx; ++i)
      if (shrunk.at(i, j)) CHECK(disk.sd(shrunk.grid.node(i, j)) < -0.5);
}

TEST_CASE("exterior sphere validation accepts the annulus and rejects a fat ball") {
  const Domain ann = Domain::annulus(Vec2::Zero(), 1.0, 2.0, 0.5);
  const double h = 1.0 / 64;
  CHECK(validate_exterior_sphere(ann, h, 0.5).pass);
  const ExteriorSphereReport bad = validate_exterior_sphere(ann, h, 2.0);
  CHECK(!bad.pass);
  CHECK(bad.worst_penetration > 0.0);
}

TEST_CASE("degenerate direction input is rejected") {
  const Domain disk = Domain::disk(Vec2::Zero(), 1.0, 0.5);
  CHECK_THROWS_AS(compute_lambda_star(disk, Vec2(0, 0), 1.0 / 32, 1e-3), GeometryError);
  CHECK_THROWS_AS(compute_lambda_star(disk, Vec2(1, 0), 1.0 / 32, -1.0), GeometryError);
}

TEST_CASE("polygon domains classify points by the even-odd rule") {
  std::vector<std::vector<Vec2>> loops;
  std::vector<Vec2> outer, inner;
  for (int k = 0; k < 256; ++k) {
    const double th = 2.0 * std::numbers::pi * k / 256;
    outer.push_back(2.0 * Vec2(std::cos(th), std::sin(th)));
    inner.push_back(1.0 * Vec2(std::cos(th), std::sin(th)));
  }
  loops.push_back(outer);
  loops.push_back(inner);
  const Domain d = Domain::polygon(loops, 0.0);
  CHECK(d.sd(Vec2(1.5, 0)) < 0);
  CHECK(d.sd(Vec2(0.5, 0)) > 0);
  CHECK(d.sd(Vec2(3.0, 0)) > 0);
  CHECK(d.sd(Vec2(0, -1.5)) < 0);
}
