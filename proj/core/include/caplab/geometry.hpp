#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "caplab/grid.hpp"

namespace caplab {

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Preset { disk, annulus, square, graph_boundary, custom };

std::string preset_name(Preset p);
Preset preset_from_name(const std::string& name);

struct BoundarySample {
  Vec2 point;
  Vec2 outward_normal;
};

/// Bounded 2D domain given by a signed distance function (negative inside),
/// ordered boundary loops, and the geometric constants of the exterior
/// sphere condition.
struct Domain {
  int dim = 2;
  std::function<double(const Vec2&)> signed_distance;
  std::vector<std::vector<Vec2>> boundary_loops;  // ordered, closed
  std::vector<BoundarySample> boundary_samples;
  double circumbound = 0.0;     // radius of a ball (about the origin) containing Omega
  double exterior_radius = 0.0; // uniform exterior sphere radius rho
  Preset preset_tag = Preset::custom;
  Vec2 bbox_lo = Vec2::Zero();
  Vec2 bbox_hi = Vec2::Zero();

  double sd(const Vec2& p) const { return signed_distance(p); }

  /// Outward unit normal from the signed distance gradient (centered differences).
  Vec2 outward_normal(const Vec2& p) const;

  static Domain disk(const Vec2& center, double radius, double rho, int n_boundary = 512);
  static Domain annulus(const Vec2& center, double r_in, double r_out, double rho,
                        int n_boundary = 512);
  static Domain rectangle(const Vec2& lo, const Vec2& hi, double rho, int n_per_side = 128);
  /// Polygonal domain from one or more closed loops (even-odd interior rule).
  static Domain polygon(std::vector<std::vector<Vec2>> loops, double rho,
                       Preset tag = Preset::graph_boundary);
};

/// Moving-plane data for one direction: the sweep start lambda0 and the
/// largest lambda for which every reflected cap stays inside Omega.
struct CapSpec {
  Vec2 direction = Vec2::UnitX();
  double lambda0 = 0.0;
  double lambda_star = 0.0;
  bool degenerate = false;
};

// -- point maps ------------------------------------------------------------

/// Inversion through the unit sphere, x -> x/|x|^2. Throws on x = 0.
Eigen::VectorXd invert_point(const Eigen::VectorXd& x);
Vec2 invert_point(const Vec2& x);

/// Reflection of x across the plane {p . nu = lambda}. nu must be unit.
Eigen::VectorXd reflect_point(const Eigen::VectorXd& x, const Eigen::VectorXd& nu, double lambda);
Vec2 reflect_point(const Vec2& x, const Vec2& nu, double lambda);

// -- grid carriers ---------------------------------------------------------

/// Grid over the padded bounding box of the domain.
Grid2D make_grid(const Domain& dom, double h, double pad_cells = 3.0);

/// Interior node mask (signed_distance < 0) on the padded grid.
RegionMask interior_mask(const Domain& dom, double h);
RegionMask interior_mask(const Domain& dom, const Grid2D& grid);

// -- moving-plane operations -----------------------------------------------

/// lambda0 and lambda* for direction nu, found by an upward march at grid
/// resolution followed by bisection refinement. Containment of reflected
/// caps is tested on interior grid nodes plus 4x supersampled boundary
/// points; accuracy is tol + O(h).
CapSpec compute_lambda_star(const Domain& dom, const Vec2& nu, double h, double tol);
CapSpec compute_lambda_star(const Domain& dom, const RegionMask& interior, const Vec2& nu,
                            double tol);

/// Union of the maximal caps over n_directions uniformly sampled directions
/// (union accumulated in direction index order).
RegionMask optimal_cap_set(const Domain& dom, double h, int n_directions, double tol);

/// Omega_delta = {x in Omega : dist(x, boundary) > delta} as the node set
/// with signed_distance < -delta. Sets the warning flag when empty.
RegionMask interior_region(const Domain& dom, double h, double delta);
RegionMask interior_region(const Domain& dom, const Grid2D& grid, double delta);

struct ExteriorSphereReport {
  bool pass = false;
  double worst_penetration = 0.0;
  Vec2 worst_boundary_point = Vec2::Zero();
  double tolerance = 0.0;
};

/// Tests, for every boundary sample, that the exterior ball of radius rho
/// centered at x + rho*n contains no interior grid node. Failure is a
/// report outcome, not an exception.
ExteriorSphereReport validate_exterior_sphere(const Domain& dom, double h, double rho);

}  // namespace caplab
