#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

namespace caplab {

using Vec2 = Eigen::Vector2d;

/// Node-centered Cartesian grid. Node (i,j) sits at (x0+i*h, y0+j*h).
struct Grid2D {
  double x0 = 0.0;
  double y0 = 0.0;
  double h = 0.0;
  int nx = 0;
  int ny = 0;

  int size() const { return nx * ny; }
  int index(int i, int j) const { return j * nx + i; }
  Vec2 node(int i, int j) const { return {x0 + i * h, y0 + j * h}; }
  bool contains(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }

  /// Cell containing p, clamped so that (i,i+1)x(j,j+1) is a valid cell.
  bool locate(const Vec2& p, int& i, int& j, double& fx, double& fy) const;
};

/// Boolean node set on a grid (discrete carrier for caps, Omega_star, Omega_delta).
struct RegionMask {
  Grid2D grid;
  std::vector<std::uint8_t> inside;
  bool warning = false;  // e.g. empty interior region

  bool at(int i, int j) const { return inside[grid.index(i, j)] != 0; }
  int count() const;
  bool empty() const { return count() == 0; }
};

/// Scalar field on an embedded grid.
///
/// `defined` marks nodes carrying a usable value (interior nodes, boundary
/// ghosts pinned to 0, or every node for analytic samples). `interior` marks
/// the nodes a solver owns. `frac` stores the Shortley-Weller cut fractions
/// toward each neighbor; 1 means the neighbor is a regular interior node.
struct GridFunction {
  Grid2D grid;
  std::vector<double> value;
  std::vector<std::uint8_t> defined;
  std::vector<std::uint8_t> interior;

  struct BoundaryFrac {
    double w = 1.0, e = 1.0, s = 1.0, n = 1.0;
  };
  std::vector<BoundaryFrac> frac;

  double at(int i, int j) const { return value[grid.index(i, j)]; }
  bool is_defined(int i, int j) const { return defined[grid.index(i, j)] != 0; }
  bool is_interior(int i, int j) const { return interior[grid.index(i, j)] != 0; }

  /// Bilinear interpolation; empty when any of the four cell corners is undefined.
  std::optional<double> interp(const Vec2& p) const;

  /// Centered-difference gradient at p via interpolated samples at +-h/2.
  std::optional<Vec2> grad(const Vec2& p) const;

  double max_abs() const;
  double max_interior() const;
  double min_interior() const;

  RegionMask interior_mask() const;
};

}  // namespace caplab
