#include "caplab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace caplab {

bool Grid2D::locate(const Vec2& p, int& i, int& j, double& fx, double& fy) const {
  const double u = (p.x() - x0) / h;
  const double v = (p.y() - y0) / h;
  i = static_cast<int>(std::floor(u));
  j = static_cast<int>(std::floor(v));
  if (i < 0 || j < 0 || i > nx - 2 || j > ny - 2) {
    // Allow points sitting exactly on the last node line.
    if (i == nx - 1 && std::abs(u - (nx - 1)) < 1e-12) i = nx - 2;
    if (j == ny - 1 && std::abs(v - (ny - 1)) < 1e-12) j = ny - 2;
    if (i < 0 || j < 0 || i > nx - 2 || j > ny - 2) return false;
  }
  fx = u - i;
  fy = v - j;
  return true;
}

int RegionMask::count() const {
  int c = 0;
  for (auto b : inside) c += (b != 0);
  return c;
}

std::optional<double> GridFunction::interp(const Vec2& p) const {
  int i, j;
  double fx, fy;
  if (!grid.locate(p, i, j, fx, fy)) return std::nullopt;
  const int i00 = grid.index(i, j), i10 = grid.index(i + 1, j);
  const int i01 = grid.index(i, j + 1), i11 = grid.index(i + 1, j + 1);
  if (!defined[i00] || !defined[i10] || !defined[i01] || !defined[i11]) return std::nullopt;
  const double v0 = value[i00] * (1 - fx) + value[i10] * fx;
  const double v1 = value[i01] * (1 - fx) + value[i11] * fx;
  return v0 * (1 - fy) + v1 * fy;
}

std::optional<Vec2> GridFunction::grad(const Vec2& p) const {
  const double d = 0.5 * grid.h;
  auto xp = interp(p + Vec2(d, 0)), xm = interp(p - Vec2(d, 0));
  auto yp = interp(p + Vec2(0, d)), ym = interp(p - Vec2(0, d));
  if (!xp || !xm || !yp || !ym) return std::nullopt;
  return Vec2((*xp - *xm) / (2 * d), (*yp - *ym) / (2 * d));
}

double GridFunction::max_abs() const {
  double m = 0;
  for (int k = 0; k < grid.size(); ++k)
    if (defined[k]) m = std::max(m, std::abs(value[k]));
  return m;
}

double GridFunction::max_interior() const {
  double m = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid.size(); ++k)
    if (interior[k]) m = std::max(m, value[k]);
  return m;
}

double GridFunction::min_interior() const {
  double m = std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid.size(); ++k)
    if (interior[k]) m = std::min(m, value[k]);
  return m;
}

RegionMask GridFunction::interior_mask() const {
  RegionMask m;
  m.grid = grid;
  m.inside = interior;
  return m;
}

}  // namespace caplab
