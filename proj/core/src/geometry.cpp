#include "caplab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

namespace caplab {

std::string preset_name(Preset p) {
  switch (p) {
    case Preset::disk: return "disk";
    case Preset::annulus: return "annulus";
    case Preset::square: return "square";
    case Preset::graph_boundary: return "graph_boundary";
    case Preset::custom: return "custom";
  }
  return "custom";
}

Preset preset_from_name(const std::string& name) {
  if (name == "disk") return Preset::disk;
  if (name == "annulus") return Preset::annulus;
  if (name == "square") return Preset::square;
  if (name == "graph_boundary") return Preset::graph_boundary;
  if (name == "custom") return Preset::custom;
  throw GeometryError("unknown domain preset: " + name);
}

Vec2 Domain::outward_normal(const Vec2& p) const {
  const double t = 1e-6;
  Vec2 g((sd(p + Vec2(t, 0)) - sd(p - Vec2(t, 0))) / (2 * t),
         (sd(p + Vec2(0, t)) - sd(p - Vec2(0, t))) / (2 * t));
  const double n = g.norm();
  if (n < 1e-12) throw GeometryError("degenerate signed-distance gradient");
  return g / n;
}

// -- factories -------------------------------------------------------------

namespace {

std::vector<Vec2> circle_loop(const Vec2& c, double r, int n, bool ccw) {
  std::vector<Vec2> loop(n);
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * k / n * (ccw ? 1.0 : -1.0);
    loop[k] = c + r * Vec2(std::cos(th), std::sin(th));
  }
  return loop;
}

}  // namespace

Domain Domain::disk(const Vec2& center, double radius, double rho, int n_boundary) {
  Domain d;
  d.signed_distance = [center, radius](const Vec2& p) { return (p - center).norm() - radius; };
  d.boundary_loops = {circle_loop(center, radius, n_boundary, true)};
  for (const Vec2& p : d.boundary_loops[0])
    d.boundary_samples.push_back({p, (p - center).normalized()});
  d.circumbound = center.norm() + radius;
  d.exterior_radius = rho;
  d.preset_tag = Preset::disk;
  d.bbox_lo = center - Vec2(radius, radius);
  d.bbox_hi = center + Vec2(radius, radius);
  return d;
}

Domain Domain::annulus(const Vec2& center, double r_in, double r_out, double rho,
                       int n_boundary) {
  if (!(0 < r_in && r_in < r_out)) throw GeometryError("annulus radii must satisfy 0 < r_in < r_out");
  Domain d;
  d.signed_distance = [center, r_in, r_out](const Vec2& p) {
    const double r = (p - center).norm();
    return std::max(r_in - r, r - r_out);
  };
  d.boundary_loops = {circle_loop(center, r_out, n_boundary, true),
                      circle_loop(center, r_in, std::max(8, n_boundary / 2), false)};
  for (const Vec2& p : d.boundary_loops[0])
    d.boundary_samples.push_back({p, (p - center).normalized()});
  for (const Vec2& p : d.boundary_loops[1])
    d.boundary_samples.push_back({p, -(p - center).normalized()});
  d.circumbound = center.norm() + r_out;
  d.exterior_radius = rho;
  d.preset_tag = Preset::annulus;
  d.bbox_lo = center - Vec2(r_out, r_out);
  d.bbox_hi = center + Vec2(r_out, r_out);
  return d;
}

Domain Domain::rectangle(const Vec2& lo, const Vec2& hi, double rho, int n_per_side) {
  if (!(lo.x() < hi.x() && lo.y() < hi.y())) throw GeometryError("rectangle corners out of order");
  Domain d;
  d.signed_distance = [lo, hi](const Vec2& p) {
    const double qx = std::max(lo.x() - p.x(), p.x() - hi.x());
    const double qy = std::max(lo.y() - p.y(), p.y() - hi.y());
    if (qx > 0 || qy > 0)
      return std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
    return std::max(qx, qy);
  };
  std::vector<Vec2> loop;
  auto side = [&](const Vec2& a, const Vec2& b, const Vec2& nrm) {
    for (int k = 0; k < n_per_side; ++k) {
      const double t = static_cast<double>(k) / n_per_side;
      const Vec2 p = a + t * (b - a);
      loop.push_back(p);
      d.boundary_samples.push_back({p, nrm});
    }
  };
  side({lo.x(), lo.y()}, {hi.x(), lo.y()}, {0, -1});
  side({hi.x(), lo.y()}, {hi.x(), hi.y()}, {1, 0});
  side({hi.x(), hi.y()}, {lo.x(), hi.y()}, {0, 1});
  side({lo.x(), hi.y()}, {lo.x(), lo.y()}, {-1, 0});
  d.boundary_loops = {loop};
  d.circumbound = std::max(lo.norm(), hi.norm());
  d.exterior_radius = rho;
  d.preset_tag = Preset::square;
  d.bbox_lo = lo;
  d.bbox_hi = hi;
  return d;
}

namespace {

double dist_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

bool even_odd_inside(const Vec2& p, const std::vector<std::vector<Vec2>>& loops) {
  bool inside = false;
  for (const auto& loop : loops) {
    const int n = static_cast<int>(loop.size());
    for (int i = 0, j = n - 1; i < n; j = i++) {
      const Vec2& a = loop[j];
      const Vec2& b = loop[i];
      if ((b.y() > p.y()) != (a.y() > p.y())) {
        const double xint = b.x() + (p.y() - b.y()) * (a.x() - b.x()) / (a.y() - b.y());
        if (p.x() < xint) inside = !inside;
      }
    }
  }
  return inside;
}

}  // namespace

Domain Domain::polygon(std::vector<std::vector<Vec2>> loops, double rho, Preset tag) {
  if (loops.empty()) throw GeometryError("polygon domain needs at least one loop");
  Domain d;
  auto shared = std::make_shared<std::vector<std::vector<Vec2>>>(std::move(loops));
  d.signed_distance = [shared](const Vec2& p) {
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& loop : *shared) {
      const int n = static_cast<int>(loop.size());
      for (int i = 0; i < n; ++i)
        dist = std::min(dist, dist_to_segment(p, loop[i], loop[(i + 1) % n]));
    }
    return even_odd_inside(p, *shared) ? -dist : dist;
  };
  d.boundary_loops = *shared;
  Vec2 lo(std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
  Vec2 hi = -lo;
  double circ = 0;
  for (const auto& loop : *shared)
    for (const Vec2& v : loop) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
      circ = std::max(circ, v.norm());
    }
  d.bbox_lo = lo;
  d.bbox_hi = hi;
  d.circumbound = circ;
  d.exterior_radius = rho;
  d.preset_tag = tag;
  // Normals by probing the signed distance just off each vertex.
  for (const auto& loop : *shared) {
    const int n = static_cast<int>(loop.size());
    for (int i = 0; i < n; ++i) {
      const Vec2 prev = loop[(i + n - 1) % n];
      const Vec2 next = loop[(i + 1) % n];
      Vec2 tang = (next - prev);
      if (tang.norm() < 1e-15) continue;
      tang.normalize();
      Vec2 nrm(tang.y(), -tang.x());
      const double probe = 1e-4 * std::max(1.0, (hi - lo).norm());
      if (d.signed_distance(loop[i] + probe * nrm) < 0) nrm = -nrm;
      d.boundary_samples.push_back(BoundarySample{loop[i], nrm});
    }
  }
  return d;
}

// -- point maps ------------------------------------------------------------

Eigen::VectorXd invert_point(const Eigen::VectorXd& x) {
  const double n2 = x.squaredNorm();
  if (n2 <= 0) throw GeometryError("inversion center: cannot invert the origin");
  return x / n2;
}

Vec2 invert_point(const Vec2& x) {
  const double n2 = x.squaredNorm();
  if (n2 <= 0) throw GeometryError("inversion center: cannot invert the origin");
  return x / n2;
}

Eigen::VectorXd reflect_point(const Eigen::VectorXd& x, const Eigen::VectorXd& nu,
                              double lambda) {
  if (std::abs(nu.norm() - 1.0) > 1e-12) throw GeometryError("reflect_point: nu must be a unit vector");
  return x + 2.0 * (lambda - x.dot(nu)) * nu;
}

Vec2 reflect_point(const Vec2& x, const Vec2& nu, double lambda) {
  if (std::abs(nu.norm() - 1.0) > 1e-12) throw GeometryError("reflect_point: nu must be a unit vector");
  return x + 2.0 * (lambda - x.dot(nu)) * nu;
}

// -- grid carriers ---------------------------------------------------------

Grid2D make_grid(const Domain& dom, double h, double pad_cells) {
  if (h <= 0) throw GeometryError("grid spacing must be positive");
  Grid2D g;
  g.h = h;
  g.x0 = dom.bbox_lo.x() - pad_cells * h;
  g.y0 = dom.bbox_lo.y() - pad_cells * h;
  g.nx = static_cast<int>(std::ceil((dom.bbox_hi.x() - g.x0) / h + pad_cells)) + 1;
  g.ny = static_cast<int>(std::ceil((dom.bbox_hi.y() - g.y0) / h + pad_cells)) + 1;
  return g;
}

RegionMask interior_mask(const Domain& dom, const Grid2D& grid) {
  RegionMask m;
  m.grid = grid;
  m.inside.assign(grid.size(), 0);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (dom.sd(grid.node(i, j)) < 0) m.inside[grid.index(i, j)] = 1;
  return m;
}

RegionMask interior_mask(const Domain& dom, double h) {
  return interior_mask(dom, make_grid(dom, h));
}

// -- moving planes ---------------------------------------------------------

namespace {

struct DirectionalSamples {
  // Cap sample points sorted by their coordinate along nu.
  std::vector<double> dots;
  std::vector<Vec2> points;
};

DirectionalSamples sort_by_direction(const std::vector<Vec2>& pts, const Vec2& nu) {
  std::vector<int> order(pts.size());
  for (size_t k = 0; k < pts.size(); ++k) order[k] = static_cast<int>(k);
  std::vector<double> dots(pts.size());
  for (size_t k = 0; k < pts.size(); ++k) dots[k] = pts[k].dot(nu);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return dots[a] < dots[b]; });
  DirectionalSamples s;
  s.dots.reserve(pts.size());
  s.points.reserve(pts.size());
  for (int k : order) {
    s.dots.push_back(dots[k]);
    s.points.push_back(pts[k]);
  }
  return s;
}

std::vector<Vec2> supersampled_boundary(const Domain& dom, int factor) {
  std::vector<Vec2> pts;
  for (const auto& loop : dom.boundary_loops) {
    const int n = static_cast<int>(loop.size());
    for (int i = 0; i < n; ++i) {
      const Vec2& a = loop[i];
      const Vec2& b = loop[(i + 1) % n];
      for (int k = 0; k < factor; ++k)
        pts.push_back(a + (static_cast<double>(k) / factor) * (b - a));
    }
  }
  return pts;
}

// Reflected cap below lambda stays inside Omega (sd < eps at every sample).
bool cap_contained(const Domain& dom, const DirectionalSamples& s, const Vec2& nu,
                   double lambda, double eps) {
  for (size_t k = 0; k < s.dots.size() && s.dots[k] < lambda; ++k) {
    const Vec2 r = s.points[k] + 2.0 * (lambda - s.dots[k]) * nu;
    if (dom.sd(r) >= eps) return false;
  }
  return true;
}

}  // namespace

CapSpec compute_lambda_star(const Domain& dom, const RegionMask& interior, const Vec2& nu,
                            double tol) {
  if (std::abs(nu.norm() - 1.0) > 1e-12) throw GeometryError("compute_lambda_star: nu must be unit");
  if (tol <= 0) throw GeometryError("compute_lambda_star: tol must be positive");
  if (interior.empty()) throw GeometryError("compute_lambda_star: empty domain mask");

  const Grid2D& grid = interior.grid;
  const double h = grid.h;

  std::vector<Vec2> cap_pts;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (interior.at(i, j)) cap_pts.push_back(grid.node(i, j));
  const auto interior_sorted = sort_by_direction(cap_pts, nu);
  const auto boundary_sorted = sort_by_direction(supersampled_boundary(dom, 4), nu);

  double lam0 = std::numeric_limits<double>::infinity();
  double lam_max = -std::numeric_limits<double>::infinity();
  for (double d : boundary_sorted.dots) {
    lam0 = std::min(lam0, d);
    lam_max = std::max(lam_max, d);
  }
  lam0 = std::min(lam0, interior_sorted.dots.front());
  lam_max = std::max(lam_max, interior_sorted.dots.back());

  const double eps = 0.5 * h;
  auto ok = [&](double lam) {
    return cap_contained(dom, interior_sorted, nu, lam, eps) &&
           cap_contained(dom, boundary_sorted, nu, lam, eps);
  };

  // Upward march at half-grid resolution, then bisect inside the first
  // failing step. The march enforces the for-all-mu part of the definition.
  const double step = 0.5 * h;
  double good = lam0;
  double bad = std::numeric_limits<double>::quiet_NaN();
  for (double lam = lam0 + step; lam <= lam_max + step; lam += step) {
    if (ok(lam)) {
      good = lam;
    } else {
      bad = lam;
      break;
    }
  }

  CapSpec cap;
  cap.direction = nu;
  cap.lambda0 = lam0;
  if (std::isnan(bad)) {
    cap.lambda_star = lam_max;
  } else {
    double lo = good, hi = bad;
    const double width = std::max(tol, 1e-4 * h);
    while (hi - lo > width) {
      const double mid = 0.5 * (lo + hi);
      (ok(mid) ? lo : hi) = mid;
    }
    cap.lambda_star = lo;
  }
  cap.lambda_star = std::min(std::max(cap.lambda_star, lam0), lam_max);
  cap.degenerate = cap.lambda_star <= cap.lambda0 + 2.0 * h;
  return cap;
}

CapSpec compute_lambda_star(const Domain& dom, const Vec2& nu, double h, double tol) {
  return compute_lambda_star(dom, interior_mask(dom, h), nu, tol);
}

RegionMask optimal_cap_set(const Domain& dom, double h, int n_directions, double tol) {
  if (n_directions < 4) throw GeometryError("optimal_cap_set: need at least 4 directions");
  const RegionMask interior = interior_mask(dom, h);
  RegionMask out;
  out.grid = interior.grid;
  out.inside.assign(interior.grid.size(), 0);
  for (int k = 0; k < n_directions; ++k) {
    const double th = 2.0 * std::numbers::pi * k / n_directions;
    const Vec2 nu(std::cos(th), std::sin(th));
    const CapSpec cap = compute_lambda_star(dom, interior, nu, tol);
    // Half-cell margin: lambda* carries an O(h) upward bias from the
    // containment slack; shrinking each cap keeps the complement
    // conservative (never empty for the disk) at sub-grid Hausdorff cost.
    const double cut = cap.lambda_star - 0.5 * h;
    for (int j = 0; j < interior.grid.ny; ++j)
      for (int i = 0; i < interior.grid.nx; ++i) {
        const int idx = interior.grid.index(i, j);
        if (interior.inside[idx] && interior.grid.node(i, j).dot(nu) < cut) out.inside[idx] = 1;
      }
  }
  return out;
}

RegionMask interior_region(const Domain& dom, const Grid2D& grid, double delta) {
  if (delta < 0) throw GeometryError("interior_region: delta must be nonnegative");
  RegionMask m;
  m.grid = grid;
  m.inside.assign(grid.size(), 0);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (dom.sd(grid.node(i, j)) < -delta) m.inside[grid.index(i, j)] = 1;
  m.warning = m.empty();
  return m;
}

RegionMask interior_region(const Domain& dom, double h, double delta) {
  return interior_region(dom, make_grid(dom, h), delta);
}

ExteriorSphereReport validate_exterior_sphere(const Domain& dom, double h, double rho) {
  if (rho <= 0) throw GeometryError("validate_exterior_sphere: rho must be positive");
  const RegionMask mask = interior_mask(dom, h);
  std::vector<Vec2> interior_pts;
  for (int j = 0; j < mask.grid.ny; ++j)
    for (int i = 0; i < mask.grid.nx; ++i)
      if (mask.at(i, j)) interior_pts.push_back(mask.grid.node(i, j));

  ExteriorSphereReport rep;
  rep.tolerance = h;
  const double rho2 = rho * rho;
  for (const auto& bs : dom.boundary_samples) {
    const Vec2 center = bs.point + rho * bs.outward_normal;
    double pen = 0;
    for (const Vec2& p : interior_pts) {
      const double d2 = (p - center).squaredNorm();
      if (d2 < rho2) pen = std::max(pen, rho - std::sqrt(d2));
    }
    if (pen > rep.worst_penetration) {
      rep.worst_penetration = pen;
      rep.worst_boundary_point = bs.point;
    }
  }
  rep.pass = rep.worst_penetration <= rep.tolerance;
  return rep;
}

}  // namespace caplab
