#include "caplab/kelvin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "caplab/solver.hpp"

namespace caplab {

Json KelvinFrame::to_json() const {
  Json j;
  j["rotation"] = {{rotation(0, 0), rotation(0, 1)}, {rotation(1, 0), rotation(1, 1)}};
  j["translation"] = {translation.x(), translation.y()};
  j["scale"] = scale;
  j["base_point"] = {base_point.x(), base_point.y()};
  j["R"] = R;
  return j;
}

KelvinFrame KelvinFrame::from_json(const Json& j) {
  KelvinFrame f;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) f.rotation(r, c) = j.at("rotation")[r][c].get<double>();
  f.translation = {j.at("translation")[0].get<double>(), j.at("translation")[1].get<double>()};
  f.scale = j.at("scale").get<double>();
  f.base_point = {j.at("base_point")[0].get<double>(), j.at("base_point")[1].get<double>()};
  f.R = j.at("R").get<double>();
  return f;
}

KelvinFrame build_frame(const Domain& dom, const Vec2& x0, double rho) {
  const double geom_tol = 1e-6 * std::max(1.0, (dom.bbox_hi - dom.bbox_lo).norm());
  if (std::abs(dom.sd(x0)) > 100 * geom_tol)
    throw KelvinError("build_frame: x0 is not on the boundary (sd=" + std::to_string(dom.sd(x0)) +
                      ")");
  if (rho <= 0) throw KelvinError("build_frame: rho must be positive");

  const Vec2 n_out = dom.outward_normal(x0);
  const Vec2 center = x0 + rho * n_out;

  // Local exterior-ball validation: sample the ball, none of it may be inside.
  double penetration = 0.0;
  for (int ring = 0; ring <= 8; ++ring)
    for (int k = 0; k < 64; ++k) {
      const double rr = rho * ring / 8.0 * 0.999;
      const double th = 2.0 * std::numbers::pi * k / 64;
      const Vec2 p = center + rr * Vec2(std::cos(th), std::sin(th));
      penetration = std::max(penetration, -dom.sd(p));
    }
  if (penetration > 100 * geom_tol)
    throw KelvinError("build_frame: exterior ball penetrates the domain by " +
                      std::to_string(penetration));

  KelvinFrame frame;
  frame.base_point = x0;
  frame.scale = 1.0 / rho;
  const Vec2 d = (x0 - center) / rho;
  const double th = std::atan2(d.y(), d.x());
  frame.rotation << std::cos(th), std::sin(th), -std::sin(th), std::cos(th);
  frame.translation = -frame.scale * (frame.rotation * center);
  double R = 1.0;
  for (const auto& bs : dom.boundary_samples) R = std::max(R, frame.apply(bs.point).norm());
  frame.R = R;
  return frame;
}

TransformedDomain transform_domain(const Domain& dom, const KelvinFrame& frame) {
  std::vector<std::vector<Vec2>> loops;
  for (const auto& loop : dom.boundary_loops) {
    std::vector<Vec2> image;
    image.reserve(loop.size());
    for (const Vec2& p : loop) image.push_back(invert_point(Vec2(frame.apply(p))));
    loops.push_back(std::move(image));
  }
  TransformedDomain td;
  td.domain = Domain::polygon(std::move(loops), 0.0, Preset::graph_boundary);
  td.inner_radius = 1.0 / frame.R;
  return td;
}

GridFunction kelvin_transform(const std::function<double(const Vec2&)>& u_eval,
                              const KelvinFrame& frame, int N, double h_out,
                              const TransformedDomain& tdom) {
  if (N < 3) throw KelvinError("kelvin_transform: N >= 3 required");
  GridFunction v = make_grid_function(tdom.domain, h_out);
  for (int j = 0; j < v.grid.ny; ++j)
    for (int i = 0; i < v.grid.nx; ++i) {
      const int idx = v.grid.index(i, j);
      if (!v.interior[idx]) continue;
      const Vec2 y = v.grid.node(i, j);
      const double ny = y.norm();
      if (ny <= 0) {
        v.interior[idx] = 0;
        v.defined[idx] = 0;
        continue;
      }
      const Vec2 x = frame.inverse(invert_point(y));
      const double weight = std::pow(ny, -(N - 2.0));
      double val;
      try {
        val = u_eval(x);
      } catch (...) {
        v.interior[idx] = 0;
        v.defined[idx] = 0;
        continue;
      }
      if (!std::isfinite(val)) {
        v.interior[idx] = 0;
        v.defined[idx] = 0;
        continue;
      }
      v.value[idx] = weight * val;
    }
  return v;
}

GridFunction kelvin_transform(const GridFunction& u, const KelvinFrame& frame, int N,
                              double h_out, const TransformedDomain& tdom) {
  auto u_eval = [&u](const Vec2& x) -> double {
    auto val = u.interp(x);
    if (!val) throw KelvinError("back-mapped point outside the sampled hull");
    return *val;
  };
  return kelvin_transform(u_eval, frame, N, h_out, tdom);
}

double TransformedNonlinearity::at_radius(double y_norm, double s) const {
  if (y_norm <= 0) throw KelvinError("transformed nonlinearity: |y| must be positive");
  return std::pow(y_norm, -(N + 2.0)) * f(std::pow(y_norm, N - 2.0) * s);
}

TransformedNonlinearity transformed_nonlinearity(const Nonlinearity& f, int N) {
  if (N < 3) throw KelvinError("transformed_nonlinearity: N >= 3 required");
  return {f, N};
}

KelvinResidualReport check_kelvin_pde(const std::function<double(const Vec2&)>& u_eval,
                                      const Domain& dom, const Nonlinearity& f,
                                      const KelvinFrame& frame, int N, double h_out,
                                      double threshold) {
  TransformedDomain tdom = transform_domain(dom, frame);
  GridFunction v = kelvin_transform(u_eval, frame, N, h_out, tdom);
  TransformedNonlinearity g = transformed_nonlinearity(f, N);
  const double rho2 = 1.0 / (frame.scale * frame.scale);

  const Grid2D& gr = v.grid;
  const double h = gr.h;
  KelvinResidualReport rep;
  rep.h = h;
  double sum2 = 0.0;
  for (int j = 1; j < gr.ny - 1; ++j)
    for (int i = 1; i < gr.nx - 1; ++i) {
      // Full interior stencils only; cut cells are excluded from the study.
      auto ok = [&](int a, int b) { return v.is_interior(a, b); };
      if (!ok(i, j) || !ok(i - 1, j) || !ok(i + 1, j) || !ok(i, j - 1) || !ok(i, j + 1)) continue;
      const Vec2 y = gr.node(i, j);
      const double vxx = (v.at(i + 1, j) - 2 * v.at(i, j) + v.at(i - 1, j)) / (h * h);
      const double vyy = (v.at(i, j + 1) - 2 * v.at(i, j) + v.at(i, j - 1)) / (h * h);
      // Laplacian of an e1-axisymmetric function restricted to the plane.
      double lap;
      if (std::abs(y.y()) < 0.5 * h) {
        lap = vxx + 2.0 * vyy;
      } else {
        const double vy = (v.at(i, j + 1) - v.at(i, j - 1)) / (2 * h);
        lap = vxx + vyy + vy / y.y();
      }
      const double gv = rho2 * g(y, v.at(i, j));
      const double res = lap + gv;
      rep.max_residual = std::max(rep.max_residual, std::abs(res));
      rep.g_scale = std::max(rep.g_scale, std::abs(gv));
      sum2 += res * res;
      ++rep.n_nodes;
    }
  if (rep.n_nodes < 100)
    throw KelvinError("check_kelvin_pde: fewer than 100 interior image nodes (" +
                      std::to_string(rep.n_nodes) + ")");
  rep.l2_residual = std::sqrt(sum2 * h * h);
  rep.rel_residual = rep.max_residual / std::max(1.0, rep.g_scale);
  rep.threshold = threshold;
  rep.pass = rep.rel_residual <= threshold;
  return rep;
}

KelvinResidualReport check_kelvin_pde(const GridFunction& u, const Domain& dom,
                                      const Nonlinearity& f, const KelvinFrame& frame, int N,
                                      double h_out, double threshold) {
  auto u_eval = [&u](const Vec2& x) -> double {
    auto val = u.interp(x);
    if (!val) throw KelvinError("back-mapped point outside the sampled hull");
    return *val;
  };
  return check_kelvin_pde(u_eval, dom, f, frame, N, h_out, threshold);
}

}  // namespace caplab
