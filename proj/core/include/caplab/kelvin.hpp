#pragma once

#include <functional>

#include "caplab/geometry.hpp"
#include "caplab/grid.hpp"
#include "caplab/json.hpp"
#include "caplab/nonlinearity.hpp"

namespace caplab {

struct KelvinError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Similarity normalizing a boundary point and its exterior ball to the unit
/// configuration: the ball center goes to the origin, its radius to 1, and
/// the touch point x0 to (1, 0).
struct KelvinFrame {
  Eigen::Matrix2d rotation = Eigen::Matrix2d::Identity();
  Vec2 translation = Vec2::Zero();
  double scale = 1.0;  // 1 / rho
  Vec2 base_point = Vec2::Zero();
  double R = 1.0;  // max |frame(x)| over boundary samples

  Vec2 apply(const Vec2& x) const { return scale * (rotation * x) + translation; }
  Vec2 inverse(const Vec2& y) const { return rotation.transpose() * ((y - translation) / scale); }

  static KelvinFrame identity() { return {}; }

  Json to_json() const;
  static KelvinFrame from_json(const Json& j);
};

/// Builds the normalizing frame at boundary point x0 with exterior ball
/// radius rho. Throws (naming the penetration depth) when the exterior ball
/// pokes into the domain.
KelvinFrame build_frame(const Domain& dom, const Vec2& x0, double rho);

/// Image h(frame(Omega)) as a polygonal domain; all image points satisfy
/// 1/R <= |y| <= 1.
struct TransformedDomain {
  Domain domain;
  double inner_radius = 0.0;  // 1/R
};

TransformedDomain transform_domain(const Domain& dom, const KelvinFrame& frame);

/// v(y) = |y|^{-(N-2)} u(h^{-1}(y)) on a fresh grid over the image, with u
/// evaluated through the frame. Image nodes whose back-map leaves the
/// sampled hull are marked undefined and excluded from norms.
GridFunction kelvin_transform(const std::function<double(const Vec2&)>& u_eval,
                              const KelvinFrame& frame, int N, double h_out,
                              const TransformedDomain& tdom);
GridFunction kelvin_transform(const GridFunction& u, const KelvinFrame& frame, int N,
                              double h_out, const TransformedDomain& tdom);

/// g(y, s) = |y|^{-(N+2)} f(|y|^{N-2} s). Throws on y = 0.
struct TransformedNonlinearity {
  Nonlinearity f;
  int N = 3;

  double at_radius(double y_norm, double s) const;
  double operator()(const Vec2& y, double s) const { return at_radius(y.norm(), s); }
};

TransformedNonlinearity transformed_nonlinearity(const Nonlinearity& f, int N);

struct KelvinResidualReport {
  double max_residual = 0.0;
  double l2_residual = 0.0;
  double g_scale = 0.0;       // max |rho^2 g(y, v)| over the checked nodes
  double rel_residual = 0.0;  // max_residual / max(1, g_scale)
  int n_nodes = 0;
  double h = 0.0;
  bool pass = false;          // rel_residual <= threshold
  double threshold = 0.0;
};

/// Residual of -Delta v = rho^2 g(y, v) on the image grid. The Laplacian is
/// taken axisymmetric about the e1 axis (the normalized configurations used
/// here are all axisymmetric about it), so N=3 is exercised on a planar
/// grid. Residual must refine at O(h^2) for exact solutions.
KelvinResidualReport check_kelvin_pde(const std::function<double(const Vec2&)>& u_eval,
                                      const Domain& dom, const Nonlinearity& f,
                                      const KelvinFrame& frame, int N, double h_out,
                                      double threshold = 1e-2);
KelvinResidualReport check_kelvin_pde(const GridFunction& u, const Domain& dom,
                                      const Nonlinearity& f, const KelvinFrame& frame, int N,
                                      double h_out, double threshold = 1e-2);

}  // namespace caplab
