#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "caplab/geometry.hpp"
#include "caplab/grid.hpp"
#include "caplab/json.hpp"
#include "caplab/kelvin.hpp"
#include "caplab/nonlinearity.hpp"
#include "caplab/radial.hpp"

namespace caplab {

struct VerifyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Uniform view over grid, radial, and analytic solutions: both accessors
/// return empty where the field is not usable.
struct ScalarField {
  std::function<std::optional<double>(const Vec2&)> eval;
  std::function<std::optional<Vec2>(const Vec2&)> grad;

  static ScalarField from_grid(const GridFunction& u);
  static ScalarField from_radial(const RadialSolution& sol, const Vec2& center);
  static ScalarField analytic(std::function<double(const Vec2&)> f,
                              std::function<Vec2(const Vec2&)> g);
};

struct CheckReport {
  std::string name;
  bool pass = false;
  double margin = 0.0;     // worst-case signed margin; pass iff margin >= -tolerance
  double tolerance = 0.0;
  std::vector<Json> violations;  // located worst offenders (bounded count)
  Json params;                   // parameters used (direction, lambda, delta, C, ...)

  Json to_json() const;
};

/// For sampled lambda in (lambda0, lambda*) and interior nodes x in the cap:
/// u(x) < u(x^lambda) + tol and du/dnu(x) > -tol. Margin is the worst of the
/// two families. Throws on a degenerate cap or an empty sample set.
CheckReport check_cap_monotonicity(const ScalarField& u, const Domain& dom, const CapSpec& cap,
                                   double h, double tol, int n_lambda = 16);

/// max over Omega vs max over Omega \ Omega_star. Margin is
/// max_complement - max_Omega (<= 0 always; pass iff >= -tol). Throws when
/// the complement mask is empty.
CheckReport check_max_location(const ScalarField& u, const Domain& dom,
                               const RegionMask& omega_star, double tol);

/// ratio = max_Omega u / max_{Omega_delta} u against the bound C; margin is
/// C - ratio. Also reports the largest passing delta found by bisection.
/// Throws when Omega_delta is empty.
CheckReport check_global_bound(const ScalarField& u, const Domain& dom, double delta, double C,
                               double h);

/// Builds the normalized inverted configuration at x0, transforms u, computes
/// the maximal cap of the image in direction -e1 (toward the image of x0 at
/// (1,0)), and asserts the transform has no near-critical node in that cap.
/// Reports min |grad v| and the largest ball about (1,0) inside the cap.
CheckReport check_kelvin_no_critical(const ScalarField& u, const Domain& dom, const Vec2& x0,
                                     const Nonlinearity& f, int N, double h_out,
                                     double theta = 1e-3);

/// Sampled monotonicity of the transformed nonlinearity under reflection:
/// |y^lambda| <= |y| on the cap and g(y^lambda, s) >= g(y, s) - tol. Sampling
/// is seeded and deterministic. Throws when a cap sample escapes the annulus
/// 1/R <= |y| <= 1.
CheckReport check_g_reflection(const Nonlinearity& f, const TransformedDomain& tdom,
                               const CapSpec& cap, int N, int n_samples, double tol);

struct BoundednessRow {
  std::string label;
  bool solved = false;
  bool out_of_hypothesis = false;
  double sup_norm = 0.0;
  double ratio_delta = 0.0;  // sup / max over {r <= R - delta}
  double argmax_radius = 0.0;
  std::string message;
};

struct BoundednessTable {
  int N = 3;
  double R_b = 1.0;
  double delta = 0.1;
  std::vector<BoundednessRow> rows;

  Json to_json() const;
};

/// Radial solve sweep over a family of nonlinearities on the ball of radius
/// R_b; tabulates sup norms and interior-max ratios. A bracket failure is
/// recorded as out-of-hypothesis behavior, not an error; throws only when
/// every solve fails.
BoundednessTable boundedness_experiment(int N, double R_b, const std::vector<Nonlinearity>& family,
                                        double delta, double tol);

}  // namespace caplab
