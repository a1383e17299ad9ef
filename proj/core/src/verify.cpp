#include "caplab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "caplab/solver.hpp"

namespace caplab {

namespace {
constexpr size_t kMaxViolations = 32;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

ScalarField ScalarField::from_grid(const GridFunction& u) {
  auto held = std::make_shared<GridFunction>(u);
  ScalarField f;
  f.eval = [held](const Vec2& p) { return held->interp(p); };
  f.grad = [held](const Vec2& p) { return held->grad(p); };
  return f;
}

ScalarField ScalarField::from_radial(const RadialSolution& sol, const Vec2& center) {
  auto held = std::make_shared<RadialSolution>(sol);
  ScalarField f;
  f.eval = [held, center](const Vec2& p) -> std::optional<double> {
    const double r = (p - center).norm();
    if (r < held->r_in - 1e-12 || r > held->r_out + 1e-12) return std::nullopt;
    return held->eval(std::clamp(r, held->r_in, held->r_out));
  };
  f.grad = [held, center](const Vec2& p) -> std::optional<Vec2> {
    const double r = (p - center).norm();
    if (r < held->r_in - 1e-12 || r > held->r_out + 1e-12) return std::nullopt;
    if (r < 1e-12) return Vec2::Zero();
    return Vec2(held->deval(std::clamp(r, held->r_in, held->r_out)) * (p - center) / r);
  };
  return f;
}

ScalarField ScalarField::analytic(std::function<double(const Vec2&)> f,
                                  std::function<Vec2(const Vec2&)> g) {
  ScalarField sf;
  sf.eval = [f](const Vec2& p) -> std::optional<double> { return f(p); };
  sf.grad = [g](const Vec2& p) -> std::optional<Vec2> { return g(p); };
  return sf;
}

Json CheckReport::to_json() const {
  Json j;
  j["name"] = name;
  j["pass"] = pass;
  j["margin"] = margin;
  j["tolerance"] = tolerance;
  j["violations"] = violations;
  j["params"] = params;
  return j;
}

CheckReport check_cap_monotonicity(const ScalarField& u, const Domain& dom, const CapSpec& cap,
                                   double h, double tol, int n_lambda) {
  if (cap.degenerate) throw VerifyError("check_cap_monotonicity: cap is degenerate");
  if (n_lambda < 1) throw VerifyError("check_cap_monotonicity: n_lambda must be positive");

  CheckReport rep;
  rep.name = "cap_monotonicity";
  rep.tolerance = tol;

  const RegionMask mask = interior_mask(dom, h);
  const Vec2 nu = cap.direction;
  double min_value_margin = kInf;
  double min_normal_deriv = kInf;
  long n_samples = 0;

  for (int k = 1; k <= n_lambda; ++k) {
    const double lambda =
        cap.lambda0 + (cap.lambda_star - cap.lambda0) * k / double(n_lambda + 1);
    for (int j = 0; j < mask.grid.ny; ++j)
      for (int i = 0; i < mask.grid.nx; ++i) {
        if (!mask.at(i, j)) continue;
        const Vec2 x = mask.grid.node(i, j);
        if (x.dot(nu) >= lambda - 1e-12) continue;
        const Vec2 xl = reflect_point(x, nu, lambda);
        if (dom.sd(xl) >= 0) continue;  // containment is the cap's job; skip strays
        const auto ux = u.eval(x);
        const auto uxl = u.eval(xl);
        if (!ux || !uxl) continue;
        ++n_samples;
        const double vm = *uxl - *ux;
        if (vm < min_value_margin) min_value_margin = vm;
        if (vm < -tol && rep.violations.size() < kMaxViolations)
          rep.violations.push_back(
              {{"type", "value"}, {"x", {x.x(), x.y()}}, {"lambda", lambda}, {"margin", vm}});
        const auto g = u.grad(x);
        if (g) {
          const double dn = g->dot(nu);
          if (dn < min_normal_deriv) min_normal_deriv = dn;
          if (dn < -tol && rep.violations.size() < kMaxViolations)
            rep.violations.push_back({{"type", "normal_derivative"},
                                      {"x", {x.x(), x.y()}},
                                      {"lambda", lambda},
                                      {"margin", dn}});
        }
      }
  }
  if (n_samples == 0)
    throw VerifyError("check_cap_monotonicity: no usable samples inside the cap");

  rep.margin = std::min(min_value_margin, min_normal_deriv);
  rep.pass = rep.margin >= -tol;
  rep.params = {{"direction", {nu.x(), nu.y()}},
                {"lambda0", cap.lambda0},
                {"lambda_star", cap.lambda_star},
                {"n_lambda", n_lambda},
                {"n_samples", n_samples},
                {"h", h},
                {"min_value_margin", min_value_margin},
                {"min_normal_derivative", min_normal_deriv}};

  // Symmetry diagnostic: when du/dnu vanishes near the terminal plane, the
  // solution should agree with its reflection across it.
  double plane_min_grad = kInf;
  for (int j = 0; j < mask.grid.ny; ++j)
    for (int i = 0; i < mask.grid.nx; ++i) {
      if (!mask.at(i, j)) continue;
      const Vec2 x = mask.grid.node(i, j);
      if (std::abs(x.dot(nu) - cap.lambda_star) > h) continue;
      const auto g = u.grad(x);
      if (g) plane_min_grad = std::min(plane_min_grad, std::abs(g->dot(nu)));
    }
  if (plane_min_grad < tol) {
    double mismatch = 0.0;
    for (int j = 0; j < mask.grid.ny; ++j)
      for (int i = 0; i < mask.grid.nx; ++i) {
        if (!mask.at(i, j)) continue;
        const Vec2 x = mask.grid.node(i, j);
        if (x.dot(nu) >= cap.lambda_star) continue;
        const Vec2 xl = reflect_point(x, nu, cap.lambda_star);
        if (dom.sd(xl) >= 0) continue;
        const auto a = u.eval(x);
        const auto b = u.eval(xl);
        if (a && b) mismatch = std::max(mismatch, std::abs(*a - *b));
      }
    rep.params["symmetry_diagnostic"] = {{"plane_min_normal_derivative", plane_min_grad},
                                         {"reflection_mismatch", mismatch}};
  }
  return rep;
}

CheckReport check_max_location(const ScalarField& u, const Domain& dom,
                               const RegionMask& omega_star, double tol) {
  CheckReport rep;
  rep.name = "max_location";
  rep.tolerance = tol;

  const Grid2D& gr = omega_star.grid;
  double max_omega = -kInf, max_comp = -kInf;
  Vec2 arg_omega = Vec2::Zero(), arg_comp = Vec2::Zero();
  long n_comp = 0;
  for (int j = 0; j < gr.ny; ++j)
    for (int i = 0; i < gr.nx; ++i) {
      const Vec2 x = gr.node(i, j);
      if (dom.sd(x) >= 0) continue;
      const auto v = u.eval(x);
      if (!v) continue;
      if (*v > max_omega) {
        max_omega = *v;
        arg_omega = x;
      }
      if (!omega_star.at(i, j)) {
        ++n_comp;
        if (*v > max_comp) {
          max_comp = *v;
          arg_comp = x;
        }
      }
    }
  if (n_comp == 0)
    throw VerifyError("check_max_location: complement of the optimal cap set is empty "
                      "(direction sampling too coarse)");
  if (!std::isfinite(max_omega))
    throw VerifyError("check_max_location: no usable interior samples");

  rep.margin = max_comp - max_omega;  // <= 0 by inclusion; pass iff >= -tol
  rep.pass = rep.margin >= -tol;
  if (!rep.pass)
    rep.violations.push_back({{"type", "max_in_cap_set"},
                              {"argmax_omega", {arg_omega.x(), arg_omega.y()}},
                              {"argmax_complement", {arg_comp.x(), arg_comp.y()}}});
  rep.params = {{"max_omega", max_omega},
                {"max_complement", max_comp},
                {"argmax_omega", {arg_omega.x(), arg_omega.y()}},
                {"argmax_complement", {arg_comp.x(), arg_comp.y()}},
                {"n_complement_nodes", n_comp}};
  return rep;
}

namespace {

// Ratio max_Omega u / max_{Omega_delta} u; +inf when Omega_delta is empty.
double bound_ratio(const ScalarField& u, const Domain& dom, const Grid2D& gr, double delta,
                   double* out_max, double* out_max_delta) {
  double max_omega = -kInf, max_delta = -kInf;
  for (int j = 0; j < gr.ny; ++j)
    for (int i = 0; i < gr.nx; ++i) {
      const Vec2 x = gr.node(i, j);
      const double sd = dom.sd(x);
      if (sd >= 0) continue;
      const auto v = u.eval(x);
      if (!v) continue;
      max_omega = std::max(max_omega, *v);
      if (sd < -delta) max_delta = std::max(max_delta, *v);
    }
  if (out_max) *out_max = max_omega;
  if (out_max_delta) *out_max_delta = max_delta;
  if (!std::isfinite(max_delta) || max_delta <= 0) return kInf;
  return max_omega / max_delta;
}

}  // namespace

CheckReport check_global_bound(const ScalarField& u, const Domain& dom, double delta, double C,
                               double h) {
  if (delta < 0) throw VerifyError("check_global_bound: delta must be nonnegative");
  CheckReport rep;
  rep.name = "global_bound";
  rep.tolerance = 0.0;

  const Grid2D gr = make_grid(dom, h);
  double max_omega = 0.0, max_delta = 0.0;
  const double ratio = bound_ratio(u, dom, gr, delta, &max_omega, &max_delta);
  if (!std::isfinite(ratio))
    throw VerifyError("check_global_bound: Omega_delta is empty at delta=" +
                      std::to_string(delta));

  rep.margin = C - ratio;
  rep.pass = rep.margin >= 0.0;

  // Empirical frontier: the largest delta that still satisfies the bound.
  double lo = delta, hi = dom.circumbound;
  if (bound_ratio(u, dom, gr, lo, nullptr, nullptr) > C) {
    lo = 0.0;
  }
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (bound_ratio(u, dom, gr, mid, nullptr, nullptr) <= C)
      lo = mid;
    else
      hi = mid;
  }

  rep.params = {{"delta", delta},
                {"C", C},
                {"ratio", ratio},
                {"max_omega", max_omega},
                {"max_omega_delta", max_delta},
                {"delta_max_passing", lo},
                {"h", h}};
  return rep;
}

CheckReport check_kelvin_no_critical(const ScalarField& u, const Domain& dom, const Vec2& x0,
                                     const Nonlinearity& f, int N, double h_out, double theta) {
  if (dom.exterior_radius <= 0)
    throw VerifyError("check_kelvin_no_critical: domain has no validated exterior radius");
  const KelvinFrame frame = build_frame(dom, x0, dom.exterior_radius);
  const TransformedDomain tdom = transform_domain(dom, frame);

  auto u_eval = [&u](const Vec2& x) -> double {
    const auto v = u.eval(x);
    if (!v) throw VerifyError("back-mapped point left the sampled region");
    return *v;
  };
  const GridFunction v = kelvin_transform(u_eval, frame, N, h_out, tdom);

  const Vec2 nu(-1.0, 0.0);  // sweep toward the image of x0 at (1, 0)
  const CapSpec cap = compute_lambda_star(tdom.domain, nu, h_out, 1e-2 * h_out);
  if (cap.degenerate)
    throw VerifyError("check_kelvin_no_critical: transformed cap is degenerate; the inverted "
                      "boundary neighborhood fails the convexity certificate");

  RegionMask region;
  region.grid = v.grid;
  region.inside.assign(v.grid.size(), 0);
  for (int j = 0; j < v.grid.ny; ++j)
    for (int i = 0; i < v.grid.nx; ++i)
      if (v.is_interior(i, j) && v.grid.node(i, j).dot(nu) < cap.lambda_star)
        region.inside[v.grid.index(i, j)] = 1;
  if (region.empty())
    throw VerifyError("check_kelvin_no_critical: transformed cap contains no grid nodes");

  const CriticalPointReport cp = critical_points(v, region, theta);

  CheckReport rep;
  rep.name = "kelvin_no_critical";
  rep.tolerance = theta;
  rep.pass = cp.nodes.empty();
  rep.margin = cp.min_grad - theta * cp.max_grad;
  for (const auto& [i, j] : cp.nodes) {
    if (rep.violations.size() >= kMaxViolations) break;
    const Vec2 y = v.grid.node(i, j);
    rep.violations.push_back({{"type", "near_critical_node"}, {"y", {y.x(), y.y()}}});
  }
  rep.params = {{"x0", {x0.x(), x0.y()}},
                {"nonlinearity", f.label},
                {"N", N},
                {"h_out", h_out},
                {"lambda_star", cap.lambda_star},
                {"delta_max", 1.0 + cap.lambda_star},
                {"min_grad", cp.min_grad},
                {"max_grad", cp.max_grad},
                {"clusters", cp.clusters},
                {"n_cap_nodes", region.count()},
                {"frame_R", frame.R}};
  return rep;
}

CheckReport check_g_reflection(const Nonlinearity& f, const TransformedDomain& tdom,
                               const CapSpec& cap, int N, int n_samples, double tol) {
  if (cap.degenerate) throw VerifyError("check_g_reflection: cap is degenerate");
  if (n_samples < 1) throw VerifyError("check_g_reflection: n_samples must be positive");

  CheckReport rep;
  rep.name = "g_reflection";
  rep.tolerance = tol;

  const TransformedNonlinearity g = transformed_nonlinearity(f, N);
  const Vec2 nu = cap.direction;
  const Domain& dom = tdom.domain;
  std::mt19937 rng(0xC0FFEE);  // fixed seed: reports must be reproducible
  std::uniform_real_distribution<double> ux(dom.bbox_lo.x(), dom.bbox_hi.x());
  std::uniform_real_distribution<double> uy(dom.bbox_lo.y(), dom.bbox_hi.y());

  std::vector<double> svals;
  for (int k = 0; k < 16; ++k) svals.push_back(0.1 * std::pow(100.0, k / 15.0));  // [0.1, 10]

  const int n_lambda = 8;
  double min_margin_g = kInf;
  double min_margin_r = kInf;
  long accepted = 0;

  for (int kl = 1; kl <= n_lambda; ++kl) {
    const double lambda =
        cap.lambda0 + (cap.lambda_star - cap.lambda0) * kl / double(n_lambda);
    const int want = std::max(1, n_samples / n_lambda);
    int got = 0;
    for (int tries = 0; tries < 200 * want && got < want; ++tries) {
      const Vec2 y(ux(rng), uy(rng));
      if (dom.sd(y) >= 0) continue;
      if (y.dot(nu) >= lambda - 1e-12) continue;
      const double ry = y.norm();
      if (ry < tdom.inner_radius - 1e-6 || ry > 1.0 + 1e-6)
        throw VerifyError("check_g_reflection: cap sample escapes the annulus 1/R <= |y| <= 1");
      const Vec2 yl = reflect_point(y, nu, lambda);
      const double ryl = yl.norm();
      ++got;
      ++accepted;
      min_margin_r = std::min(min_margin_r, ry - ryl);
      for (double s : svals) {
        const double gm = g.at_radius(ryl, s) - g.at_radius(ry, s);
        if (gm < min_margin_g) min_margin_g = gm;
        if (gm < -tol && rep.violations.size() < kMaxViolations)
          rep.violations.push_back({{"type", "g_monotonicity"},
                                    {"y", {y.x(), y.y()}},
                                    {"lambda", lambda},
                                    {"s", s},
                                    {"margin", gm}});
      }
    }
  }
  if (accepted == 0) throw VerifyError("check_g_reflection: no samples landed in the cap");

  rep.margin = min_margin_g;
  rep.pass = min_margin_g >= -tol && min_margin_r >= -1e-9;
  rep.params = {{"nonlinearity", f.label},
                {"N", N},
                {"n_samples", accepted},
                {"n_lambda", n_lambda},
                {"direction", {nu.x(), nu.y()}},
                {"lambda0", cap.lambda0},
                {"lambda_star", cap.lambda_star},
                {"min_radius_margin", min_margin_r},
                {"inner_radius", tdom.inner_radius}};
  return rep;
}

Json BoundednessTable::to_json() const {
  Json j;
  j["N"] = N;
  j["R_b"] = R_b;
  j["delta"] = delta;
  j["rows"] = Json::array();
  for (const auto& r : rows)
    j["rows"].push_back({{"label", r.label},
                         {"solved", r.solved},
                         {"out_of_hypothesis", r.out_of_hypothesis},
                         {"sup_norm", r.sup_norm},
                         {"ratio_delta", r.ratio_delta},
                         {"argmax_radius", r.argmax_radius},
                         {"message", r.message}});
  return j;
}

BoundednessTable boundedness_experiment(int N, double R_b, const std::vector<Nonlinearity>& family,
                                        double delta, double tol) {
  if (family.empty()) throw VerifyError("boundedness_experiment: empty family");
  if (delta <= 0 || delta >= R_b)
    throw VerifyError("boundedness_experiment: delta must lie in (0, R_b)");

  BoundednessTable table;
  table.N = N;
  table.R_b = R_b;
  table.delta = delta;
  int n_solved = 0;

  for (const auto& f : family) {
    BoundednessRow row;
    row.label = f.label;
    try {
      const RadialSolution sol = solve_radial_ball(N, f, R_b, tol);
      row.solved = true;
      row.sup_norm = sol.max_value();
      row.argmax_radius = sol.argmax_radius();
      double max_delta = 0.0;
      for (int k = 0; k <= 2048; ++k) {
        const double r = (R_b - delta) * k / 2048.0;
        max_delta = std::max(max_delta, sol.eval(r));
      }
      row.ratio_delta = row.sup_norm / max_delta;
      ++n_solved;
    } catch (const SolverError& e) {
      row.solved = false;
      row.message = e.what();
      row.out_of_hypothesis =
          std::string(e.what()).find("no positive solution bracketed") != std::string::npos;
    }
    table.rows.push_back(std::move(row));
  }
  if (n_solved == 0) throw VerifyError("boundedness_experiment: all solves failed");
  return table;
}

}  // namespace caplab
