// caplab: numerical laboratory for moving-plane caps, Kelvin transforms, and
// bound checks on positive solutions of semilinear Dirichlet problems.

#include <CLI11.hpp>
#include <Eigen/Core>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "caplab/config.hpp"
#include "caplab/convexity.hpp"
#include "caplab/io.hpp"
#include "caplab/kelvin.hpp"
#include "caplab/radial.hpp"
#include "caplab/solver.hpp"
#include "caplab/verify.hpp"

namespace {

using namespace caplab;
namespace fs = std::filesystem;

struct Ctx {
  RunConfig cfg;
  fs::path out;
};

void emit_effective_config(const Ctx& ctx) {
  write_json((ctx.out / "effective_config.json").string(), ctx.cfg.raw);
}

double checks_opt(const Ctx& ctx, const std::string& key, double fallback) {
  if (!ctx.cfg.has("checks")) return fallback;
  return ctx.cfg.raw.at("checks").value(key, fallback);
}

/// Radial solution matching a disk/annulus preset centered at the origin.
RadialSolution preset_radial(const Domain& dom, const Nonlinearity& f, int N, double tol) {
  const Json& params = Json::object();
  (void)params;
  if (dom.preset_tag == Preset::disk) {
    const double R_b = dom.circumbound;
    return solve_radial_ball(N, f, R_b, tol);
  }
  if (dom.preset_tag == Preset::annulus) {
    double r_out = dom.circumbound;
    // Inner radius from the signed distance along a ray.
    double lo = 0.0, hi = r_out;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (dom.sd(Vec2(mid, 0.0)) > 0)
        lo = mid;
      else
        hi = mid;
    }
    return solve_radial_annulus(N, f, hi, r_out, tol);
  }
  throw ConfigError("this subcommand needs a disk or annulus preset centered at the origin");
}

int run_caps(const Ctx& ctx) {
  const Domain dom = ctx.cfg.make_domain();
  const double h = ctx.cfg.grid_h();
  const int n_dirs = static_cast<int>(checks_opt(ctx, "n_directions", 64));
  const double tol = checks_opt(ctx, "tol", 1e-2 * h);

  Json report;
  report["preset"] = preset_name(dom.preset_tag);
  report["h"] = h;
  report["n_directions"] = n_dirs;
  report["directions"] = Json::array();
  for (int k = 0; k < n_dirs; ++k) {
    const double th = 2.0 * M_PI * k / n_dirs;
    const Vec2 nu(std::cos(th), std::sin(th));
    const CapSpec cap = compute_lambda_star(dom, nu, h, tol);
    report["directions"].push_back({{"direction", {nu.x(), nu.y()}},
                                    {"lambda0", cap.lambda0},
                                    {"lambda_star", cap.lambda_star},
                                    {"degenerate", cap.degenerate}});
  }
  const RegionMask star = optimal_cap_set(dom, h, n_dirs, tol);
  write_mask((ctx.out / "omega_star.mask").string(), star);
  report["omega_star_nodes"] = star.count();
  report["omega_star_file"] = "omega_star.mask";
  write_json((ctx.out / "caps.json").string(), report);
  return 0;
}

int run_eigen(const Ctx& ctx) {
  const Domain dom = ctx.cfg.make_domain();
  const double h = ctx.cfg.grid_h();
  const double tol =
      ctx.cfg.has("solver") ? ctx.cfg.raw.at("solver").value("tol", 1e-10) : 1e-10;
  const EigenPair ep = principal_eigenpair(dom, h, tol);
  write_grid_values((ctx.out / "phi1.grid").string(), ep.phi1);
  Json report = {{"preset", preset_name(dom.preset_tag)},
                 {"h", h},
                 {"lambda1", ep.lambda1},
                 {"iterations", ep.iterations},
                 {"phi1_file", "phi1.grid"}};
  write_json((ctx.out / "eigen.json").string(), report);
  return 0;
}

int run_solve(const Ctx& ctx) {
  const Nonlinearity f = ctx.cfg.make_nonlinearity();
  if (ctx.cfg.has("radial")) {
    const Json& r = ctx.cfg.section("radial");
    const int N = r.value("N", 3);
    const double r_in = r.value("r_in", 0.0);
    const double r_out = r.value("r_out", 1.0);
    const double tol = r.value("tol", 1e-10);
    const RadialSolution sol = r_in <= 0.0 ? solve_radial_ball(N, f, r_out, tol)
                                           : solve_radial_annulus(N, f, r_in, r_out, tol);
    write_radial_csv((ctx.out / "radial.csv").string(), sol);
    Json report = {{"kind", r_in <= 0.0 ? "ball" : "annulus"},
                   {"N", N},
                   {"nonlinearity", f.label},
                   {"sup_norm", sol.max_value()},
                   {"argmax_radius", sol.argmax_radius()},
                   {"profile_file", "radial.csv"}};
    write_json((ctx.out / "solve.json").string(), report);
    return 0;
  }

  const Domain dom = ctx.cfg.make_domain();
  const double h = ctx.cfg.grid_h();
  double tol = 1e-9;
  std::vector<double> amplitudes = {0.5, 1.0, 2.0, 4.0, 8.0};
  if (ctx.cfg.has("solver")) {
    const Json& s = ctx.cfg.raw.at("solver");
    tol = s.value("tol", tol);
    if (s.contains("init_amplitudes")) amplitudes = s.at("init_amplitudes").get<std::vector<double>>();
  }
  const NewtonResult res = solve_semilinear_sweep(dom, f, h, amplitudes, tol);
  write_grid_values((ctx.out / "solution.grid").string(), res.u);
  Json report = {{"preset", preset_name(dom.preset_tag)},
                 {"h", h},
                 {"nonlinearity", f.label},
                 {"converged", res.converged},
                 {"positive", res.positive},
                 {"residual", res.residual},
                 {"iterations", res.iterations},
                 {"init_amplitude", res.init_amplitude},
                 {"sup_norm", res.u.max_interior()},
                 {"solution_file", "solution.grid"}};
  write_json((ctx.out / "solve.json").string(), report);
  return res.positive ? 0 : 1;
}

int run_kelvin(const Ctx& ctx) {
  const Domain dom = ctx.cfg.make_domain();
  const Nonlinearity f = ctx.cfg.make_nonlinearity();
  const Json& k = ctx.cfg.section("kelvin");
  const int N = k.value("N", 3);
  const double h_out = k.value("h_out", 0.01);
  const double threshold = k.value("threshold", 1e-2);
  Vec2 x0(dom.circumbound, 0.0);
  if (k.contains("x0")) x0 = Vec2(k.at("x0")[0].get<double>(), k.at("x0")[1].get<double>());

  const RadialSolution sol = preset_radial(dom, f, N, 1e-10);
  const ScalarField u = ScalarField::from_radial(sol, Vec2::Zero());
  auto u_eval = [&u](const Vec2& p) {
    const auto v = u.eval(p);
    if (!v) throw KelvinError("point outside the radial profile");
    return *v;
  };

  const KelvinFrame frame = build_frame(dom, x0, dom.exterior_radius);
  const KelvinResidualReport rep = check_kelvin_pde(u_eval, dom, f, frame, N, h_out, threshold);

  Json report = {{"preset", preset_name(dom.preset_tag)},
                 {"nonlinearity", f.label},
                 {"N", N},
                 {"frame", frame.to_json()},
                 {"residual", {{"max", rep.max_residual},
                               {"l2", rep.l2_residual},
                               {"g_scale", rep.g_scale},
                               {"relative", rep.rel_residual},
                               {"n_nodes", rep.n_nodes},
                               {"h", rep.h},
                               {"threshold", rep.threshold},
                               {"pass", rep.pass}}}};
  write_json((ctx.out / "kelvin.json").string(), report);
  return rep.pass ? 0 : 1;
}

int run_verify(const Ctx& ctx) {
  const Domain dom = ctx.cfg.make_domain();
  const Nonlinearity f =
      ctx.cfg.has("nonlinearity") ? ctx.cfg.make_nonlinearity() : make_constant(1.0, 3);
  const double h = ctx.cfg.grid_h();
  const int N = ctx.cfg.has("radial") ? ctx.cfg.section("radial").value("N", 3) : 3;
  const int n_dirs = static_cast<int>(checks_opt(ctx, "n_directions", 16));
  const double delta = checks_opt(ctx, "delta", 0.1);
  const int n_samples = static_cast<int>(checks_opt(ctx, "n_samples", 1000));
  const int n_lambda = static_cast<int>(checks_opt(ctx, "n_lambda", 16));

  const RadialSolution sol = preset_radial(dom, f, N, 1e-10);
  const ScalarField u = ScalarField::from_radial(sol, Vec2::Zero());
  double grad_scale = 0.0;
  for (double d : sol.du) grad_scale = std::max(grad_scale, std::abs(d));
  const double tol = checks_opt(ctx, "tol", 5.0 * h * grad_scale);

  Json reports = Json::array();
  bool all_pass = true;
  auto add = [&](const CheckReport& rep) {
    reports.push_back(rep.to_json());
    all_pass = all_pass && rep.pass;
  };

  double worst_margin = 0.0;
  for (int kd = 0; kd < n_dirs; ++kd) {
    const double th = 2.0 * M_PI * kd / n_dirs;
    const Vec2 nu(std::cos(th), std::sin(th));
    const CapSpec cap = compute_lambda_star(dom, nu, h, 1e-2 * h);
    CheckReport rep = check_cap_monotonicity(u, dom, cap, h, tol, n_lambda);
    worst_margin = std::min(worst_margin, rep.margin);
    if (kd == 0 || !rep.pass) add(rep);
    all_pass = all_pass && rep.pass;
  }
  reports.back()["params"]["worst_margin_all_directions"] = worst_margin;

  const RegionMask star = optimal_cap_set(dom, h, n_dirs, 1e-2 * h);
  add(check_max_location(u, dom, star, tol));

  Vec2 x0(dom.circumbound, 0.0);
  if (ctx.cfg.has("kelvin") && ctx.cfg.section("kelvin").contains("x0")) {
    const Json& j = ctx.cfg.section("kelvin").at("x0");
    x0 = Vec2(j[0].get<double>(), j[1].get<double>());
  }
  const double h_out =
      ctx.cfg.has("kelvin") ? ctx.cfg.section("kelvin").value("h_out", 0.01) : 0.01;

  const KelvinFrame frame = build_frame(dom, x0, dom.exterior_radius);
  const double C = checks_opt(ctx, "C", std::pow(frame.R / dom.exterior_radius, N - 2.0));
  add(check_global_bound(u, dom, delta, C, h));

  add(check_kelvin_no_critical(u, dom, x0, f, N, h_out));

  const TransformedDomain tdom = transform_domain(dom, frame);
  const CapSpec tcap = compute_lambda_star(tdom.domain, Vec2(-1.0, 0.0), h_out, 1e-2 * h_out);
  add(check_g_reflection(f, tdom, tcap, N, n_samples, 1e-9));

  Json out;
  out["preset"] = preset_name(dom.preset_tag);
  out["nonlinearity"] = f.label;
  out["N"] = N;
  out["h"] = h;
  out["C"] = C;
  out["all_pass"] = all_pass;
  out["checks"] = reports;
  write_json((ctx.out / "verify.json").string(), out);
  return all_pass ? 0 : 1;
}

int run_appendix(const Ctx& ctx) {
  Json app = ctx.cfg.has("appendix") ? ctx.cfg.raw.at("appendix") : Json::object();
  const std::string curve = app.value("curve", "gamma2");
  const double lo = app.value("lo", -0.01);
  const double hi = app.value("hi", 0.01);
  const int n_samples = app.value("n_samples", 401);
  const double delta_prime = app.value("delta_prime", 0.1);
  const double fd_step = app.value("fd_step", 1e-3);

  Json certs = Json::array();
  bool all_pass = true;
  auto cert_json = [](const std::string& name, const CapCertificate& c) {
    Json j;
    j["psi"] = name;
    j["A"] = Json::array();
    j["hessG"] = Json::array();
    for (int r = 0; r < c.A.rows(); ++r) {
      Json ra = Json::array(), rg = Json::array();
      for (int col = 0; col < c.A.cols(); ++col) {
        ra.push_back(c.A(r, col));
        rg.push_back(c.hessG(r, col));
      }
      j["A"].push_back(ra);
      j["hessG"].push_back(rg);
    }
    j["identity_error"] = c.identity_error;
    j["tangency_psd"] = c.tangency_psd;
    j["concave"] = c.concave;
    j["gamma"] = c.gamma;
    j["height"] = c.height;
    j["pass"] = c.pass;
    j["failure"] = c.failure;
    return j;
  };

  const std::vector<std::pair<std::string, BoundaryGraph>> presets = {
      {"constant", BoundaryGraph::constant(2)},
      {"quadratic_iso_c1", BoundaryGraph::quadratic_iso(2, 1.0)},
      {"quartic", BoundaryGraph::quartic(2)},
  };
  for (const auto& [name, psi] : presets) {
    CapCertificate cert = hessian_certificate(psi, fd_step);
    if (cert.pass) cap_height(psi, delta_prime, cert);
    all_pass = all_pass && cert.pass && cert.height > 0;
    certs.push_back(cert_json(name, cert));
  }
  write_json((ctx.out / "certificates.json").string(), certs);

  const FigureCurve fc = curve == "gamma1" ? FigureCurve::gamma1 : FigureCurve::gamma2;
  Json files = Json::array();
  for (const CurveDataset& ds : figure_curves(fc, lo, hi, n_samples)) {
    const std::string fname = "appendix_" + curve + "_" + ds.name + ".csv";
    write_curve_csv((ctx.out / fname).string(), ds);
    files.push_back({{"dataset", ds.name},
                     {"file", fname},
                     {"n", ds.x.size()},
                     {"slope_sign_changes", count_slope_sign_changes(ds)}});
  }
  Json report = {{"curve", curve}, {"datasets", files}, {"certificates_pass", all_pass}};
  write_json((ctx.out / "appendix.json").string(), report);
  return all_pass ? 0 : 1;
}

int run_nonlin(const Ctx& ctx) {
  const Nonlinearity f = ctx.cfg.make_nonlinearity();
  const Json& n = ctx.cfg.section("nonlin");
  const double s_max = n.value("s_max", 1e8);
  const int n_samples = n.value("n_samples", 4096);
  if (!n.contains("lambda1"))
    throw ConfigError("nonlin.lambda1 is required (domain-dependent principal eigenvalue)");
  const double lambda1 = n.at("lambda1").get<double>();

  const HypothesisReport rep = check_hypotheses(f, lambda1, s_max, n_samples);
  auto verdict = [](const HypothesisVerdict& v) {
    return Json{{"pass", v.pass}, {"margin", v.margin}, {"note", v.note}};
  };
  Json report = {{"nonlinearity", f.label},
                 {"s_max", rep.s_max},
                 {"n_samples", rep.n_samples},
                 {"lambda1", rep.lambda1},
                 {"H1", verdict(rep.H1)},
                 {"H2", verdict(rep.H2)},
                 {"H3", verdict(rep.H3)}};
  write_json((ctx.out / "nonlin.json").string(), report);
  return rep.H1.pass && rep.H2.pass && rep.H3.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"caplab: moving-plane caps, Kelvin transforms, and bound checks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::map<std::string, std::function<int(const Ctx&)>> runners = {
      {"caps", run_caps},     {"eigen", run_eigen},       {"solve", run_solve},
      {"kelvin", run_kelvin}, {"verify", run_verify},     {"appendix", run_appendix},
      {"nonlin", run_nonlin},
  };
  const std::map<std::string, std::string> help = {
      {"caps", "maximal caps and the optimal cap set"},
      {"eigen", "principal Dirichlet eigenpair"},
      {"solve", "semilinear grid solve or radial shooting"},
      {"kelvin", "Kelvin transform and PDE residual"},
      {"verify", "all theorem checks on a computed solution"},
      {"appendix", "convexity certificates and figure CSV datasets"},
      {"nonlin", "growth-hypothesis report for a nonlinearity"},
  };
  for (const auto& [name, desc] : help) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (default: config out_dir or cwd)");
  }

  CLI11_PARSE(app, argc, argv);

  if (const char* threads = std::getenv("CAPLAB_THREADS")) {
    const int n = std::atoi(threads);
    if (n > 0) Eigen::setNbThreads(n);
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    Ctx ctx{RunConfig::load(config_path), {}};
    ctx.out = out_dir.empty() ? fs::path(ctx.cfg.out_dir(".")) : fs::path(out_dir);
    fs::create_directories(ctx.out);
    emit_effective_config(ctx);
    return runners.at(sub)(ctx);
  } catch (const std::exception& e) {
    Json err = {{"error", e.what()}, {"subcommand", sub}, {"config", config_path}};
    std::cerr << err.dump(2) << std::endl;
    return 2;
  }
}
