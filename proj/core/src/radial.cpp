#include "caplab/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace caplab {

namespace {

struct State {
  double u, v;  // u and u'
};

// Dormand-Prince 5(4) step for u'' + (N-1)/r u' + f(u) = 0.
struct Integrator {
  int N;
  const Nonlinearity* f;

  State rhs(double r, const State& y) const {
    return {y.v, -(*f)(std::max(y.u, 0.0)) - (N - 1) / r * y.v};
  }

  // One adaptive step; returns the accepted step size and writes the error
  // estimate. Classic embedded pair.
  State step(double r, const State& y, double h, double& err) const {
    auto ax = [](const State& a, double c, const State& b) {
      return State{a.u + c * b.u, a.v + c * b.v};
    };
    const State k1 = rhs(r, y);
    const State k2 = rhs(r + h / 5, ax(y, h / 5, k1));
    State t = y;
    t.u += h * (3.0 / 40 * k1.u + 9.0 / 40 * k2.u);
    t.v += h * (3.0 / 40 * k1.v + 9.0 / 40 * k2.v);
    const State k3 = rhs(r + 3 * h / 10, t);
    t = y;
    t.u += h * (44.0 / 45 * k1.u - 56.0 / 15 * k2.u + 32.0 / 9 * k3.u);
    t.v += h * (44.0 / 45 * k1.v - 56.0 / 15 * k2.v + 32.0 / 9 * k3.v);
    const State k4 = rhs(r + 4 * h / 5, t);
    t = y;
    t.u += h * (19372.0 / 6561 * k1.u - 25360.0 / 2187 * k2.u + 64448.0 / 6561 * k3.u -
                212.0 / 729 * k4.u);
    t.v += h * (19372.0 / 6561 * k1.v - 25360.0 / 2187 * k2.v + 64448.0 / 6561 * k3.v -
                212.0 / 729 * k4.v);
    const State k5 = rhs(r + 8 * h / 9, t);
    t = y;
    t.u += h * (9017.0 / 3168 * k1.u - 355.0 / 33 * k2.u + 46732.0 / 5247 * k3.u +
                49.0 / 176 * k4.u - 5103.0 / 18656 * k5.u);
    t.v += h * (9017.0 / 3168 * k1.v - 355.0 / 33 * k2.v + 46732.0 / 5247 * k3.v +
                49.0 / 176 * k4.v - 5103.0 / 18656 * k5.v);
    const State k6 = rhs(r + h, t);
    State y5 = y;
    y5.u += h * (35.0 / 384 * k1.u + 500.0 / 1113 * k3.u + 125.0 / 192 * k4.u -
                 2187.0 / 6784 * k5.u + 11.0 / 84 * k6.u);
    y5.v += h * (35.0 / 384 * k1.v + 500.0 / 1113 * k3.v + 125.0 / 192 * k4.v -
                 2187.0 / 6784 * k5.v + 11.0 / 84 * k6.v);
    const State k7 = rhs(r + h, y5);
    State y4 = y;
    y4.u += h * (5179.0 / 57600 * k1.u + 7571.0 / 16695 * k3.u + 393.0 / 640 * k4.u -
                 92097.0 / 339200 * k5.u + 187.0 / 2100 * k6.u + 1.0 / 40 * k7.u);
    y4.v += h * (5179.0 / 57600 * k1.v + 7571.0 / 16695 * k3.v + 393.0 / 640 * k4.v -
                 92097.0 / 339200 * k5.v + 187.0 / 2100 * k6.v + 1.0 / 40 * k7.v);
    err = std::max(std::abs(y5.u - y4.u), std::abs(y5.v - y4.v));
    return y5;
  }
};

struct Trajectory {
  std::vector<double> r, u, du;
  bool crossed = false;
  double r_cross = 0.0;  // first zero of u, when crossed
};

// Integrate from (r0, y0) to r_end with event detection on u = 0.
Trajectory integrate(const Integrator& I, double r0, State y0, double r_end, double tol) {
  Trajectory tr;
  double r = r0;
  State y = y0;
  tr.r.push_back(r);
  tr.u.push_back(y.u);
  tr.du.push_back(y.v);
  // Cap the step so the stored trajectory stays dense enough for the
  // Hermite/linear interpolants downstream.
  const double hmax = (r_end - r0) / 800;
  double h = std::min(1e-3, hmax);
  const double hmin = 1e-13;
  int steps = 0;
  while (r < r_end && steps++ < 2'000'000) {
    h = std::min(h, r_end - r);
    double err;
    State ynew = I.step(r, y, h, err);
    const double tol_step = tol * std::max({1.0, std::abs(y.u), std::abs(y.v)});
    if (err > tol_step && h > hmin) {
      h *= std::clamp(0.9 * std::pow(tol_step / err, 0.2), 0.1, 1.0);
      continue;
    }
    const double rn = r + h;
    if (y.u > 0 && ynew.u <= 0) {
      // Cubic Hermite root of u within the step.
      double lo = 0, hi = 1;
      auto hermite = [&](double s) {
        const double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * y.u + (s3 - 2 * s2 + s) * h * y.v +
               (-2 * s3 + 3 * s2) * ynew.u + (s3 - s2) * h * ynew.v;
      };
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (hermite(mid) > 0 ? lo : hi) = mid;
      }
      tr.crossed = true;
      tr.r_cross = r + 0.5 * (lo + hi) * h;
      tr.r.push_back(tr.r_cross);
      tr.u.push_back(0.0);
      const double s = 0.5 * (lo + hi), s2 = s * s;
      const double dh = (6 * s2 - 6 * s) * y.u / h + (3 * s2 - 4 * s + 1) * y.v +
                        (-6 * s2 + 6 * s) * ynew.u / h + (3 * s2 - 2 * s) * ynew.v;
      tr.du.push_back(dh);
      return tr;
    }
    r = rn;
    y = ynew;
    tr.r.push_back(r);
    tr.u.push_back(y.u);
    tr.du.push_back(y.v);
    if (err > 0) h = std::min(hmax, h * std::clamp(0.9 * std::pow(tol_step / err, 0.2), 0.2, 5.0));
  }
  return tr;
}

// Shooting objective: positive if u survives to r_end, negative (by the
// distance the zero fell short) if u crossed earlier.
double objective(const Trajectory& tr, double r_end) {
  if (tr.crossed) return tr.r_cross - r_end;
  return tr.u.back();
}

Trajectory shoot_ball(const Integrator& I, double alpha, double R_b, double tol) {
  // Series start near r = 0: u ~ alpha - f(alpha) r^2 / (2N).
  const double r0 = 1e-7 * R_b;
  const double fa = (*I.f)(alpha);
  State y0{alpha - fa * r0 * r0 / (2 * I.N), -fa * r0 / I.N};
  return integrate(I, r0, y0, R_b, tol);
}

Trajectory shoot_annulus(const Integrator& I, double beta, double r_in, double r_out,
                         double tol) {
  // Launch just inside to avoid the u<=0 event at the left endpoint.
  const double r0 = r_in + 1e-9 * (r_out - r_in);
  State y0{beta * (r0 - r_in), beta};
  return integrate(I, r0, y0, r_out, tol);
}

template <typename Shoot>
double bisect_parameter(Shoot shoot, double r_end, double lo_param, double hi_param,
                        int scan_points, double tol) {
  // Geometric scan for a sign change of the objective.
  double prev_p = lo_param;
  double prev_F = objective(shoot(prev_p), r_end);
  double a = 0, b = 0;
  bool found = false;
  for (int k = 1; k <= scan_points; ++k) {
    const double pk =
        lo_param * std::pow(hi_param / lo_param, static_cast<double>(k) / scan_points);
    const double Fk = objective(shoot(pk), r_end);
    if ((prev_F > 0) != (Fk > 0)) {
      a = prev_p;
      b = pk;
      found = true;
      break;
    }
    prev_p = pk;
    prev_F = Fk;
  }
  if (!found) throw SolverError("no positive solution bracketed");
  double Fa = objective(shoot(a), r_end);
  for (int it = 0; it < 200 && (b - a) > 1e-14 * b; ++it) {
    const double mid = 0.5 * (a + b);
    const double Fm = objective(shoot(mid), r_end);
    if (std::abs(Fm) < tol) return mid;
    if ((Fa > 0) == (Fm > 0)) {
      a = mid;
      Fa = Fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

RadialSolution from_trajectory(const Trajectory& tr, int N, RadialSolution::Kind kind,
                               double r_in, double r_out) {
  RadialSolution sol;
  sol.kind = kind;
  sol.N = N;
  sol.r_in = r_in;
  sol.r_out = r_out;
  sol.r = tr.r;
  sol.u = tr.u;
  sol.du = tr.du;
  if (kind == RadialSolution::Kind::ball) {
    // Prepend the center sample.
    sol.r.insert(sol.r.begin(), 0.0);
    sol.u.insert(sol.u.begin(), tr.u.front());
    sol.du.insert(sol.du.begin(), 0.0);
  }
  return sol;
}

}  // namespace

double RadialSolution::eval(double radius) const {
  if (radius <= r.front()) return u.front();
  if (radius >= r.back()) return u.back();
  auto it = std::upper_bound(r.begin(), r.end(), radius);
  const size_t k = it - r.begin() - 1;
  const double h = r[k + 1] - r[k];
  if (h <= 0) return u[k];
  const double s = (radius - r[k]) / h, s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * u[k] + (s3 - 2 * s2 + s) * h * du[k] +
         (-2 * s3 + 3 * s2) * u[k + 1] + (s3 - s2) * h * du[k + 1];
}

double RadialSolution::deval(double radius) const {
  if (radius <= r.front()) return du.front();
  if (radius >= r.back()) return du.back();
  auto it = std::upper_bound(r.begin(), r.end(), radius);
  const size_t k = it - r.begin() - 1;
  const double h = r[k + 1] - r[k];
  if (h <= 0) return du[k];
  const double s = (radius - r[k]) / h;
  return du[k] * (1 - s) + du[k + 1] * s;
}

double RadialSolution::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  const int n = 4096;
  for (int k = 0; k <= n; ++k)
    m = std::max(m, eval(r_in + (r_out - r_in) * k / n));
  return m;
}

double RadialSolution::argmax_radius() const {
  double m = -std::numeric_limits<double>::infinity(), arg = r_in;
  const int n = 4096;
  for (int k = 0; k <= n; ++k) {
    const double rr = r_in + (r_out - r_in) * k / n;
    const double v = eval(rr);
    if (v > m) {
      m = v;
      arg = rr;
    }
  }
  return arg;
}

RadialSolution solve_radial_ball(int N, const Nonlinearity& f, double R_b, double tol) {
  if (N < 2) throw SolverError("solve_radial_ball: N >= 2 required");
  Integrator I{N, &f};
  const double itol = std::min(tol, 1e-10);
  auto shoot = [&](double alpha) { return shoot_ball(I, alpha, R_b, itol); };
  const double alpha = bisect_parameter(shoot, R_b, 0.1, 1e3, 96, tol);
  Trajectory tr = shoot(alpha);
  RadialSolution sol = from_trajectory(tr, N, RadialSolution::Kind::ball, 0.0, R_b);
  if (!tr.crossed) {
    // Landed with small positive u(R_b); pin the endpoint.
    sol.r.push_back(R_b);
    sol.u.push_back(0.0);
    sol.du.push_back(sol.du.back());
  }
  return sol;
}

RadialSolution solve_radial_annulus(int N, const Nonlinearity& f, double r_in, double r_out,
                                    double tol) {
  if (N < 2) throw SolverError("solve_radial_annulus: N >= 2 required");
  if (!(0 < r_in && r_in < r_out)) throw SolverError("solve_radial_annulus: bad radii");
  Integrator I{N, &f};
  const double itol = std::min(tol, 1e-10);
  auto shoot = [&](double beta) { return shoot_annulus(I, beta, r_in, r_out, itol); };
  const double beta = bisect_parameter(shoot, r_out, 0.1, 1e3, 96, tol);
  Trajectory tr = shoot(beta);
  RadialSolution sol = from_trajectory(tr, N, RadialSolution::Kind::annulus, r_in, r_out);
  sol.r.insert(sol.r.begin(), r_in);
  sol.u.insert(sol.u.begin(), 0.0);
  sol.du.insert(sol.du.begin(), beta);
  if (!tr.crossed) {
    sol.r.push_back(r_out);
    sol.u.push_back(0.0);
    sol.du.push_back(sol.du.back());
  }
  return sol;
}

}  // namespace caplab
