#include "caplab/solver.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace caplab {

namespace {

// Cut fraction toward the boundary along +dir from an interior node.
double cut_fraction(const Domain& dom, const Vec2& x, const Vec2& dir, double h) {
  double lo = 0.0, hi = 1.0;
  double flo = dom.sd(x);
  if (flo >= 0) return 1e-3;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (dom.sd(x + mid * h * dir) < 0)
      lo = mid;
    else
      hi = mid;
  }
  return std::clamp(0.5 * (lo + hi), 1e-3, 1.0);
}

}  // namespace

GridFunction make_grid_function(const Domain& dom, double h) {
  GridFunction gf;
  gf.grid = make_grid(dom, h);
  const int n = gf.grid.size();
  gf.value.assign(n, 0.0);
  gf.defined.assign(n, 0);
  gf.interior.assign(n, 0);
  gf.frac.assign(n, {});

  for (int j = 0; j < gf.grid.ny; ++j)
    for (int i = 0; i < gf.grid.nx; ++i)
      if (dom.sd(gf.grid.node(i, j)) < 0) {
        gf.interior[gf.grid.index(i, j)] = 1;
        gf.defined[gf.grid.index(i, j)] = 1;
      }

  const int di[4] = {-1, 1, 0, 0};
  const int dj[4] = {0, 0, -1, 1};
  const Vec2 dirs[4] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
  for (int j = 0; j < gf.grid.ny; ++j)
    for (int i = 0; i < gf.grid.nx; ++i) {
      const int idx = gf.grid.index(i, j);
      if (!gf.interior[idx]) continue;
      const Vec2 x = gf.grid.node(i, j);
      for (int d = 0; d < 4; ++d) {
        const int ni = i + di[d], nj = j + dj[d];
        const bool nb_interior = gf.grid.contains(ni, nj) && gf.interior[gf.grid.index(ni, nj)];
        double th = 1.0;
        if (!nb_interior) {
          th = cut_fraction(dom, x, dirs[d], h);
          if (gf.grid.contains(ni, nj)) gf.defined[gf.grid.index(ni, nj)] = 1;  // ghost 0
        }
        auto& fr = gf.frac[idx];
        if (d == 0) fr.w = th;
        if (d == 1) fr.e = th;
        if (d == 2) fr.s = th;
        if (d == 3) fr.n = th;
      }
    }
  return gf;
}

DiscreteLaplacian assemble_neg_laplacian(const GridFunction& skel) {
  DiscreteLaplacian L;
  const Grid2D& g = skel.grid;
  L.row_of_node.assign(g.size(), -1);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (skel.is_interior(i, j)) {
        L.row_of_node[g.index(i, j)] = static_cast<int>(L.interior_index.size());
        L.interior_index.push_back(g.index(i, j));
      }
  const int n = static_cast<int>(L.interior_index.size());
  if (n == 0) throw SolverError("assemble_neg_laplacian: empty interior");

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * n);
  const double h2 = g.h * g.h;
  for (int row = 0; row < n; ++row) {
    const int idx = L.interior_index[row];
    const int i = idx % g.nx, j = idx / g.nx;
    const auto& fr = skel.frac[idx];
    double diag = 2.0 / (fr.w * fr.e * h2) + 2.0 / (fr.s * fr.n * h2);
    auto couple = [&](int ni, int nj, double th, double th_opp) {
      if (!g.contains(ni, nj)) return;
      const int r2 = L.row_of_node[g.index(ni, nj)];
      if (r2 >= 0) trip.emplace_back(row, r2, -2.0 / (th * (th + th_opp) * h2));
    };
    couple(i - 1, j, fr.w, fr.e);
    couple(i + 1, j, fr.e, fr.w);
    couple(i, j - 1, fr.s, fr.n);
    couple(i, j + 1, fr.n, fr.s);
    trip.emplace_back(row, row, diag);
  }
  L.A.resize(n, n);
  L.A.setFromTriplets(trip.begin(), trip.end());
  return L;
}

EigenPair principal_eigenpair(const Domain& dom, double h, double tol, int max_iter) {
  GridFunction skel = make_grid_function(dom, h);
  DiscreteLaplacian L = assemble_neg_laplacian(skel);
  const int n = static_cast<int>(L.interior_index.size());
  const double diam = (dom.bbox_hi - dom.bbox_lo).norm();
  if (diam / h < 32) throw SolverError("principal_eigenpair: grid too coarse for the domain");

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(L.A);
  if (lu.info() != Eigen::Success) throw SolverError("principal_eigenpair: factorization failed");

  Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  v.normalize();
  double lambda = 0.0, lambda_prev = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < max_iter; ++it) {
    Eigen::VectorXd w = lu.solve(v);
    w.normalize();
    lambda = w.dot(L.A * w);
    if (std::abs(lambda - lambda_prev) < tol * std::abs(lambda)) {
      v = w;
      break;
    }
    lambda_prev = lambda;
    v = w;
  }
  if (it == max_iter)
    throw SolverError("principal_eigenpair: no convergence in " + std::to_string(max_iter) +
                      " iterations, last lambda=" + std::to_string(lambda));

  if (v.sum() < 0) v = -v;
  const double vmax = v.maxCoeff();
  if (v.minCoeff() <= 0)
    throw SolverError("principal_eigenpair: eigenfunction lost positivity");
  EigenPair ep;
  ep.lambda1 = lambda;
  ep.iterations = it + 1;
  ep.phi1 = skel;
  for (int row = 0; row < n; ++row) ep.phi1.value[L.interior_index[row]] = v[row] / vmax;
  return ep;
}

namespace {

Eigen::VectorXd interior_values(const GridFunction& u, const DiscreteLaplacian& L) {
  Eigen::VectorXd v(L.interior_index.size());
  for (size_t r = 0; r < L.interior_index.size(); ++r) v[r] = u.value[L.interior_index[r]];
  return v;
}

}  // namespace

NewtonResult solve_semilinear(const Domain& dom, const Nonlinearity& f, double h,
                              const GridFunction& init, double tol, int max_iter) {
  GridFunction skel = make_grid_function(dom, h);
  if (init.grid.nx != skel.grid.nx || init.grid.ny != skel.grid.ny)
    throw SolverError("solve_semilinear: init grid mismatch");
  DiscreteLaplacian L = assemble_neg_laplacian(skel);
  const int n = static_cast<int>(L.interior_index.size());

  Eigen::VectorXd u = interior_values(init, L);
  auto residual = [&](const Eigen::VectorXd& w) -> Eigen::VectorXd {
    Eigen::VectorXd r = L.A * w;
    for (int k = 0; k < n; ++k) r[k] -= f(w[k]);
    return r;
  };

  Eigen::VectorXd F = residual(u);
  NewtonResult res;
  int it = 0;
  for (; it < max_iter; ++it) {
    if (F.lpNorm<Eigen::Infinity>() < tol) break;
    Eigen::SparseMatrix<double> J = L.A;
    for (int k = 0; k < n; ++k) J.coeffRef(k, k) -= f.deriv(u[k]);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(J);
    if (lu.info() != Eigen::Success)
      throw SolverError("solve_semilinear: singular Jacobian, last residual " +
                        std::to_string(F.lpNorm<Eigen::Infinity>()));
    const Eigen::VectorXd delta = lu.solve(-F);

    // Armijo backtracking on |F|^2 with damping floor 2^-10.
    const double phi0 = F.squaredNorm();
    double t = 1.0;
    bool accepted = false;
    while (t >= std::pow(2.0, -10)) {
      const Eigen::VectorXd cand = u + t * delta;
      const Eigen::VectorXd Fc = residual(cand);
      if (Fc.squaredNorm() <= (1.0 - 1e-4 * t) * phi0) {
        u = cand;
        F = Fc;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      // Stagnation at the floating-point floor of the stencil is convergence,
      // not failure: the 1/h^2 scaling of the operator bounds the attainable
      // residual from below.
      const double round_floor = 64 * std::numeric_limits<double>::epsilon() *
                                 (u.lpNorm<Eigen::Infinity>() / (h * h) + 1.0);
      if (F.lpNorm<Eigen::Infinity>() <= round_floor) break;
      throw SolverError("solve_semilinear: Newton stagnation, last residual " +
                        std::to_string(F.lpNorm<Eigen::Infinity>()));
    }
  }
  res.residual = F.lpNorm<Eigen::Infinity>();
  const double round_floor = 64 * std::numeric_limits<double>::epsilon() *
                             (u.lpNorm<Eigen::Infinity>() / (h * h) + 1.0);
  res.converged = res.residual < std::max(tol, round_floor);
  if (!res.converged)
    throw SolverError("solve_semilinear: no convergence in " + std::to_string(max_iter) +
                      " iterations, last residual " + std::to_string(res.residual));
  res.iterations = it;
  res.u = skel;
  for (int r = 0; r < n; ++r) res.u.value[L.interior_index[r]] = u[r];
  const double floor = 1e-6;
  res.positive = u.minCoeff() > 0 && u.maxCoeff() > floor;
  res.message = res.positive ? "positive solution"
                             : "converged to a non-positive (or trivial) solution; "
                               "try a different init amplitude";
  return res;
}

NewtonResult solve_semilinear_sweep(const Domain& dom, const Nonlinearity& f, double h,
                                    const std::vector<double>& amplitudes, double tol) {
  EigenPair ep = principal_eigenpair(dom, h, 1e-10);
  std::string log;
  for (double c : amplitudes) {
    GridFunction init = ep.phi1;
    for (auto& v : init.value) v *= c;
    try {
      NewtonResult res = solve_semilinear(dom, f, h, init, tol);
      if (res.converged && res.positive) {
        res.init_amplitude = c;
        return res;
      }
      log += "c=" + std::to_string(c) + ": " + res.message + "; ";
    } catch (const SolverError& e) {
      log += "c=" + std::to_string(c) + ": " + e.what() + "; ";
    }
  }
  throw SolverError("solve_semilinear_sweep: no amplitude produced a positive solution (" + log +
                    ")");
}

CriticalPointReport critical_points(const GridFunction& u, const RegionMask& region,
                                    double theta) {
  if (region.empty()) throw SolverError("critical_points: empty region");
  if (region.grid.nx != u.grid.nx || region.grid.ny != u.grid.ny)
    throw SolverError("critical_points: region grid mismatch");
  const Grid2D& g = u.grid;
  std::vector<double> gradmag(g.size(), -1.0);
  double maxg = 0.0, ming = std::numeric_limits<double>::infinity();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!region.at(i, j)) continue;
      if (i == 0 || i == g.nx - 1 || j == 0 || j == g.ny - 1) continue;
      if (!u.is_defined(i - 1, j) || !u.is_defined(i + 1, j) || !u.is_defined(i, j - 1) ||
          !u.is_defined(i, j + 1))
        continue;
      const double gx = (u.at(i + 1, j) - u.at(i - 1, j)) / (2 * g.h);
      const double gy = (u.at(i, j + 1) - u.at(i, j - 1)) / (2 * g.h);
      const double m = std::hypot(gx, gy);
      gradmag[g.index(i, j)] = m;
      maxg = std::max(maxg, m);
      ming = std::min(ming, m);
    }
  CriticalPointReport rep;
  rep.max_grad = maxg;
  rep.min_grad = ming;
  rep.threshold = theta * maxg;
  std::vector<std::uint8_t> flagged(g.size(), 0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int idx = g.index(i, j);
      if (gradmag[idx] >= 0 && gradmag[idx] <= rep.threshold) {
        rep.nodes.emplace_back(i, j);
        flagged[idx] = 1;
      }
    }
  // 4-connected components among the flagged nodes.
  std::vector<std::uint8_t> seen(g.size(), 0);
  for (const auto& [si, sj] : rep.nodes) {
    if (seen[g.index(si, sj)]) continue;
    ++rep.clusters;
    std::deque<std::pair<int, int>> q{{si, sj}};
    seen[g.index(si, sj)] = 1;
    while (!q.empty()) {
      auto [ci, cj] = q.front();
      q.pop_front();
      const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
      for (int d = 0; d < 4; ++d) {
        const int ni = ci + di[d], nj = cj + dj[d];
        if (!g.contains(ni, nj)) continue;
        const int idx = g.index(ni, nj);
        if (flagged[idx] && !seen[idx]) {
          seen[idx] = 1;
          q.emplace_back(ni, nj);
        }
      }
    }
  }
  return rep;
}

}  // namespace caplab
