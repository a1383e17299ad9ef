#pragma once

#include <Eigen/Sparse>
#include <stdexcept>
#include <string>
#include <vector>

#include "caplab/geometry.hpp"
#include "caplab/grid.hpp"
#include "caplab/nonlinearity.hpp"

namespace caplab {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Grid skeleton for a domain: interior mask, boundary ghosts pinned to 0,
/// Shortley-Weller cut fractions found by bisection on the signed distance.
GridFunction make_grid_function(const Domain& dom, double h);

/// Sparse operator for -Laplacian with the Shortley-Weller closure, acting
/// on the interior nodes listed in `interior_index` (row/col per node).
struct DiscreteLaplacian {
  Eigen::SparseMatrix<double> A;          // -Delta_h, interior x interior
  std::vector<int> interior_index;        // grid index of each row
  std::vector<int> row_of_node;           // -1 for non-interior
};

DiscreteLaplacian assemble_neg_laplacian(const GridFunction& skel);

struct EigenPair {
  double lambda1 = 0.0;
  GridFunction phi1;  // max-normalized, positive on interior
  int iterations = 0;
};

/// Principal Dirichlet eigenpair by inverse power iteration, converged when
/// the Rayleigh quotient changes by less than tol (relative).
EigenPair principal_eigenpair(const Domain& dom, double h, double tol, int max_iter = 400);

struct NewtonResult {
  GridFunction u;
  bool converged = false;
  bool positive = false;       // strictly positive interior and above trivial floor
  double residual = 0.0;       // final max-norm residual
  int iterations = 0;
  double init_amplitude = 0.0; // set by the sweep driver
  std::string message;
};

/// Damped Newton with Armijo backtracking on -Delta_h u = f(u), u = 0 on the
/// boundary. Throws SolverError on stagnation; convergence to a
/// non-positive solution is reported in the result, not thrown.
NewtonResult solve_semilinear(const Domain& dom, const Nonlinearity& f, double h,
                              const GridFunction& init, double tol, int max_iter = 60);

/// Amplitude-sweep driver: tries init = c * phi1 for each c and returns the
/// first converged positive solution.
NewtonResult solve_semilinear_sweep(const Domain& dom, const Nonlinearity& f, double h,
                                    const std::vector<double>& amplitudes, double tol);

struct CriticalPointReport {
  std::vector<std::pair<int, int>> nodes;  // grid (i,j) with |grad| below threshold
  double min_grad = 0.0;                   // min |grad_h u| over the region
  double max_grad = 0.0;
  double threshold = 0.0;
  int clusters = 0;  // 4-connected components among the flagged nodes
};

/// Nodes in `region` where |grad_h u| <= theta * max |grad_h u|.
CriticalPointReport critical_points(const GridFunction& u, const RegionMask& region,
                                    double theta = 1e-3);

}  // namespace caplab
