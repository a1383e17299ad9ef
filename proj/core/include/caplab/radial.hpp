#pragma once

#include <vector>

#include "caplab/nonlinearity.hpp"
#include "caplab/solver.hpp"

namespace caplab {

/// Radial profile solving u'' + (N-1)/r u' + f(u) = 0 on a ball or annulus,
/// with u = 0 on the boundary (and u'(0) = 0 for balls).
struct RadialSolution {
  enum class Kind { ball, annulus };
  Kind kind = Kind::ball;
  int N = 3;
  double r_in = 0.0;
  double r_out = 1.0;
  std::vector<double> r, u, du;

  double eval(double radius) const;   // Hermite interpolation of u
  double deval(double radius) const;  // linear interpolation of u'
  double max_value() const;
  double argmax_radius() const;
};

/// Ball shooting: bisection on u(0) = alpha until the first zero of u lands
/// at R_b. The alpha bracket [0.1, 1e3] is scanned geometrically; throws
/// SolverError("no positive solution bracketed") when no sign change exists.
RadialSolution solve_radial_ball(int N, const Nonlinearity& f, double R_b, double tol);

/// Annulus shooting: u(r_in) = 0, bisection on the launch slope u'(r_in)
/// until the next zero lands at r_out.
RadialSolution solve_radial_annulus(int N, const Nonlinearity& f, double r_in, double r_out,
                                    double tol);

}  // namespace caplab
