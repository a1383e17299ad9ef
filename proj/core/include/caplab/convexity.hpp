#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace caplab {

struct ConvexityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Boundary graph near the normalized touch point: psi maps the tangential
/// (N-1)-vector y' to the vertical coordinate, with psi(0') = 1 and
/// vanishing central gradient.
struct BoundaryGraph {
  int dim = 1;  // N - 1
  std::function<double(const Eigen::VectorXd&)> psi;
  double radius_a = 1.0;  // evaluation domain radius

  double operator()(const Eigen::VectorXd& yp) const;

  static BoundaryGraph constant(int dim);                         // psi = 1
  static BoundaryGraph quadratic(const Eigen::MatrixXd& A);       // 1 + y'.A y'/2
  static BoundaryGraph quadratic_iso(int dim, double c);          // 1 + c|y'|^2/2
  static BoundaryGraph quartic(int dim);                          // 1 + y1^4
  static BoundaryGraph oscillatory();                             // 1 + x^5 sin(1/x), dim 1
};

/// F(y', y_N) = y_N [ |y'|^2 + psi(w)^2 ] - psi(w), w = y'/(|y'|^2 + y_N^2).
double implicit_F(const BoundaryGraph& psi, const Eigen::VectorXd& yp, double yN);

/// Implicit solve of F(y', phi(y')) = 0 by Newton from y_N = 1.
double solve_phi(const BoundaryGraph& psi, const Eigen::VectorXd& yp, double tol = 1e-14);

/// Graph of the inverted boundary: G(y') = g/( |y'|^2 + g^2 ),
/// g(y') = psi( y' / (|y'|^2 + phi(y')^2) ).
double cap_graph_G(const BoundaryGraph& psi, const Eigen::VectorXd& yp);

struct CapCertificate {
  Eigen::MatrixXd A;      // Hessian of psi at 0'
  Eigen::MatrixXd hessG;  // Hessian of G at 0'
  double identity_error = 0.0;  // max-norm of hessG + (2I + A)
  bool tangency_psd = false;    // A + I positive semidefinite
  bool concave = false;         // hessG negative definite
  bool pass = false;
  std::string failure;
  double delta_prime = 0.0;
  double gamma = 0.0;
  double height = 0.0;  // (1 - gamma) / 2
};

/// Finite-difference certificate: A and Hess G at 0' (Richardson-extrapolated
/// central differences), the identity Hess G = -(2I + A), and the exterior
/// tangency condition A + I >= 0.
CapCertificate hessian_certificate(const BoundaryGraph& psi, double fd_step = 1e-3);

/// gamma = max of G over the sampled sphere |y'| = delta_prime and the cap
/// height (1-gamma)/2. Throws when gamma >= 1.
void cap_height(const BoundaryGraph& psi, double delta_prime, CapCertificate& cert,
                int n_samples = 256);

// -- appendix figure data ---------------------------------------------------

enum class FigureCurve { gamma1, gamma2 };

struct CurveDataset {
  std::string name;
  std::vector<double> x;
  std::vector<double> value;
};

/// Oscillatory boundary profile 1 + x^5 sin(1/x) and its derivatives
/// (analytic; limits at x = 0).
double oscillatory_psi(double x);
double oscillatory_psi_d1(double x);
double oscillatory_psi_d2(double x);

/// Unit-circle comparison arc sqrt(1 - x^2) and derivatives.
double circle_g(double x);
double circle_g_d1(double x);
double circle_g_d2(double x);

/// Datasets for the appendix comparison curves. For gamma2:
///   d1_diff : psi' - g' on [lo, hi]
///   d2_diff : psi'' - g'' on [lo, hi]/20
///   inv_line: second coordinate of h(curve) - h(x, 1), matched by first coord
///   inv_circle: second coordinate of h(curve) - h(arc), matched by first coord
/// For gamma1 the profile is x^3/2 + 1 (inflection case) and only the
/// inversion datasets are emitted.
std::vector<CurveDataset> figure_curves(FigureCurve curve, double lo, double hi, int n_samples,
                                        double puncture_eps = 1e-5);

/// Sign changes of the finite-difference slope of a dataset.
int count_slope_sign_changes(const CurveDataset& ds);

}  // namespace caplab
