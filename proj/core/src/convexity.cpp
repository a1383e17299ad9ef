#include "caplab/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace caplab {

double BoundaryGraph::operator()(const Eigen::VectorXd& yp) const {
  if (yp.size() != dim) throw ConvexityError("BoundaryGraph: argument dimension mismatch");
  if (yp.norm() > radius_a) throw ConvexityError("BoundaryGraph: argument outside evaluation domain");
  return psi(yp);
}

BoundaryGraph BoundaryGraph::constant(int dim) {
  return {dim, [](const Eigen::VectorXd&) { return 1.0; }, 10.0};
}

BoundaryGraph BoundaryGraph::quadratic(const Eigen::MatrixXd& A) {
  const int dim = static_cast<int>(A.rows());
  return {dim, [A](const Eigen::VectorXd& yp) { return 1.0 + 0.5 * yp.dot(A * yp); }, 10.0};
}

BoundaryGraph BoundaryGraph::quadratic_iso(int dim, double c) {
  return {dim, [c](const Eigen::VectorXd& yp) { return 1.0 + 0.5 * c * yp.squaredNorm(); }, 10.0};
}

BoundaryGraph BoundaryGraph::quartic(int dim) {
  return {dim, [](const Eigen::VectorXd& yp) { return 1.0 + std::pow(yp[0], 4); }, 10.0};
}

BoundaryGraph BoundaryGraph::oscillatory() {
  return {1, [](const Eigen::VectorXd& yp) { return oscillatory_psi(yp[0]); }, 1.0};
}

double implicit_F(const BoundaryGraph& psi, const Eigen::VectorXd& yp, double yN) {
  const double denom = yp.squaredNorm() + yN * yN;
  if (denom <= 0) throw ConvexityError("implicit_F: (y', y_N) must be nonzero");
  const Eigen::VectorXd w = yp / denom;
  const double p = psi(w);
  return yN * (yp.squaredNorm() + p * p) - p;
}

double solve_phi(const BoundaryGraph& psi, const Eigen::VectorXd& yp, double tol) {
  double yN = 1.0;
  const double fd = 1e-7;
  for (int it = 0; it < 100; ++it) {
    const double F = implicit_F(psi, yp, yN);
    if (std::abs(F) < tol) return yN;
    const double dF = (implicit_F(psi, yp, yN + fd) - implicit_F(psi, yp, yN - fd)) / (2 * fd);
    if (std::abs(dF) < 1e-8)
      throw ConvexityError("solve_phi: implicit function neighborhood exceeded");
    yN -= F / dF;
  }
  if (std::abs(implicit_F(psi, yp, yN)) >= tol)
    throw ConvexityError("solve_phi: Newton did not converge");
  return yN;
}

double cap_graph_G(const BoundaryGraph& psi, const Eigen::VectorXd& yp) {
  const double phi = solve_phi(psi, yp);
  const double denom = yp.squaredNorm() + phi * phi;
  const double g = psi(Eigen::VectorXd(yp / denom));
  return g / (yp.squaredNorm() + g * g);
}

namespace {

// Richardson-extrapolated central-difference Hessian at the origin.
Eigen::MatrixXd fd_hessian(const std::function<double(const Eigen::VectorXd&)>& q, int dim,
                           double step) {
  auto hess_at = [&](double t) {
    Eigen::MatrixXd H(dim, dim);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(dim);
    const double q0 = q(z);
    for (int i = 0; i < dim; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
      e[i] = t;
      H(i, i) = (q(e) - 2 * q0 + q(-e)) / (t * t);
      for (int j = i + 1; j < dim; ++j) {
        Eigen::VectorXd ej = Eigen::VectorXd::Zero(dim);
        ej[j] = t;
        const double v = (q(e + ej) - q(e - ej) - q(-e + ej) + q(-e - ej)) / (4 * t * t);
        H(i, j) = H(j, i) = v;
      }
    }
    return H;
  };
  const Eigen::MatrixXd c = hess_at(step);
  const Eigen::MatrixXd f = hess_at(step / 2);
  return (4.0 * f - c) / 3.0;
}

}  // namespace

CapCertificate hessian_certificate(const BoundaryGraph& psi, double fd_step) {
  CapCertificate cert;
  cert.A = fd_hessian([&psi](const Eigen::VectorXd& v) { return psi(v); }, psi.dim, fd_step);
  cert.hessG =
      fd_hessian([&psi](const Eigen::VectorXd& v) { return cap_graph_G(psi, v); }, psi.dim,
                 fd_step);

  const Eigen::MatrixXd expected =
      -(2.0 * Eigen::MatrixXd::Identity(psi.dim, psi.dim) + cert.A);
  cert.identity_error = (cert.hessG - expected).cwiseAbs().maxCoeff();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_tan(
      cert.A + Eigen::MatrixXd::Identity(psi.dim, psi.dim));
  const double psd_tol = 1e-6 * (1.0 + cert.A.cwiseAbs().maxCoeff());
  cert.tangency_psd = es_tan.eigenvalues().minCoeff() >= -psd_tol;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_G(
      0.5 * (cert.hessG + cert.hessG.transpose()));
  cert.concave = es_G.eigenvalues().maxCoeff() < 0;

  cert.pass = cert.tangency_psd && cert.concave;
  if (!cert.tangency_psd)
    cert.failure = "exterior tangency violated: A + I is not positive semidefinite";
  else if (!cert.concave)
    cert.failure = "inverted neighborhood not convex";
  return cert;
}

void cap_height(const BoundaryGraph& psi, double delta_prime, CapCertificate& cert,
                int n_samples) {
  if (delta_prime <= 0) throw ConvexityError("cap_height: delta' must be positive");
  double gamma = -std::numeric_limits<double>::infinity();
  if (psi.dim == 1) {
    Eigen::VectorXd v(1);
    v[0] = delta_prime;
    gamma = std::max(cap_graph_G(psi, v), cap_graph_G(psi, Eigen::VectorXd(-v)));
  } else if (psi.dim == 2) {
    for (int k = 0; k < n_samples; ++k) {
      const double th = 2.0 * std::numbers::pi * k / n_samples;
      Eigen::VectorXd v(2);
      v << delta_prime * std::cos(th), delta_prime * std::sin(th);
      gamma = std::max(gamma, cap_graph_G(psi, v));
    }
  } else {
    throw ConvexityError("cap_height: only dim 1 and 2 supported");
  }
  if (gamma >= 1.0)
    throw ConvexityError("cap_height: gamma >= 1 contradicts the strict maximum at 0'");
  cert.delta_prime = delta_prime;
  cert.gamma = gamma;
  cert.height = 0.5 * (1.0 - gamma);
}

// -- appendix curves ---------------------------------------------------------

double oscillatory_psi(double x) {
  if (x == 0.0) return 1.0;
  return 1.0 + std::pow(x, 5) * std::sin(1.0 / x);
}

double oscillatory_psi_d1(double x) {
  if (x == 0.0) return 0.0;
  return 5.0 * std::pow(x, 4) * std::sin(1.0 / x) - std::pow(x, 3) * std::cos(1.0 / x);
}

double oscillatory_psi_d2(double x) {
  if (x == 0.0) return 0.0;
  return 20.0 * std::pow(x, 3) * std::sin(1.0 / x) - 8.0 * x * x * std::cos(1.0 / x) -
         x * std::sin(1.0 / x);
}

double circle_g(double x) { return std::sqrt(1.0 - x * x); }
double circle_g_d1(double x) { return -x / std::sqrt(1.0 - x * x); }
double circle_g_d2(double x) { return -std::pow(1.0 - x * x, -1.5); }

namespace {

struct Interp1D {
  std::vector<double> x, y;  // x strictly increasing
  double operator()(double t) const {
    auto it = std::upper_bound(x.begin(), x.end(), t);
    if (it == x.begin() || it == x.end())
      throw ConvexityError("figure_curves: matching coordinate outside interpolation range");
    const size_t k = it - x.begin() - 1;
    const double s = (t - x[k]) / (x[k + 1] - x[k]);
    return y[k] * (1 - s) + y[k + 1] * s;
  }
};

Eigen::Vector2d invert2(double x, double y) {
  const double n2 = x * x + y * y;
  return {x / n2, y / n2};
}

}  // namespace

std::vector<CurveDataset> figure_curves(FigureCurve curve, double lo, double hi, int n_samples,
                                        double puncture_eps) {
  if (!(lo < 0 && 0 < hi)) throw ConvexityError("figure_curves: interval must straddle 0");
  if (n_samples < 16) throw ConvexityError("figure_curves: need at least 16 samples");

  std::vector<CurveDataset> out;
  auto samples = [&](double a, double b) {
    std::vector<double> xs;
    xs.reserve(n_samples);
    for (int k = 0; k < n_samples; ++k) {
      const double x = a + (b - a) * k / (n_samples - 1);
      if (std::abs(x) < puncture_eps && x != 0.0) continue;  // puncture for 1/x
      xs.push_back(x);
    }
    return xs;
  };

  if (curve == FigureCurve::gamma1) {
    auto f1 = [](double x) { return 0.5 * x * x * x + 1.0; };
    CurveDataset c{"curve", {}, {}};
    CurveDataset inv{"inverted", {}, {}};
    for (double x : samples(lo, hi)) {
      c.x.push_back(x);
      c.value.push_back(f1(x));
      const Eigen::Vector2d p = invert2(x, f1(x));
      inv.x.push_back(p.x());
      inv.value.push_back(p.y());
    }
    out.push_back(std::move(c));
    out.push_back(std::move(inv));
    return out;
  }

  // gamma2: psi(x) = 1 + x^5 sin(1/x), compared against the unit circle arc.
  CurveDataset d1{"d1_diff", {}, {}};
  for (double x : samples(lo, hi)) {
    d1.x.push_back(x);
    d1.value.push_back(oscillatory_psi_d1(x) - circle_g_d1(x));
  }
  out.push_back(std::move(d1));

  CurveDataset d2{"d2_diff", {}, {}};
  for (double x : samples(lo / 20.0, hi / 20.0)) {
    d2.x.push_back(x);
    d2.value.push_back(oscillatory_psi_d2(x) - circle_g_d2(x));
  }
  out.push_back(std::move(d2));

  // Inverted-curve comparisons matched at equal first coordinate. The
  // reference curves are interpolated on a denser, slightly wider range.
  Interp1D line_ref;
  {
    const int dense = 20 * n_samples;
    for (int k = 0; k <= dense; ++k) {
      const double x = 1.5 * lo + (1.5 * hi - 1.5 * lo) * k / dense;
      const Eigen::Vector2d p = invert2(x, 1.0);
      line_ref.x.push_back(p.x());
      line_ref.y.push_back(p.y());
    }
  }

  CurveDataset inv_line{"inv_line", {}, {}};
  CurveDataset inv_circle{"inv_circle", {}, {}};
  for (double x : samples(lo, hi)) {
    const Eigen::Vector2d p = invert2(x, oscillatory_psi(x));
    inv_line.x.push_back(p.x());
    inv_line.value.push_back(p.y() - line_ref(p.x()));
    // h fixes the unit circle, so the reference second coordinate is analytic.
    inv_circle.x.push_back(p.x());
    inv_circle.value.push_back(p.y() - circle_g(p.x()));
  }
  out.push_back(std::move(inv_line));
  out.push_back(std::move(inv_circle));
  return out;
}

int count_slope_sign_changes(const CurveDataset& ds) {
  int changes = 0;
  double prev = 0.0;
  bool have_prev = false;
  for (size_t k = 0; k + 1 < ds.x.size(); ++k) {
    const double slope = ds.value[k + 1] - ds.value[k];
    if (slope == 0.0) continue;
    if (have_prev && (slope > 0) != (prev > 0)) ++changes;
    prev = slope;
    have_prev = true;
  }
  return changes;
}

}  // namespace caplab
