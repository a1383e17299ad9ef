#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace caplab {

struct NonlinearityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scalar reaction term s -> f(s) for s >= 0, with derivative and the
/// dimension fixing the critical exponent N* = (N+2)/(N-2).
struct Nonlinearity {
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
  std::string label;
  int N = 3;

  double critical_exponent() const { return static_cast<double>(N + 2) / (N - 2); }
  double operator()(double s) const { return eval(s); }
};

/// Breakpoints of the staircase example: b_j = a_j^{(N*-p)/(N*-q)},
/// a_{j+1} = b_j^{q/p}.
struct StaircaseParams {
  double p = 2.0;
  double q = 3.0;
  double a1 = 2.0;
  int N = 3;
  int n_levels = 8;
  std::vector<double> a;  // a_1..a_n
  std::vector<double> b;  // b_1..b_n

  static StaircaseParams make(double p, double q, double a1, int N, int n_levels);
};

/// f1(s) = s^{N*} / ln(s+2).
Nonlinearity make_log_critical(int N);

/// Piecewise staircase: s^p on [0,a1]; s^{N*}/a_j^{N*-p} on [a_j,b_j];
/// constant f(b_j) on [b_j,a_{j+1}]. Beyond a_{n_levels} the last rule is
/// extended (warned via label).
Nonlinearity make_staircase(double p, double q, double a1, int N, int n_levels);
Nonlinearity make_staircase(const StaircaseParams& params);

/// f(s) = s^p.
Nonlinearity make_power(double p, int N);

/// f(s) = c * s.
Nonlinearity make_linear(double c, int N);

/// f(s) = e^s (fails H1/H2; counterexample preset).
Nonlinearity make_exponential(int N);

/// f constant.
Nonlinearity make_constant(double c, int N);

struct HypothesisVerdict {
  bool pass = false;
  double margin = 0.0;
  std::string note;  // finite-sample surrogate caveat
};

struct HypothesisReport {
  HypothesisVerdict H1, H2, H3;
  double s_max = 0.0;
  int n_samples = 0;
  double lambda1 = 0.0;
};

/// Finite-sample surrogates for the limit hypotheses:
///   H1: f(s)/s^{N*} nonincreasing on a geometric grid of [1e-3, s_max];
///   H2: tail ratio below threshold and still decreasing;
///   H3: min of f(s)/s over the top decade exceeds lambda1.
HypothesisReport check_hypotheses(const Nonlinearity& f, double lambda1, double s_max,
                                  int n_samples);

}  // namespace caplab
