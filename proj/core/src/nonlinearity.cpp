#include "caplab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace caplab {

namespace {

void require_dimension(int N) {
  if (N < 3) throw NonlinearityError("nonlinearity presets require N >= 3");
}

}  // namespace

Nonlinearity make_log_critical(int N) {
  require_dimension(N);
  const double Ns = static_cast<double>(N + 2) / (N - 2);
  Nonlinearity f;
  f.N = N;
  f.label = "log_critical";
  f.eval = [Ns](double s) {
    if (s <= 0) return 0.0;
    return std::pow(s, Ns) / std::log(s + 2.0);
  };
  f.deriv = [Ns](double s) {
    if (s <= 0) return 0.0;
    const double L = std::log(s + 2.0);
    return Ns * std::pow(s, Ns - 1.0) / L - std::pow(s, Ns) / ((s + 2.0) * L * L);
  };
  return f;
}

StaircaseParams StaircaseParams::make(double p, double q, double a1, int N, int n_levels) {
  require_dimension(N);
  const double Ns = static_cast<double>(N + 2) / (N - 2);
  if (!(1 < p && p < q && q < Ns)) throw NonlinearityError("staircase requires 1 < p < q < N*");
  if (!(a1 > 1)) throw NonlinearityError("staircase requires a1 > 1");
  if (n_levels < 1) throw NonlinearityError("staircase requires n_levels >= 1");
  StaircaseParams sp;
  sp.p = p;
  sp.q = q;
  sp.a1 = a1;
  sp.N = N;
  sp.n_levels = n_levels;
  double a = a1;
  for (int j = 0; j < n_levels; ++j) {
    const double b = std::pow(a, (Ns - p) / (Ns - q));
    if (!std::isfinite(b) || b > 1e300) throw NonlinearityError("staircase breakpoints overflow; reduce n_levels");
    sp.a.push_back(a);
    sp.b.push_back(b);
    a = std::pow(b, q / p);
    if (!std::isfinite(a) || a > 1e300) {
      sp.n_levels = j + 1;
      break;
    }
  }
  return sp;
}

Nonlinearity make_staircase(const StaircaseParams& sp) {
  const double Ns = static_cast<double>(sp.N + 2) / (sp.N - 2);
  const double p = sp.p;
  Nonlinearity f;
  f.N = sp.N;
  f.label = "staircase";
  auto params = std::make_shared<StaircaseParams>(sp);
  // Piece lookup: index of the last a_j <= s (binary search on a).
  auto level_of = [params](double s) {
    const auto& a = params->a;
    auto it = std::upper_bound(a.begin(), a.end(), s);
    return static_cast<int>(it - a.begin()) - 1;  // -1 when s < a1
  };
  f.eval = [params, level_of, Ns, p](double s) {
    if (s <= 0) return 0.0;
    const int j = level_of(s);
    if (j < 0) return std::pow(s, p);
    const double aj = params->a[j], bj = params->b[j];
    if (s <= bj) return std::pow(s, Ns) / std::pow(aj, Ns - p);
    return std::pow(bj, Ns) / std::pow(aj, Ns - p);  // plateau f(b_j) = b_j^q
  };
  // One-sided derivative; the left value is taken at breakpoints.
  f.deriv = [params, level_of, Ns, p](double s) {
    if (s <= 0) return 0.0;
    const auto& a = params->a;
    const auto& b = params->b;
    auto it = std::lower_bound(a.begin(), a.end(), s);
    if (it != a.end() && *it == s) {
      // Exactly at a_j: left piece is the plateau below (or s^p for a_1).
      const int j = static_cast<int>(it - a.begin());
      return j == 0 ? p * std::pow(s, p - 1.0) : 0.0;
    }
    const int j = level_of(s);
    if (j < 0) return p * std::pow(s, p - 1.0);
    if (s <= b[j]) return Ns * std::pow(s, Ns - 1.0) / std::pow(a[j], Ns - p);
    return 0.0;
  };
  return f;
}

Nonlinearity make_staircase(double p, double q, double a1, int N, int n_levels) {
  return make_staircase(StaircaseParams::make(p, q, a1, N, n_levels));
}

Nonlinearity make_power(double p, int N) {
  Nonlinearity f;
  f.N = N;
  f.label = "power_" + std::to_string(p);
  f.eval = [p](double s) { return s <= 0 ? 0.0 : std::pow(s, p); };
  f.deriv = [p](double s) { return s <= 0 ? 0.0 : p * std::pow(s, p - 1.0); };
  return f;
}

Nonlinearity make_linear(double c, int N) {
  Nonlinearity f;
  f.N = N;
  f.label = "linear";
  f.eval = [c](double s) { return c * s; };
  f.deriv = [c](double) { return c; };
  return f;
}

Nonlinearity make_exponential(int N) {
  Nonlinearity f;
  f.N = N;
  f.label = "exp";
  f.eval = [](double s) { return std::exp(s); };
  f.deriv = [](double s) { return std::exp(s); };
  return f;
}

Nonlinearity make_constant(double c, int N) {
  Nonlinearity f;
  f.N = N;
  f.label = "constant";
  f.eval = [c](double) { return c; };
  f.deriv = [](double) { return 0.0; };
  return f;
}

HypothesisReport check_hypotheses(const Nonlinearity& f, double lambda1, double s_max,
                                  int n_samples) {
  if (lambda1 <= 0) throw NonlinearityError("check_hypotheses: lambda1 must be positive");
  if (s_max <= 1) throw NonlinearityError("check_hypotheses: s_max must exceed 1");
  if (n_samples < 16) throw NonlinearityError("check_hypotheses: need at least 16 samples");

  const double Ns = f.critical_exponent();
  const double s_min = 1e-3;
  std::vector<double> s(n_samples), ratio_crit(n_samples), ratio_lin(n_samples);
  for (int k = 0; k < n_samples; ++k) {
    const double t = static_cast<double>(k) / (n_samples - 1);
    s[k] = s_min * std::pow(s_max / s_min, t);
    const double fs = f(s[k]);
    if (std::isnan(fs))
      throw NonlinearityError("check_hypotheses: NaN f value at s=" + std::to_string(s[k]));
    // Overflow to +inf is kept: it is evidence against H1/H2, not an input error.
    ratio_crit[k] = fs / std::pow(s[k], Ns);
    ratio_lin[k] = fs / s[k];
  }

  HypothesisReport rep;
  rep.s_max = s_max;
  rep.n_samples = n_samples;
  rep.lambda1 = lambda1;

  // H1: nonincreasing ratio across the sample grid (relative slack for roundoff).
  double worst_rel_increase = 0.0;
  for (int k = 0; k + 1 < n_samples; ++k) {
    const double denom = std::max(std::abs(ratio_crit[k]), 1e-300);
    worst_rel_increase = std::max(worst_rel_increase, (ratio_crit[k + 1] - ratio_crit[k]) / denom);
  }
  rep.H1.pass = worst_rel_increase <= 1e-9;
  // Clamp to keep JSON reports finite when f overflowed.
  rep.H1.margin = std::clamp(-worst_rel_increase, -1e308, 1e308);
  rep.H1.note = "finite-sample surrogate of monotonicity on [1e-3, s_max]";

  // H2: tail ratio small and still trending down over the top decade.
  const double tail = ratio_crit.back();
  int decade_start = n_samples - 1;
  while (decade_start > 0 && s[decade_start] > s_max / 10.0) --decade_start;
  const double tail_threshold = 0.1;
  const bool trending_down = ratio_crit.back() <= ratio_crit[decade_start] * (1.0 + 1e-9);
  rep.H2.pass = tail < tail_threshold && trending_down;
  rep.H2.margin = std::clamp(tail_threshold - tail, -1e308, 1e308);
  rep.H2.note = "finite-sample surrogate of lim f(s)/s^{N*} = 0 at s_max";

  // H3: min of f(s)/s over the top decade exceeds lambda1.
  double min_lin = std::numeric_limits<double>::infinity();
  for (int k = decade_start; k < n_samples; ++k) min_lin = std::min(min_lin, ratio_lin[k]);
  rep.H3.pass = min_lin > lambda1;
  rep.H3.margin = std::clamp(min_lin - lambda1, -1e308, 1e308);
  rep.H3.note = "finite-sample surrogate of liminf f(s)/s > lambda1";
  return rep;
}

}  // namespace caplab
