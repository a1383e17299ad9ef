#include <doctest.h>

#include <cmath>
#include <vector>

#include "caplab/nonlinearity.hpp"

using namespace caplab;

namespace {
constexpr double kLambda1Disk = 5.783185962946785;  // used as a representative level
}

TEST_CASE("staircase breakpoints follow the recursion") {
  const int N = 3;
  const double Ns = 5.0, p = 2.0, q = 3.0, a1 = 2.0;
  const StaircaseParams sp = StaircaseParams::make(p, q, a1, N, 6);
  // Independent recomputation of the recursion.
  double a = a1;
  for (int j = 0; j < sp.n_levels; ++j) {
    const double b = std::pow(a, (Ns - p) / (Ns - q));
    CHECK(sp.a[j] == doctest::Approx(a).epsilon(1e-13));
    CHECK(sp.b[j] == doctest::Approx(b).epsilon(1e-13));
    a = std::pow(b, q / p);
  }
  CHECK(sp.a.size() == sp.b.size());
  for (size_t j = 0; j + 1 < sp.a.size(); ++j) {
    CHECK(sp.a[j] < sp.b[j]);
    CHECK(sp.b[j] < sp.a[j + 1]);
  }
}

TEST_CASE("staircase parameter validation") {
  CHECK_THROWS_AS(StaircaseParams::make(0.5, 3.0, 2.0, 3, 4), NonlinearityError);
  CHECK_THROWS_AS(StaircaseParams::make(2.0, 5.0, 2.0, 3, 4), NonlinearityError);  // q = N*
  CHECK_THROWS_AS(StaircaseParams::make(3.0, 2.0, 2.0, 3, 4), NonlinearityError);  // p > q
  CHECK_THROWS_AS(StaircaseParams::make(2.0, 3.0, 0.5, 3, 4), NonlinearityError);  // a1 <= 1
}

TEST_CASE("staircase is continuous at every breakpoint") {
  const Nonlinearity f = make_staircase(2.0, 3.0, 2.0, 3, 6);
  const StaircaseParams sp = StaircaseParams::make(2.0, 3.0, 2.0, 3, 6);
  auto jump = [&](double s) {
    const double eps = s * 1e-12;
    return std::abs(f(s + eps) - f(s - eps)) / std::max(1.0, f(s));
  };
  for (int j = 0; j < sp.n_levels; ++j) {
    CHECK(jump(sp.a[j]) <= 1e-10);
    CHECK(jump(sp.b[j]) <= 1e-10);
  }
}

TEST_CASE("staircase stays between the power envelopes") {
  const double p = 2.0, q = 3.0;
  const Nonlinearity f = make_staircase(p, q, 2.0, 3, 6);
  const StaircaseParams sp = StaircaseParams::make(p, q, 2.0, 3, 6);
  const double s_hi = sp.b.back();
  int crossings = 0;
  double prev_sign = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double s = std::pow(s_hi, k / 9999.0);  // geometric in [1, s_hi]
    const double fs = f(s);
    CHECK(fs >= std::pow(s, p) * (1 - 1e-12));
    CHECK(fs <= std::pow(s, q) * (1 + 1e-12));
    const double diff = fs - std::pow(s, 0.5 * (p + q));
    const double sign = diff > 0 ? 1.0 : (diff < 0 ? -1.0 : prev_sign);
    if (prev_sign != 0.0 && sign != prev_sign) ++crossings;
    prev_sign = sign;
  }
  CHECK(crossings >= sp.n_levels - 1);
}

TEST_CASE("log-quotient derivative matches finite differences") {
  const Nonlinearity f = make_log_critical(3);
  for (double s : {0.5, 1.0, 3.0, 10.0, 100.0}) {
    const double eps = s * 1e-6;
    const double fd = (f(s + eps) - f(s - eps)) / (2 * eps);
    CHECK(f.deriv(s) == doctest::Approx(fd).epsilon(1e-6));
  }
  CHECK(f.critical_exponent() == doctest::Approx(5.0));
}

TEST_CASE("growth hypotheses: log-quotient and staircase pass, exponential fails") {
  const HypothesisReport log_rep =
      check_hypotheses(make_log_critical(3), kLambda1Disk, 1e8, 4096);
  CHECK(log_rep.H1.pass);
  CHECK(log_rep.H2.pass);
  CHECK(log_rep.H3.pass);

  const HypothesisReport st_rep =
      check_hypotheses(make_staircase(2.0, 3.0, 2.0, 3, 6), kLambda1Disk, 1e8, 4096);
  CHECK(st_rep.H1.pass);
  CHECK(st_rep.H3.pass);

  const HypothesisReport exp_rep =
      check_hypotheses(make_exponential(3), kLambda1Disk, 1e8, 4096);
  CHECK(!exp_rep.H1.pass);
  CHECK(!exp_rep.H2.pass);
}

TEST_CASE("hypothesis verdicts carry the finite-sample caveat") {
  const HypothesisReport rep = check_hypotheses(make_log_critical(3), 1.0, 1e6, 512);
  CHECK(rep.H1.note.find("surrogate") != std::string::npos);
  CHECK(rep.H2.note.find("surrogate") != std::string::npos);
  CHECK(rep.H3.note.find("surrogate") != std::string::npos);
}

TEST_CASE("subcritical powers satisfy the critical-quotient monotonicity") {
  for (double p : {2.0, 3.0, 4.0}) {
    const HypothesisReport rep = check_hypotheses(make_power(p, 3), 0.5, 1e8, 2048);
    CHECK(rep.H1.pass);
    CHECK(rep.H2.pass);
  }
  // The pure critical power has a constant quotient: H1 holds, H2 fails.
  const HypothesisReport crit = check_hypotheses(make_power(5.0, 3), 0.5, 1e8, 2048);
  CHECK(crit.H1.pass);
  CHECK(!crit.H2.pass);
}

TEST_CASE("staircase derivative uses the left piece at breakpoints") {
  const Nonlinearity f = make_staircase(2.0, 3.0, 2.0, 3, 4);
  const StaircaseParams sp = StaircaseParams::make(2.0, 3.0, 2.0, 3, 4);
  CHECK(f.deriv(sp.a[0]) == doctest::Approx(2.0 * sp.a[0]).epsilon(1e-12));
  CHECK(f.deriv(sp.a[1]) == 0.0);             // left of a_2 is a plateau
  CHECK(f.deriv(0.5 * sp.a[0]) == doctest::Approx(sp.a[0]).epsilon(1e-12));  // p s^{p-1}
}
