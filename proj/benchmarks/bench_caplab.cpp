#include <benchmark/benchmark.h>

#include "caplab/convexity.hpp"
#include "caplab/geometry.hpp"
#include "caplab/nonlinearity.hpp"
#include "caplab/radial.hpp"

namespace {

void BM_lambda_star_annulus(benchmark::State& state) {
  const double h = 1.0 / state.range(0);
  const caplab::Domain ann = caplab::Domain::annulus(caplab::Vec2::Zero(), 1.0, 2.0, 0.5);
  for (auto _ : state) {
    auto cap = caplab::compute_lambda_star(ann, caplab::Vec2(1, 0), h, 1e-2 * h);
    benchmark::DoNotOptimize(cap.lambda_star);
  }
}
BENCHMARK(BM_lambda_star_annulus)->Arg(32)->Arg(64)->Arg(128);

void BM_staircase_eval(benchmark::State& state) {
  const caplab::Nonlinearity f = caplab::make_staircase(2.0, 3.0, 2.0, 3, 8);
  double s = 0.37;
  for (auto _ : state) {
    s = s < 1e5 ? s * 1.0001 : 0.37;
    benchmark::DoNotOptimize(f(s));
  }
}
BENCHMARK(BM_staircase_eval);

void BM_solve_phi(benchmark::State& state) {
  const caplab::BoundaryGraph psi = caplab::BoundaryGraph::quartic(2);
  Eigen::VectorXd yp(2);
  yp << 0.07, -0.04;
  for (auto _ : state) {
    benchmark::DoNotOptimize(caplab::solve_phi(psi, yp));
  }
}
BENCHMARK(BM_solve_phi);

void BM_radial_ball_cubic(benchmark::State& state) {
  const caplab::Nonlinearity f = caplab::make_power(3.0, 3);
  for (auto _ : state) {
    auto sol = caplab::solve_radial_ball(3, f, 1.0, 1e-8);
    benchmark::DoNotOptimize(sol.max_value());
  }
}
BENCHMARK(BM_radial_ball_cubic);

}  // namespace

BENCHMARK_MAIN();
