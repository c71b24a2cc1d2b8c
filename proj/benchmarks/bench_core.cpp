#include <benchmark/benchmark.h>

#include <complex>
#include <functional>

#include "rehf/ellgamma.hpp"
#include "rehf/evaluator.hpp"
#include "rehf/qseries.hpp"
#include "rehf/rargamma.hpp"

namespace {

using rehf::cplx;

const cplx kP{0.17, 0.06};
const cplx kQ{0.11, -0.08};
const cplx kZ{0.52, 0.31};

void BM_theta(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rehf::theta(kZ, kP));
}
BENCHMARK(BM_theta);

void BM_elliptic_gamma(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rehf::elliptic_gamma(kZ, kP, kQ));
}
BENCHMARK(BM_elliptic_gamma);

void BM_gamma_rarefied(benchmark::State& state) {
  rehf::Bases b(kP, kQ, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rehf::gamma_rarefied(kZ, 1, b));
}
BENCHMARK(BM_gamma_rarefied)->Arg(1)->Arg(2)->Arg(3);

void BM_torus_integral(benchmark::State& state) {
  std::function<cplx(cplx)> f = [](cplx z) {
    return rehf::theta(kZ * z, kP) * rehf::theta(kZ / z, kP);
  };
  rehf::GridSpec g;
  g.points_per_dim = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rehf::torus_integral(f, g));
}
BENCHMARK(BM_torus_integral)->Arg(64)->Arg(256);

void BM_sum_integral_rank1(benchmark::State& state) {
  rehf::Bases b(kP, kQ, 2);
  rehf::BalancedParams P;
  P.kind = rehf::ParamKind::Beta6;
  P.eps = 1;
  P.t = {cplx(0.61, 0.12), cplx(0.42, -0.38), cplx(-0.55, 0.11), cplx(0.35, 0.43),
         cplx(0.62, 0.07)};
  cplx prod{1.0, 0.0};
  for (cplx v : P.t) prod *= v;
  P.t.push_back(b.pq / prod);
  P.n = {1, -2, 0, 2, -1, -3};
  rehf::GridSpec g;
  g.points_per_dim = 64;
  rehf::SumIntegralSpec spec{P, b, g, {}};
  for (auto _ : state) benchmark::DoNotOptimize(rehf::eval_lhs(spec));
}
BENCHMARK(BM_sum_integral_rank1);

}  // namespace

BENCHMARK_MAIN();
