#include <benchmark/benchmark.h>

#include <string>

#include "cxsplit/schemes.hpp"
#include "cxsplit/su2.hpp"

namespace su2 = cxsplit::su2;

static void BM_PauliExp(benchmark::State& state) {
  using cxsplit::cplx;
  const su2::PauliVector v{{cplx(0.3, 0.1), cplx(-0.7, 0.2), cplx(0.5, -0.4)}};
  const cplx z(0.01, -0.2);
  for (auto _ : state) {
    auto m = su2::pauli_exp(z, v);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_PauliExp);

static void BM_Su2Step(benchmark::State& state, const std::string& name) {
  const auto& s = cxsplit::registry_get(name);
  const su2::Vec3 a{1.0, 0.0, 0.0};
  const su2::Vec3 b{0.0, 1.0, 0.0};
  for (auto _ : state) {
    auto u = su2::apply_scheme_su2(s, a, b, 0.25);
    benchmark::DoNotOptimize(u);
  }
}
BENCHMARK_CAPTURE(BM_Su2Step, yoshida4, std::string("yoshida4"));
BENCHMARK_CAPTURE(BM_Su2Step, SC_c_3, std::string("SC_c_3"));
BENCHMARK_CAPTURE(BM_Su2Step, SC_c_4, std::string("SC_c_4"));

static void BM_CriticalStep(benchmark::State& state) {
  const auto& s = cxsplit::registry_get("SC_c_4");
  for (auto _ : state) {
    double h = su2::critical_step(s, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, 1.0, 3.0);
    benchmark::DoNotOptimize(h);
  }
}
BENCHMARK(BM_CriticalStep);
