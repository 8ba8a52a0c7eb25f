#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "cxsplit/fourier.hpp"
#include "cxsplit/schemes.hpp"
#include "cxsplit/spectral.hpp"

namespace sp = cxsplit::spectral;

static void BM_FftRoundTrip(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  cxsplit::FourierTransform ft(n);
  std::vector<cxsplit::cplx> u(n, {1.0, 0.5});
  for (auto _ : state) {
    ft.forward(u);
    ft.backward(u);
    for (auto& z : u) z /= static_cast<double>(n);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(2 * state.iterations());
}
BENCHMARK(BM_FftRoundTrip)->RangeMultiplier(4)->Range(64, 4096);

// One scheme step on the 512-node Poschl-Teller grid.
static void BM_SchemeStep(benchmark::State& state, const std::string& name) {
  const auto g = sp::make_grid(8.0, 512);
  const sp::Propagator prop(g, sp::PotentialSpec::poschl_teller(10.0));
  const auto& s = cxsplit::registry_get(name);
  auto w = sp::initial_gaussian(g);
  for (auto _ : state) {
    prop.scheme_step(w, s, 0.01);
    benchmark::ClobberMemory();
  }
  state.counters["ffts/step"] = static_cast<double>(sp::ffts_per_step(s));
}
BENCHMARK_CAPTURE(BM_SchemeStep, strang_TV, std::string("strang_TV"));
BENCHMARK_CAPTURE(BM_SchemeStep, SC_r_3, std::string("SC_r_3"));
BENCHMARK_CAPTURE(BM_SchemeStep, SC_r_4, std::string("SC_r_4"));
BENCHMARK_CAPTURE(BM_SchemeStep, Xi_SC_r_4, std::string("Xi_SC_r_4"));

static void BM_Energy(benchmark::State& state) {
  const auto g = sp::make_grid(8.0, 512);
  const sp::Propagator prop(g, sp::PotentialSpec::poschl_teller(10.0));
  const auto w = sp::initial_gaussian(g);
  for (auto _ : state) {
    auto e = prop.energy(w);
    benchmark::DoNotOptimize(e);
  }
}
BENCHMARK(BM_Energy);

BENCHMARK_MAIN();
