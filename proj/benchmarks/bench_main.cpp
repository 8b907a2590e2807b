#include <benchmark/benchmark.h>

#include <cmath>

#include "infonls/dynamics.hpp"
#include "infonls/io/experiment.hpp"
#include "infonls/nonlinearity.hpp"
#include "infonls/spectra.hpp"

namespace {

using namespace infonls;

// Moving Gaussian on a periodic box with n points and eta L spanning 8 steps.
struct Packet {
  Grid grid;
  NonlinearParams params;
  Wavefunction psi;
};

Packet make_packet(std::size_t n) {
  const double dx = 10.0 / static_cast<double>(n);
  const Grid g(-5.0, dx, n, Boundary::periodic);
  const auto params = NonlinearParams::create(16.0 * dx, 0.5, PhysConstants{});
  std::vector<Complex> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = g.x(k);
    v[k] = std::exp(Complex(-0.5 * x * x, 0.0));
  }
  return {g, params, normalize(Wavefunction(g, v))};
}

void BM_ApplyNonlinearTerm(benchmark::State& state) {
  const auto p = make_packet(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto out = apply_nonlinear_term(p.psi, p.params, PhysConstants{}, ShiftPolicy::periodic);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ApplyNonlinearTerm)->RangeMultiplier(4)->Range(256, 16384);

void BM_Rk4Step(benchmark::State& state) {
  const auto p = make_packet(static_cast<std::size_t>(state.range(0)));
  const auto V = Potential::harmonic(p.grid, PhysConstants{}, 1.0);
  const double dt = 0.5 * max_stable_dt(p.grid, PhysConstants{});
  for (auto _ : state) {
    auto next = rk4_step(p.psi, V, p.params, PhysConstants{}, dt, ShiftPolicy::periodic);
    benchmark::DoNotOptimize(next.values().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Rk4Step)->RangeMultiplier(4)->Range(256, 16384);

void BM_SolveLinearSpectrum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid g(-8.0, 16.0 / static_cast<double>(n + 1), n, Boundary::dirichlet);
  const auto V = Potential::harmonic(g, PhysConstants{}, 1.0);
  for (auto _ : state) {
    auto sol = solve_linear_spectrum(V, PhysConstants{}, 10);
    benchmark::DoNotOptimize(sol.energies.data());
  }
}
BENCHMARK(BM_SolveLinearSpectrum)->RangeMultiplier(4)->Range(1024, 16384)->Unit(benchmark::kMillisecond);

void BM_ShiftSweep(benchmark::State& state) {
  const auto config = io::parse_config(R"(format_version = 1
command = shift-sweep
[grid]
x_min = -8
dx = 0.005
n_points = 3200
[nonlinearity]
eta = 0.2, 0.4, 0.8
L = 0.1, 0.2
policy = floor
[potential]
kind = harmonic
[states]
indices = 0, 1
)");
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    auto rows = io::compute_shift_sweep(config, threads);
    benchmark::DoNotOptimize(rows.data());
  }
}
BENCHMARK(BM_ShiftSweep)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
