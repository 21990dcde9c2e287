#include <array>

#include <benchmark/benchmark.h>

#include "nhm/envelope.hpp"
#include "nhm/linalg.hpp"
#include "nhm/measure.hpp"
#include "nhm/models.hpp"
#include "nhm/random.hpp"
#include "nhm/spectral.hpp"

using namespace nhm;

static void BM_Expm(benchmark::State& state) {
    Rng rng(1);
    const Matrix a = random_complex_matrix(rng, state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(propagator(a, 0.1));
}
BENCHMARK(BM_Expm)->Arg(2)->Arg(6)->Arg(16)->Arg(64);

static void BM_Decompose(benchmark::State& state) {
    Rng rng(2);
    const Operator h(random_complex_matrix(rng, state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(decompose(h));
}
BENCHMARK(BM_Decompose)->Arg(2)->Arg(8)->Arg(16)->Arg(64);

// One adiabatic run; cost is n_p momentum samples times the slice count.
static void BM_AdiabaticSpinEffective(benchmark::State& state) {
    const Operator h = pauli_x() + pauli_y() + kI * pauli_z();
    const PointerState p = PointerState::gaussian(1.0, static_cast<int>(state.range(0)));
    const Envelope env(20.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(adiabatic_measure(h, pauli_x(), spin_down(Axis::Y), p, env).outcome.shift_q);
}
BENCHMARK(BM_AdiabaticSpinEffective)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_TransitionProbability(benchmark::State& state) {
    const double n = static_cast<double>(state.range(0));
    ExactSpinOptions opts;
    opts.mode = SectorMode::Restricted;
    for (auto _ : state) benchmark::DoNotOptimize(exact_transition_probability(n, 1.0 / n, 0.5, 0.25, opts));
}
BENCHMARK(BM_TransitionProbability)->Arg(4)->Arg(32)->Arg(256);

static void BM_ExactAdiabaticCheck(benchmark::State& state) {
    ExactSpinOptions opts;
    opts.mode = SectorMode::Restricted;
    for (auto _ : state) benchmark::DoNotOptimize(exact_adiabatic_check(32.0, 1.0 / 32.0, 2.0, 1.0, 800, opts));
}
BENCHMARK(BM_ExactAdiabaticCheck)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
