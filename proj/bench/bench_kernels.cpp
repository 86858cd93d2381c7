// Reference vs fast kernels, and serial vs OpenMP frame loops.

#include <benchmark/benchmark.h>

#include <random>

#include "ntnwave/channel.hpp"
#include "ntnwave/detection.hpp"
#include "ntnwave/montecarlo.hpp"
#include "ntnwave/qam.hpp"
#include "ntnwave/waveforms.hpp"

using namespace ntnwave;

namespace {

struct Frame {
    WaveformSpec spec = WaveformSpec::ofdm(1);
    ComplexMatrix h;
    ComplexMatrix h_eff;
    ComplexVector y;
    DetectorConfig cfg;
};

Frame make_frame(std::size_t n) {
    Frame f;
    f.spec = WaveformSpec::afdm(n, 5.0 / (2.0 * static_cast<double>(n)), 0.0);
    const double ts = 1.0 / (static_cast<double>(n) * 15e3);
    const auto& profile = builtin_profile(TdlModel::TdlC);
    Rng rng(9);
    const auto real = sample_realization(profile, scale_delays(profile, 100e-9, ts, n), {}, GainMode::PdpNormalized,
                                         n, ts, rng);
    f.h = channel_matrix(real);
    f.h_eff = effective_channel(f.spec, f.h);
    std::normal_distribution<double> g(0.0, 0.1);
    f.y = ComplexVector(static_cast<Eigen::Index>(n));
    for (auto& v : f.y) v = Complex(g(rng), g(rng));
    f.cfg.kind = DetectorKind::MmseSd;
    f.cfg.noise_variance = 0.01;
    f.cfg.constellation = qam_constellation(16);
    return f;
}

void BM_MmseSdReference(benchmark::State& state) {
    const Frame f = make_frame(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(reference::detect_mmse_sd(f.y, f.h_eff, f.cfg));
}

void BM_MmseSdFast(benchmark::State& state) {
    const Frame f = make_frame(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(detect_mmse_sd(f.y, f.h_eff, f.cfg));
}

void BM_Lmmse(benchmark::State& state) {
    const Frame f = make_frame(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(detect_lmmse(f.y, f.h_eff, f.cfg));
}

void BM_EffectiveChannelDense(benchmark::State& state) {
    const Frame f = make_frame(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(reference::effective_channel(f.spec, f.h));
}

void BM_EffectiveChannelFft(benchmark::State& state) {
    const Frame f = make_frame(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(effective_channel(f.spec, f.h));
}

void BM_ModulateDense(benchmark::State& state) {
    const Frame f = make_frame(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(reference::modulate(f.spec, f.y));
}

void BM_ModulateFft(benchmark::State& state) {
    const Frame f = make_frame(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(modulate(f.spec, f.y));
}

// A fixed 16-frame SNR point; the argument is the OpenMP thread count.
void BM_RunPoint(benchmark::State& state) {
    SimConfig c;
    c.n = 64;
    c.stop = {std::numeric_limits<std::uint64_t>::max(), 16};
    const Simulator sim(c);
    for (auto _ : state) benchmark::DoNotOptimize(sim.run_point(10.0, static_cast<int>(state.range(0))));
    state.SetItemsProcessed(state.iterations() * 16);
}

}  // namespace

BENCHMARK(BM_MmseSdReference)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MmseSdFast)->Arg(16)->Arg(32)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Lmmse)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EffectiveChannelDense)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EffectiveChannelFft)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ModulateDense)->Arg(256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ModulateFft)->Arg(256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RunPoint)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
