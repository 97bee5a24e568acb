// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "sswm/attacks.hpp"
#include "sswm/kernels.hpp"
#include "sswm/rng.hpp"

using namespace sswm;

namespace {

Matrix noise_matrix(std::size_t n) {
    Matrix m(n, n);
    SplitMix64 rng(n);
    for (auto& v : m.values()) v = 255.0 * rng.uniform();
    return m;
}

GrayImage noise_image(std::size_t n) { return to_gray(noise_matrix(n)); }

template <Exec E>
void forward_level(benchmark::State& state) {
    const auto x = noise_matrix(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::forward_level(WaveletFamily::biorthogonal_cdf97, x, E));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}

template <Exec E>
void inverse_level(benchmark::State& state) {
    const auto bands = kernels::serial::forward_level(WaveletFamily::orthogonal_d4,
                                                      noise_matrix(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::inverse_level(WaveletFamily::orthogonal_d4, bands, E));
}

template <Exec E>
void box_blur(benchmark::State& state) {
    const auto img = noise_image(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(blur(img, 5, E));
}

template <Exec E>
void median_filter(benchmark::State& state) {
    const auto img = noise_image(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(median(img, 5, E));
}

template <Exec E>
void surrogate(benchmark::State& state) {
    const auto img = noise_image(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(compress_surrogate(img, 50, E));
}

} // namespace

BENCHMARK(forward_level<Exec::serial>)->Arg(256)->Arg(1024);
BENCHMARK(forward_level<Exec::parallel>)->Arg(256)->Arg(1024);
BENCHMARK(inverse_level<Exec::serial>)->Arg(256)->Arg(1024);
BENCHMARK(inverse_level<Exec::parallel>)->Arg(256)->Arg(1024);
BENCHMARK(box_blur<Exec::serial>)->Arg(512);
BENCHMARK(box_blur<Exec::parallel>)->Arg(512);
BENCHMARK(median_filter<Exec::serial>)->Arg(512);
BENCHMARK(median_filter<Exec::parallel>)->Arg(512);
BENCHMARK(surrogate<Exec::serial>)->Arg(512);
BENCHMARK(surrogate<Exec::parallel>)->Arg(512);

BENCHMARK_MAIN();
