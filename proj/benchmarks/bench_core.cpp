#include <benchmark/benchmark.h>

#include <random>

#include "wachcoh/catalog.hpp"
#include "wachcoh/nygaard.hpp"
#include "wachcoh/syntomic.hpp"

using namespace wachcoh;

namespace {

AFSeries random_series(const OFRingPtr& r, unsigned M, std::mt19937_64& rng) {
    std::vector<OFElem> c;
    for (unsigned j = 0; j < M; ++j) c.push_back(r->from_int(static_cast<long long>(rng() % r->modulus())));
    return AFSeries(r, std::move(c));
}

void BM_series_mul(benchmark::State& state) {
    auto r = OFRing::make(3, 1, 8);
    std::mt19937_64 rng(1);
    unsigned M = static_cast<unsigned>(state.range(0));
    AFSeries a = random_series(r, M, rng), b = random_series(r, M, rng);
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_series_mul)->Arg(40)->Arg(80);

void BM_phi_substitution(benchmark::State& state) {
    auto r = OFRing::make(3, 1, 8);
    std::mt19937_64 rng(2);
    AFSeries a = random_series(r, static_cast<unsigned>(state.range(0)), rng);
    for (auto _ : state) benchmark::DoNotOptimize(phi(a));
}
BENCHMARK(BM_phi_substitution)->Arg(40)->Arg(80);

void BM_gamma_substitution(benchmark::State& state) {
    auto r = OFRing::make(3, 1, 8);
    std::mt19937_64 rng(3);
    AFSeries a = random_series(r, static_cast<unsigned>(state.range(0)), rng);
    ExactZp chi = chi_gamma(3);
    for (auto _ : state) benchmark::DoNotOptimize(gamma_act(chi, a));
}
BENCHMARK(BM_gamma_substitution)->Arg(40)->Arg(80);

void BM_mu0_series(benchmark::State& state) {
    auto r = OFRing::make(5, 1, 8);
    for (auto _ : state) benchmark::DoNotOptimize(mu0_series(r, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_mu0_series)->Arg(40)->Arg(120);

void BM_smith_normal_form(benchmark::State& state) {
    std::mt19937_64 rng(4);
    size_t n = static_cast<size_t>(state.range(0));
    Mat a(3, 8, n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) a.set(i, j, rng());
    for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(a));
}
BENCHMARK(BM_smith_normal_form)->Arg(40)->Arg(120);

void BM_verify_module(benchmark::State& state) {
    auto r = OFRing::make(3, 1, 8);
    WachModuleA m = catalog_module("sum_tate1_tatem1", r, 40);
    for (auto _ : state) benchmark::DoNotOptimize(verify(m));
}
BENCHMARK(BM_verify_module);

void BM_descend(benchmark::State& state) {
    auto r = OFRing::make(3, 1, 8);
    WachModuleA m = catalog_module("tate_1", r, 40);
    for (auto _ : state) benchmark::DoNotOptimize(descend(m));
}
BENCHMARK(BM_descend);

void BM_syntomic_cohomology(benchmark::State& state) {
    auto r = OFRing::make(3, 1, 8);
    WachModuleA m = catalog_module("tate_1", r, 40);
    for (auto _ : state) {
        ComplexPresentation c = build_syntomic_A(m);
        benchmark::DoNotOptimize(cohomology(c, 2));
    }
}
BENCHMARK(BM_syntomic_cohomology);

}  // namespace

BENCHMARK_MAIN();
