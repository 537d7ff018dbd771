#include <benchmark/benchmark.h>

#include <random>

#include "qtl/algebra.hpp"
#include "qtl/ratsolve.hpp"
#include "qtl/scalar.hpp"

using qtl::ExactField;
using qtl::Fq;
using qtl::LElem;
using qtl::LKey;
using qtl::Matrix;
using qtl::PrimeField;

namespace {

std::vector<LKey> sampleKeys(std::size_t n, long box, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<long> idx(-box, box);
    std::uniform_int_distribution<int> par(0, 1);
    std::vector<LKey> keys;
    while (keys.size() < n) {
        LKey k = LKey::torus(par(rng), {idx(rng), idx(rng)});
        if (!k.isForbidden()) keys.push_back(k);
    }
    return keys;
}

void BM_BracketL(benchmark::State& state) {
    auto keys = sampleKeys(64, 5, 42);
    std::size_t i = 0;
    for (auto _ : state) {
        const LKey& a = keys[i % keys.size()];
        const LKey& b = keys[(i * 7 + 3) % keys.size()];
        benchmark::DoNotOptimize(qtl::bracketL(LElem::single(a), LElem::single(b)));
        ++i;
    }
}
BENCHMARK(BM_BracketL);

void BM_FieldMulDiv(benchmark::State& state) {
    Fq a = (Fq(1) - Fq::qpow(3)) / (Fq(1) + Fq::upow(1));
    Fq b = Fq(mpq_class(3, 7)) * Fq::upow(-2) + Fq(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(a * b);
        benchmark::DoNotOptimize(a / b);
    }
}
BENCHMARK(BM_FieldMulDiv);

void BM_PrimeRank(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    PrimeField F;
    std::mt19937_64 rng(1);
    Matrix<std::uint64_t> M(n, n, 0);
    for (auto& x : M.a) x = rng() % F.spec.modulus;
    for (auto _ : state) benchmark::DoNotOptimize(rank(F, M));
}
BENCHMARK(BM_PrimeRank)->Arg(32)->Arg(64);

void BM_ModularRankExact(benchmark::State& state) {
    const std::size_t n = 12;
    Matrix<Fq> M(n, n);
    std::mt19937 rng(2);
    std::uniform_int_distribution<int> c(-3, 3), e(-2, 2);
    for (auto& x : M.a) x = Fq(c(rng)) * Fq::upow(e(rng)) + Fq(c(rng));
    for (auto _ : state) benchmark::DoNotOptimize(qtl::rankModular(M));
}
BENCHMARK(BM_ModularRankExact);

}  // namespace

BENCHMARK_MAIN();
