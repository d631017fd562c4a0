#include <benchmark/benchmark.h>

#include <random>

#include "annodb/rle.hpp"

using namespace annodb;

namespace {

// Bits that flip with probability 1/`stickiness`.
std::vector<bool> bits(std::size_t n, int stickiness) {
  std::mt19937_64 rng(n * 31 + static_cast<std::size_t>(stickiness));
  std::vector<bool> out;
  bool v = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::uniform_int_distribution<int>(1, stickiness)(rng) == 1) v = !v;
    out.push_back(v);
  }
  return out;
}

}  // namespace

static void BM_RleEncode(benchmark::State& state) {
  auto b = bits(static_cast<std::size_t>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(rle::encode(b));
  state.counters["runs"] = static_cast<double>(rle::encode(b).lengths.size());
}
BENCHMARK(BM_RleEncode)->ArgsProduct({{1024, 65536}, {2, 64, 4096}});

static void BM_RleDecode(benchmark::State& state) {
  auto runs = rle::encode(bits(static_cast<std::size_t>(state.range(0)), static_cast<int>(state.range(1))));
  for (auto _ : state) benchmark::DoNotOptimize(rle::decode(runs));
}
BENCHMARK(BM_RleDecode)->ArgsProduct({{1024, 65536}, {2, 64, 4096}});
