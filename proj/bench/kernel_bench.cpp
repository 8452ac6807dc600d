/*
 * Copyright 2026 The kapre Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Serial reference against the parallel kernels, over the delta-list sizes
// keygen produces for n in {16, 64, 256}.

#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "kapre/kernels.hpp"
#include "kapre/random.hpp"

namespace {

using namespace kapre;

std::vector<std::uint32_t> exponents_for(std::int64_t n) {
  std::vector<std::uint32_t> e(static_cast<std::size_t>(2 * n));
  std::iota(e.begin(), e.end(), 1u);
  e.erase(e.begin() + n);  // the ladder skips x^(n+1)
  return e;
}

template <kernels::Exec kExec>
void BM_PowerLadder(benchmark::State& state) {
  SeededRandom rng(1, "kernel-bench");
  const SourceElement base = SourceElement::from_exponent(Scalar::random_nonzero(rng));
  const Scalar x = Scalar::random_nonzero(rng);
  const std::vector<std::uint32_t> exps = exponents_for(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::power_ladder(kExec, base, x, exps));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(exps.size()));
  state.counters["threads"] = kExec == kernels::Exec::kSerial ? 1 : kernels::max_threads();
}

std::vector<SourceElement> random_elements(std::int64_t count) {
  SeededRandom rng(2, "kernel-bench-product");
  std::vector<SourceElement> v;
  for (std::int64_t i = 0; i < count; ++i) {
    v.push_back(SourceElement::from_exponent(Scalar::random_nonzero(rng)));
  }
  return v;
}

template <bool kBatched>
void BM_Product(benchmark::State& state) {
  const std::vector<SourceElement> elements = random_elements(state.range(0));
  std::vector<const SourceElement*> factors;
  for (const SourceElement& e : elements) factors.push_back(&e);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kBatched ? kernels::product_batched(factors)
                                      : kernels::product_serial(factors));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_PowerLadder<kernels::Exec::kSerial>)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PowerLadder<kernels::Exec::kParallel>)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Product<false>)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Product<true>)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
