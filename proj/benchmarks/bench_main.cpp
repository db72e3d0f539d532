// Copyright 2026 The xmodal Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "xmodal/cmrloss.hpp"
#include "xmodal/diffrank.hpp"
#include "xmodal/imgproc.hpp"
#include "xmodal/metrics.hpp"
#include "xmodal/toytrain.hpp"

using namespace xmodal;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> n;
  Matrix m(r, c);
  for (double& v : m.data()) v = n(rng);
  return m;
}

void BM_IsotonicRegression(benchmark::State& state) {
  const auto y = random_vector(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(isotonic_regression_l2(y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_IsotonicRegression)->RangeMultiplier(4)->Range(8, 8192)->Complexity(benchmark::oN);

void BM_SoftRank(benchmark::State& state) {
  const auto theta = random_vector(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(soft_rank(theta, SoftRankParams{}));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SoftRank)->RangeMultiplier(4)->Range(8, 8192)->Complexity(benchmark::oNLogN);

void BM_SoftRankVjp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto theta = random_vector(n, 3);
  const auto up = random_vector(n, 4);
  const SoftRank op(theta, SoftRankParams{});
  for (auto _ : state) benchmark::DoNotOptimize(op.vjp(up));
}
BENCHMARK(BM_SoftRankVjp)->RangeMultiplier(4)->Range(8, 8192);

EmbeddingBatch make_batch(std::size_t b, std::size_t d) {
  EmbeddingBatch batch{random_matrix(b, d, 5), {}, {}};
  for (std::size_t i = 0; i < b; ++i) {
    batch.ids.push_back(static_cast<std::int64_t>(i / 8));
    batch.modalities.push_back(i % 8 < 4 ? Modality::kVisible : Modality::kInfrared);
  }
  return batch;
}

void BM_CmrLoss(benchmark::State& state) {
  const auto batch = make_batch(static_cast<std::size_t>(state.range(0)), 64);
  for (auto _ : state) benchmark::DoNotOptimize(cmr_loss(batch, SoftRankParams{}));
}
BENCHMARK(BM_CmrLoss)->Arg(16)->Arg(64)->Arg(128);

void BM_TotalLoss(benchmark::State& state) {
  const auto batch = make_batch(static_cast<std::size_t>(state.range(0)), 64);
  const Matrix w = random_matrix(static_cast<std::size_t>(state.range(0)) / 8, 64, 6);
  for (auto _ : state) benchmark::DoNotOptimize(total_loss(batch, w, SoftRankParams{}));
}
BENCHMARK(BM_TotalLoss)->Arg(64)->Arg(128);

void BM_Evaluate(benchmark::State& state) {
  const auto ng = static_cast<std::size_t>(state.range(0));
  const std::size_t nq = 100;
  EvalSet q{random_matrix(nq, 64, 7), {}};
  EvalSet g{random_matrix(ng, 64, 8), {}};
  for (std::size_t i = 0; i < nq; ++i) {
    q.manifest.records.push_back({"q" + std::to_string(i), static_cast<std::int64_t>(i % 50), 0,
                                  Modality::kInfrared});
  }
  for (std::size_t i = 0; i < ng; ++i) {
    g.manifest.records.push_back({"g" + std::to_string(i), static_cast<std::int64_t>(i % 50),
                                  static_cast<std::int64_t>(1 + i % 3), Modality::kVisible});
  }
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(q, g, EvalConfig{}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(nq));
}
BENCHMARK(BM_Evaluate)->Arg(300)->Arg(3000);

void BM_ApplyMaa(benchmark::State& state) {
  const auto h = static_cast<std::size_t>(state.range(0));
  Rng rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Image img(h, h / 2);
  for (double& v : img.values()) v = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(apply_maa(img, rng, MaaConfig{}));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(img.values().size() * 8));
}
BENCHMARK(BM_ApplyMaa)->Arg(64)->Arg(384);

void BM_ToyRun(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(run_toy(ToyRunConfig{}));
}
BENCHMARK(BM_ToyRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
