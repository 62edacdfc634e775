// Copyright 2026 The ARC Authors.
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

#include "arc/position.hpp"
#include "arc/scoring.hpp"
#include "arc/stats.hpp"

namespace {

const std::vector<std::string> kVocab{"court", "father", "mother", "access", "order", "appeal",
                                      "costs", "the", "a", "hearing", "tenant", "rent"};

std::string sentence(std::mt19937& rng, std::size_t len) {
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s += (i ? " " : "") + kVocab[rng() % kVocab.size()];
  return s;
}

void BM_Rouge1(benchmark::State& state) {
  std::mt19937 rng(1);
  auto a = sentence(rng, static_cast<std::size_t>(state.range(0)));
  auto b = sentence(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(arc::position::rouge1(a, b));
}
BENCHMARK(BM_Rouge1)->Arg(20)->Arg(200);

void BM_GreedySelect(benchmark::State& state) {
  std::mt19937 rng(2);
  std::vector<arc::corpus::Sentence> doc;
  for (int i = 0; i < state.range(0); ++i) doc.push_back({i, sentence(rng, 15), {}, {}});
  auto target = sentence(rng, 80);
  for (auto _ : state) benchmark::DoNotOptimize(arc::position::greedy_select(doc, target));
}
BENCHMARK(BM_GreedySelect)->Arg(20)->Arg(100);

void BM_KendallTauB(benchmark::State& state) {
  std::mt19937 rng(3);
  std::vector<double> x, y;
  for (int i = 0; i < state.range(0); ++i) {
    x.push_back(static_cast<double>(rng() % 4));
    y.push_back(static_cast<double>(rng() % 4));
  }
  arc::stats::PairedSeries s(x, y);
  for (auto _ : state) benchmark::DoNotOptimize(arc::stats::kendall_tau_b(s));
}
BENCHMARK(BM_KendallTauB)->Arg(50)->Arg(500);

void BM_AtomicMean(benchmark::State& state) {
  std::mt19937 rng(4);
  std::vector<arc::scoring::VerdictRecord> recs;
  for (int a = 0; a < state.range(0); ++a) {
    for (int f = 0; f < 5; ++f) {
      arc::judge::Verdict v;
      v.kind = arc::judge::VerdictKind::kAtomicDecision;
      v.decision = rng() % 2;
      recs.push_back({"d", arc::scoring::Level::kAtomic, "f", "a" + std::to_string(a), "s", "j", v});
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(arc::scoring::atomic_mean(recs));
}
BENCHMARK(BM_AtomicMean)->Arg(10)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
