#include <random>

#include <benchmark/benchmark.h>

#include "wordladders/cleaning.hpp"
#include "wordladders/levels.hpp"
#include "wordladders/scoring.hpp"

namespace wl = wordladders;

namespace {

// A layered random taxonomy: every word on layer k points to 1-2 words on
// layer k+1.
wl::KnowledgeBase layered_kb(int layers, int width, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::vector<wl::TaxonomyEdge> edges;
  for (int k = 0; k + 1 < layers; ++k) {
    for (int i = 0; i < width; ++i) {
      const std::string from = "l" + std::to_string(k) + "_" + std::to_string(i);
      for (int e = 0; e < 1 + static_cast<int>(rng() % 2); ++e) {
        const std::string to = "l" + std::to_string(k + 1) + "_" + std::to_string(rng() % width);
        edges.push_back({from, to, wl::Language::EN});
      }
    }
  }
  return wl::KnowledgeBase(wl::Language::EN, std::move(edges));
}

std::vector<wl::LexicalEntry> lexicon(std::size_t n) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<wl::LexicalEntry> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({"word" + std::to_string(i), wl::Language::EN, static_cast<wl::PartOfSpeech>(i % 3),
                   1 + 4 * u(rng), 7 * u(rng), 1 + 6 * u(rng), false});
  }
  return out;
}

}  // namespace

static void BM_IsGeneralization(benchmark::State& state) {
  const int layers = static_cast<int>(state.range(0));
  const auto kb = layered_kb(layers, 200, 1);
  std::mt19937 rng(2);
  for (auto _ : state) {
    const std::string a = "l0_" + std::to_string(rng() % 200);
    const std::string b = "l" + std::to_string(layers - 1) + "_" + std::to_string(rng() % 200);
    benchmark::DoNotOptimize(wl::is_generalization(kb, a, b));
  }
}
BENCHMARK(BM_IsGeneralization)->Arg(4)->Arg(8)->Arg(12);

static void BM_ValidatedLength(benchmark::State& state) {
  const auto kb = layered_kb(10, 50, 3);
  wl::Ladder ladder;
  ladder.prompt = "l0_0";
  std::string cur = ladder.prompt;
  while (!kb.hypernyms_of(cur).empty()) {
    cur = kb.hypernyms_of(cur).front();
    ladder.ascent.push_back(cur);
  }
  auto graph = wl::init_graph(ladder.prompt, kb);
  for (auto _ : state) benchmark::DoNotOptimize(wl::validated_length(ladder, graph, kb, 50));
}
BENCHMARK(BM_ValidatedLength);

static void BM_BuildLevels(benchmark::State& state) {
  const auto entries = lexicon(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(wl::build_levels(entries, 50));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildLevels)->Arg(500)->Arg(5000)->Arg(50000);

static void BM_CorrectTypos(benchmark::State& state) {
  const wl::Vocabulary vocab(lexicon(static_cast<std::size_t>(state.range(0))));
  wl::Ladder ladder;
  ladder.prompt = "word1";
  ladder.ascent = {"wrd2", "word33x", "wordd4", "word5"};
  for (auto _ : state) benchmark::DoNotOptimize(wl::correct_typos(ladder, vocab));
}
BENCHMARK(BM_CorrectTypos)->Arg(1000)->Arg(20000);

static void BM_SerializeGraph(benchmark::State& state) {
  const auto kb = layered_kb(10, 40, 4);
  auto graph = wl::init_graph("l5_0", kb);
  for (auto _ : state) benchmark::DoNotOptimize(wl::serialize_graph(graph));
}
BENCHMARK(BM_SerializeGraph);
BENCHMARK_MAIN();
