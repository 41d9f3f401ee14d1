#include <benchmark/benchmark.h>

#include <filesystem>

#include "semem/nlparse.hpp"
#include "semem/persistence.hpp"
#include "semem/resolver.hpp"
#include "semem/seed.hpp"

namespace {

const semem::Lexicon& lexicon() {
  static const semem::Lexicon lex = semem::Lexicon::load(std::filesystem::path(SEMEM_SOURCE_DIR) / "data" / "lexicon.json");
  return lex;
}

void BM_Parse(benchmark::State& state) {
  auto strategy = static_cast<semem::ParseStrategy>(state.range(0));
  state.SetLabel(std::string(semem::to_string(strategy)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(semem::parse("YuMi, please pick the big green nut!", lexicon(), strategy));
  }
}
BENCHMARK(BM_Parse)
    ->Arg(static_cast<int>(semem::ParseStrategy::kHeuristic))
    ->Arg(static_cast<int>(semem::ParseStrategy::kTriplet));

void BM_Resolve(benchmark::State& state) {
  semem::World world = semem::seed_world();
  auto scene = semem::parse_scene_document(
      semem::read_text_file(std::filesystem::path(SEMEM_SOURCE_DIR) / "data" / "scenes" / "exp1.json"));
  for (std::int64_t i = 0; i < state.range(0); ++i) semem::ingest_scene(world.graph, world.signatures, scene);
  auto frame = semem::parse("YuMi, pick the green nut!", lexicon());
  for (auto _ : state) benchmark::DoNotOptimize(semem::resolve(world.graph, frame));
}
BENCHMARK(BM_Resolve)->Range(1, 256);

void BM_SerializeSeed(benchmark::State& state) {
  semem::World world = semem::seed_world();
  for (auto _ : state) benchmark::DoNotOptimize(semem::serialize(world));
}
BENCHMARK(BM_SerializeSeed);

}  // namespace
