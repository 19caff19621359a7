#include <benchmark/benchmark.h>

#include <map>

#include "kbqa/enumerator.hpp"
#include "kbqa/executor.hpp"
#include "kbqa/pipeline.hpp"
#include "kbqa/synthetic.hpp"
#include "kbqa/token_scorers.hpp"

namespace {

using namespace kbqa;

const SyntheticKb& synthetic(std::size_t entities) {
  static std::map<std::size_t, SyntheticKb> cache;
  auto it = cache.find(entities);
  if (it == cache.end()) {
    SyntheticConfig config;
    config.entities = entities;
    it = cache.emplace(entities, make_synthetic_kb(config)).first;
  }
  return it->second;
}

std::vector<TokenId> encode(const Engine& engine, const std::string& sexpr) {
  auto tokens = engine.vocabulary().encode_form(parse_sexpr(sexpr));
  tokens.push_back(Vocabulary::kEnd);
  return tokens;
}

void BM_Predict(benchmark::State& state) {
  const auto& kb = synthetic(static_cast<std::size_t>(state.range(0)));
  Engine engine(kb.store);
  LexicalScorer lexical = LexicalScorer::from_store(kb.store);
  std::vector<std::vector<TokenId>> corpus;
  for (const auto& q : kb.questions) corpus.push_back(encode(engine, *q.sexpr));
  NgramScorer ngram(engine.vocabulary().size(), corpus, 3);
  ScorerSet scorers{&lexical, &lexical, &lexical, &lexical, &ngram};
  std::size_t i = 0;
  for (auto _ : state) {
    auto p = engine.predict(kb.questions[i++ % kb.questions.size()], scorers);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_Predict)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_Enumerate(benchmark::State& state) {
  const auto& kb = synthetic(1000);
  auto ids = kb.store.entity_ids();
  std::size_t i = 0;
  for (auto _ : state) {
    auto elfs = enumerate_elfs({StartPoint::entity(ids[i++ % ids.size()])}, kb.store);
    benchmark::DoNotOptimize(elfs);
  }
}
BENCHMARK(BM_Enumerate)->Unit(benchmark::kMicrosecond);

void BM_ConstrainedBeam(benchmark::State& state) {
  const auto& kb = synthetic(1000);
  Engine engine(kb.store);
  const auto& q = kb.questions.front();
  OracleScorer oracle(engine.vocabulary().size(), encode(engine, *q.sexpr), 0.2);
  auto constraints = engine.constraints(kb.store.entity_ids());
  BeamConfig config{static_cast<std::size_t>(state.range(0)), 128, false};
  for (auto _ : state) {
    auto beam = beam_search(oracle, {}, &constraints, config);
    benchmark::DoNotOptimize(beam);
  }
}
BENCHMARK(BM_ConstrainedBeam)->Arg(1)->Arg(10)->Arg(50)->Unit(benchmark::kMicrosecond);

void BM_Execute(benchmark::State& state) {
  const auto& kb = synthetic(1000);
  std::vector<LogicalForm> forms;
  for (const auto& q : kb.questions) forms.push_back(parse_sexpr(*q.sexpr));
  std::size_t i = 0;
  for (auto _ : state) {
    auto a = evaluate(forms[i++ % forms.size()], kb.store);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_Execute)->Unit(benchmark::kMicrosecond);

void BM_ParsePrint(benchmark::State& state) {
  const std::string text =
      "(AND spaceflight.bipropellant_rocket_engine (AND (JOIN spaceflight.bipropellant_rocket_engine.oxidizer "
      "m.01tm_5) (lt spaceflight.bipropellant_rocket_engine.chamber_pressure 257.0^^float)))";
  for (auto _ : state) {
    auto s = print_canonical(parse_sexpr(text));
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_ParsePrint);

}  // namespace

BENCHMARK_MAIN();
