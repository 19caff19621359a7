#include "kbqa/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <memory>
#include <set>
#include <stdexcept>
#include <thread>

#include "kbqa/error.hpp"

namespace kbqa {
namespace {

class StageClock {
 public:
  explicit StageClock(Prediction& p) : prediction_(p), start_(std::chrono::steady_clock::now()) {}

  // Runs `body`, records its wall time, and turns exceptions into stage
  // errors. Returns false when the stage failed.
  template <typename F>
  bool run(const char* stage, F&& body) {
    auto begin = std::chrono::steady_clock::now();
    bool ok = true;
    try {
      body();
    } catch (const ScorerError& e) {
      prediction_.errors.push_back(std::string(stage) + ": " + e.what());
      prediction_.scorer_failure = true;
      ok = false;
    } catch (const std::exception& e) {
      prediction_.errors.push_back(std::string(stage) + ": " + e.what());
      ok = false;
    }
    prediction_.timings.push_back({stage, elapsed_ms(begin)});
    return ok;
  }

  void finish() { prediction_.total_milliseconds = elapsed_ms(start_); }

 private:
  static double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
  }

  Prediction& prediction_;
  std::chrono::steady_clock::time_point start_;
};

std::vector<std::string> schema_of_kind(const TripleStore& store, SchemaKind kind) {
  std::vector<std::string> out;
  for (const auto& item : store.catalog()) {
    if (item.kind != kind) continue;
    try {
      Vocabulary::schema_pieces(item.name);
      out.push_back(item.name);
    } catch (const TokenizeError&) {
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Generated: return "generated";
    case Provenance::ElfFallback: return "elf-fallback";
    case Provenance::None: return "none";
  }
  return "none";
}

Engine::Engine(const TripleStore& store, PipelineConfig config)
    : store_(&store),
      config_(config),
      vocab_(Vocabulary::for_store(store)),
      classes_(SchemaTrie::build(schema_of_kind(store, SchemaKind::Class), vocab_)),
      relations_(SchemaTrie::build(schema_of_kind(store, SchemaKind::Relation), vocab_)) {}

DecodeConstraints Engine::constraints(const std::vector<EntityId>& linked) const {
  DecodeConstraints c;
  c.vocab = &vocab_;
  c.classes = &classes_;
  c.relations = &relations_;
  c.set_entities(linked);
  return c;
}

Prediction Engine::predict(const QAExample& example, const ScorerSet& scorers) const {
  if (!scorers.entity || !scorers.elf || !scorers.schema_class || !scorers.schema_relation || !scorers.generator)
    throw std::invalid_argument("predict: every scorer must be set");
  const auto& store = *store_;
  Prediction p;
  p.question_id = example.question_id;
  StageClock clock(p);
  auto question = Question::from_text(example.question);

  std::vector<LinkedEntity> links;
  clock.run("link", [&] { links = link_entities(question, store, *scorers.entity, config_.max_mention_len); });
  std::vector<EntityId> linked;
  for (const auto& l : links)
    if (std::find(linked.begin(), linked.end(), l.entity) == linked.end()) linked.push_back(l.entity);
  p.linked_entities = linked;

  std::vector<LogicalForm> elfs;
  clock.run("enumerate", [&] {
    std::vector<StartPoint> starts;
    for (const auto& id : linked) starts.push_back(StartPoint::entity(id));
    for (auto& lit : question_literals(question, store)) starts.push_back(StartPoint::literal(std::move(lit)));
    elfs = enumerate_elfs(starts, store, config_.enumeration);
  });

  std::vector<ScoredForm> ranked;
  clock.run("rank", [&] { ranked = rank_elfs(question, elfs, *scorers.elf, elfs.size()); });

  SchemaRetrieval schema;
  clock.run("schema", [&] {
    schema = retrieve_schema(question, store, *scorers.schema_class, *scorers.schema_relation, config_.top_schema);
  });

  AssembledContext context;
  clock.run("context", [&] {
    std::vector<ScoredForm> top(ranked.begin(),
                                ranked.begin() + static_cast<std::ptrdiff_t>(std::min(config_.top_elf, ranked.size())));
    context = assemble_context(question, links, top, schema, store, vocab_, config_.input_budget);
  });

  std::vector<Hypothesis> beam;
  clock.run("generate", [&] {
    auto c = constraints(linked);
    BeamConfig bc{config_.beam_size, config_.max_output_tokens, config_.length_normalize};
    beam = beam_search(*scorers.generator, context.tokens, config_.constrained ? &c : nullptr, bc);
  });

  clock.run("validate", [&] {
    for (std::size_t i = 0; i < beam.size(); ++i) {
      auto text = vocab_.detokenize(beam[i].tokens);
      p.beam.push_back(text);
      if (p.form) continue;
      std::optional<LogicalForm> form;
      try {
        form = parse_sexpr(text);
      } catch (const ParseError&) {
        continue;
      }
      if (!is_valid_prediction(*form, store)) continue;
      p.form = canonicalize(*form);
      p.provenance = Provenance::Generated;
      p.beam_rank = i;
    }
    if (p.form) return;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      if (!is_valid_prediction(ranked[i].form, store)) continue;
      p.form = ranked[i].form;
      p.provenance = Provenance::ElfFallback;
      p.elf_rank = i;
      return;
    }
  });

  if (p.form) {
    p.sexpr = print_sexpr(*p.form);
    p.answers = evaluate(*p.form, store);
  }
  if (config_.keep_context) p.context = std::move(context);
  clock.finish();
  return p;
}

std::vector<Prediction> Engine::predict_all(const std::vector<QAExample>& examples, const ScorerSet& scorers,
                                            std::size_t threads) const {
  std::vector<Prediction> out(examples.size());
  ScorerSet effective = scorers;
  std::unique_ptr<SerializedScorer> serialized;
  if (scorers.generator && !scorers.generator->reentrant()) {
    serialized = std::make_unique<SerializedScorer>(
        std::shared_ptr<const TokenScorer>(scorers.generator, [](const TokenScorer*) {}));
    effective.generator = serialized.get();
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(1, examples.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < examples.size(); i = next++) out[i] = predict(examples[i], effective);
  };
  if (threads <= 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace kbqa
