#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kbqa/beam.hpp"
#include "kbqa/context.hpp"
#include "kbqa/enumerator.hpp"
#include "kbqa/executor.hpp"
#include "kbqa/retrievers.hpp"
#include "kbqa/trie.hpp"

namespace kbqa {

struct QAExample {
  std::string question_id;
  std::string question;
  std::optional<std::string> sexpr;
  std::optional<std::vector<std::string>> answers;
};

struct PipelineConfig {
  std::size_t beam_size = 10;
  std::size_t max_output_tokens = 128;
  std::size_t input_budget = 1000;
  std::size_t top_schema = 10;
  std::size_t top_elf = 5;
  std::size_t max_mention_len = 15;
  bool constrained = true;
  bool length_normalize = false;
  bool keep_context = false;
  EnumConfig enumeration;
};

/// The scorers used by one predict() call. Retrieval scorers may be shared.
struct ScorerSet {
  const Scorer* entity = nullptr;
  const Scorer* elf = nullptr;
  const Scorer* schema_class = nullptr;
  const Scorer* schema_relation = nullptr;
  const TokenScorer* generator = nullptr;
};

enum class Provenance : std::uint8_t { Generated, ElfFallback, None };

std::string_view to_string(Provenance p);

struct StageTiming {
  std::string stage;
  double milliseconds = 0.0;
};

struct Prediction {
  std::string question_id;
  std::optional<LogicalForm> form;
  std::string sexpr;  // canonical print of `form`, empty for none
  std::optional<AnswerSet> answers;
  Provenance provenance = Provenance::None;
  std::optional<std::size_t> beam_rank;
  std::optional<std::size_t> elf_rank;
  /// Decoded beam, best first.
  std::vector<std::string> beam;
  std::vector<std::string> linked_entities;
  /// "stage: message" for every stage that failed.
  std::vector<std::string> errors;
  bool scorer_failure = false;
  std::vector<StageTiming> timings;
  double total_milliseconds = 0.0;
  std::optional<AssembledContext> context;
};

/// End-to-end question answering over one store: link, enumerate and rank
/// exemplary forms, retrieve schema, assemble context, decode, then take the
/// first beam hypothesis that executes to a non-empty answer; failing that,
/// the first ranked exemplary form that does.
class Engine {
 public:
  explicit Engine(const TripleStore& store, PipelineConfig config = {});

  const TripleStore& store() const noexcept { return *store_; }
  const PipelineConfig& config() const noexcept { return config_; }
  /// Extending the vocabulary is allowed until predictions start; ids are
  /// append-only so existing scorers stay valid.
  Vocabulary& vocabulary() noexcept { return vocab_; }
  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  const SchemaTrie& class_trie() const noexcept { return classes_; }
  const SchemaTrie& relation_trie() const noexcept { return relations_; }

  DecodeConstraints constraints(const std::vector<EntityId>& linked) const;

  Prediction predict(const QAExample& example, const ScorerSet& scorers) const;

  /// Runs predict() over a worker pool; results are in input order.
  /// Non-reentrant token scorers are serialized.
  std::vector<Prediction> predict_all(const std::vector<QAExample>& examples, const ScorerSet& scorers,
                                      std::size_t threads = 0) const;

 private:
  const TripleStore* store_;
  PipelineConfig config_;
  Vocabulary vocab_;
  SchemaTrie classes_;
  SchemaTrie relations_;
};

}  // namespace kbqa
