#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kbqa/kb_store.hpp"
#include "kbqa/sexpr.hpp"

namespace kbqa {

class LineProcess;

struct Question {
  std::string text;
  std::vector<std::string> tokens;

  static Question from_text(std::string text);
};

/// Token span [start, end) of a question.
struct Mention {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  friend bool operator==(const Mention&, const Mention&) = default;
};

struct LinkedEntity {
  Mention mention;
  EntityId entity;
  double score = 0.0;
};

struct EntityCandidate {
  EntityId entity;
  double popularity = 0.0;
  friend bool operator==(const EntityCandidate&, const EntityCandidate&) = default;
};

struct ScoredItem {
  std::string name;
  double score = 0.0;
};

struct ScoredForm {
  LogicalForm form;
  std::string text;  // canonical print
  double score = 0.0;
};

/// Question/candidate relevance. Implementations must be deterministic and
/// safe to call concurrently.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual double score(const Question& question, std::string_view candidate) const = 0;
};

/// IDF-weighted overlap of stemmed word tokens plus 0.1 x character-trigram
/// Jaccard similarity. Without documents every token has weight 1.
class LexicalScorer : public Scorer {
 public:
  LexicalScorer() = default;
  explicit LexicalScorer(const std::vector<std::string>& documents);
  /// Documents: every catalog name and every entity label.
  static LexicalScorer from_store(const TripleStore& store);

  double score(const Question& question, std::string_view candidate) const override;
  double idf(const std::string& stemmed) const;

 private:
  std::unordered_map<std::string, double> idf_;
  double unseen_idf_ = 1.0;
};

/// Fixed scores from a table, keyed by candidate and optionally by question
/// text; question-specific entries win. Missing pairs get `fallback`.
class TableScorer : public Scorer {
 public:
  explicit TableScorer(double fallback = 0.0) : fallback_(fallback) {}

  void set(std::string candidate, double value);
  void set(std::string question, std::string candidate, double value);

  double score(const Question& question, std::string_view candidate) const override;

 private:
  double fallback_;
  std::map<std::string, double, std::less<>> any_question_;
  std::map<std::pair<std::string, std::string>, double> per_question_;
};

/// Scores through a child process: writes `SCORE\t<question>\t<candidate>`,
/// reads one real number. Calls are serialized. Throws ScorerError on
/// timeout, exit, or a malformed reply.
class ExternalScorer : public Scorer {
 public:
  explicit ExternalScorer(std::string command, std::chrono::milliseconds timeout = std::chrono::seconds(10));
  ~ExternalScorer() override;

  double score(const Question& question, std::string_view candidate) const override;

 private:
  std::unique_ptr<LineProcess> process_;
  std::chrono::milliseconds timeout_;
  mutable std::mutex mutex_;
};

/// Alias-anchored span enumeration: every span of at most `max_len` tokens
/// whose folded surface is an alias, resolved longest-first then leftmost into
/// non-overlapping mentions. Returned in span order.
std::vector<Mention> detect_mentions(const Question& question, const TripleStore& store, std::size_t max_len = 15);

/// Alias-index entries for the mention, popularity-descending.
std::vector<EntityCandidate> generate_candidates(const Mention& mention, const TripleStore& store);

/// Label followed by the names of the relations touching the entity (the type
/// relation excluded).
std::string entity_context(const EntityId& entity, const TripleStore& store);

/// Highest-scoring candidate by scorer(question, entity_context); ties go to
/// higher popularity, then smaller id. Throws DataError for no candidates.
LinkedEntity disambiguate(const Question& question, const Mention& mention,
                          const std::vector<EntityCandidate>& candidates, const TripleStore& store,
                          const Scorer& scorer);

/// detect_mentions + generate_candidates + disambiguate for every mention.
std::vector<LinkedEntity> link_entities(const Question& question, const TripleStore& store, const Scorer& scorer,
                                        std::size_t max_len = 15);

/// Numeric question tokens that occur as literals in the store.
std::vector<LiteralValue> question_literals(const Question& question, const TripleStore& store);

struct SchemaRetrieval {
  std::vector<ScoredItem> classes;
  std::vector<ScoredItem> relations;
};

/// Independent top-k over the whole class catalog and relation catalog;
/// score-descending, ties by name.
SchemaRetrieval retrieve_schema(const Question& question, const TripleStore& store, const Scorer& class_scorer,
                                const Scorer& relation_scorer, std::size_t k = 10);
SchemaRetrieval retrieve_schema(const Question& question, const TripleStore& store, const Scorer& scorer,
                                std::size_t k = 10);

/// Top-k forms scored on their canonical print; ties by that print.
std::vector<ScoredForm> rank_elfs(const Question& question, const std::vector<LogicalForm>& elfs,
                                  const Scorer& scorer, std::size_t k);

/// Negative softmax probability of the target:
/// -exp(s_y) / sum_c exp(s_c), computed in log space. Result is in [-1, 0).
double ranker_loss(const std::vector<double>& scores, std::size_t target_index);

}  // namespace kbqa
