#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbqa/executor.hpp"
#include "kbqa/pipeline.hpp"

namespace kbqa {

/// Canonical-print equality. An unparsable prediction never matches.
bool exact_match(const LogicalForm& predicted, const LogicalForm& gold);
bool exact_match(std::string_view predicted, std::string_view gold);

struct F1Score {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Set precision/recall/F1. Both sets empty scores (1, 1, 1); exactly one
/// empty scores (0, 0, 0).
F1Score answer_f1(const std::set<std::string>& predicted, const std::set<std::string>& gold);

/// Mean over `trials` of whether a uniformly drawn predicted answer is gold.
/// Empty predictions score 0.
double hits_at_1(const std::set<std::string>& predicted, const std::set<std::string>& gold, int trials = 100,
                 std::uint64_t seed = 0);

struct BucketScore {
  std::size_t count = 0;
  double em = 0.0;        // percent
  double f1 = 0.0;        // percent
  double hits_at_1 = 0.0; // percent
};

struct EvaluationReport {
  BucketScore overall;
  /// Keys "function=<none|count|comparative|superlative>" and
  /// "relations=<n>", derived from the gold form.
  std::map<std::string, BucketScore> buckets;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// Pairs examples and predictions by question id. EM needs a gold form and F1
/// gold answers; examples missing either count as 0 for that metric.
EvaluationReport evaluate_dataset(const std::vector<QAExample>& examples, const std::vector<Prediction>& predictions,
                                  std::uint64_t seed = 0);

}  // namespace kbqa
