#pragma once

#include <set>
#include <string>
#include <vector>

#include "kbqa/enumerator.hpp"
#include "kbqa/executor.hpp"

namespace kbqa::test {

/// Brute-force reference for enumerate_elfs: walks the raw triple list
/// without touching the store indexes and returns canonical prints of every
/// non-empty one- or two-hop JOIN chain (plus class wrappers).
std::set<std::string> completeness_oracle(const std::vector<StartPoint>& starts, const TripleStore& store,
                                          const EnumConfig& config = {});

}  // namespace kbqa::test

namespace kbqa::test {

/// Denotation by direct recursion over the raw triple list. Answers are
/// printed terms; COUNT yields a single decimal string.
struct ReferenceAnswer {
  bool is_count = false;
  std::set<std::string> items;
  std::size_t count = 0;
  friend bool operator==(const ReferenceAnswer&, const ReferenceAnswer&) = default;
};

ReferenceAnswer reference_evaluate(const LogicalForm& form, const TripleStore& store);

/// Same shape as ReferenceAnswer, for comparison.
ReferenceAnswer to_reference(const AnswerSet& answers);

}  // namespace kbqa::test
