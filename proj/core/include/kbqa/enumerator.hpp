#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "kbqa/kb_store.hpp"
#include "kbqa/sexpr.hpp"

namespace kbqa {

/// An anchor for enumeration: a linked entity or a number from the question.
struct StartPoint {
  Term value;

  static StartPoint entity(EntityId id) { return StartPoint{Term(std::move(id))}; }
  static StartPoint literal(LiteralValue v) { return StartPoint{Term(std::move(v))}; }
  bool is_literal() const { return std::holds_alternative<LiteralValue>(value); }
};

struct EnumConfig {
  int hop_limit = 2;
  bool include_class_constraint = true;
  std::size_t max_candidates = 2000;
};

/// JOIN chains of up to `hop_limit` relations anchored at each start point,
/// optionally wrapped in (AND class F) for every class with a member in the
/// chain's denotation. Edges of the store's type relation are not walked.
///
/// Output is deduplicated by canonical print, contains only forms with a
/// non-empty denotation, and is ordered by (relation count, canonical print)
/// before truncation to `max_candidates`. Start points missing from the store
/// contribute nothing. Throws std::invalid_argument for hop_limit outside 1..2.
std::vector<LogicalForm> enumerate_elfs(const std::vector<StartPoint>& starts, const TripleStore& store,
                                        const EnumConfig& config = {});

}  // namespace kbqa
