#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kbqa/kb_store.hpp"
#include "kbqa/sexpr.hpp"

namespace kbqa {

/// Denotation of a logical form: a deduplicated set of answers (entity ids or
/// literal spellings) or a count.
class AnswerSet {
 public:
  enum class Kind : std::uint8_t { Entities, Number };

  AnswerSet() = default;
  static AnswerSet entities(std::vector<std::string> items);
  static AnswerSet number(std::int64_t value);

  Kind kind() const noexcept { return kind_; }
  bool is_number() const noexcept { return kind_ == Kind::Number; }
  /// Sorted, unique. Empty for numbers.
  const std::vector<std::string>& items() const noexcept { return items_; }
  std::int64_t count() const noexcept { return number_; }
  bool empty() const noexcept { return kind_ == Kind::Entities && items_.empty(); }

  /// Answers as strings; a number becomes its decimal spelling.
  std::set<std::string> as_strings() const;

  friend bool operator==(const AnswerSet&, const AnswerSet&) = default;

 private:
  Kind kind_ = Kind::Entities;
  std::vector<std::string> items_;
  std::int64_t number_ = 0;
};

std::string to_string(const AnswerSet& answers);

/// Sorted set of store nodes.
using NodeSet = std::vector<NodeId>;

/// Set-semantics evaluation over the store indexes:
///   [[e]] = {e} if e is in the store, [[c]] = instances_of(c),
///   [[(JOIN r X)]] = {s | (s r o), o in [[X]]}, [[(JOIN (R r) X)]] = {o | (s r o), s in [[X]]},
///   [[(AND a b)]] = [[a]] & [[b]], [[(cmp r v)]] = {s | (s r o), o cmp v},
///   [[(COUNT X)]] = |[[X]]|, [[(ARGMIN X r)]] = members of [[X]] whose smallest numeric
///   r-value equals the minimum over [[X]] (all ties kept; ARGMAX symmetric).
/// Throws TypeError when a comparison literal is not numeric or datetime.
AnswerSet evaluate(const LogicalForm& form, const TripleStore& store);

/// Node-level evaluation of a set-valued form.
NodeSet evaluate_nodes(const LogicalForm& form, const TripleStore& store);

AnswerSet answers_from_nodes(const NodeSet& nodes, const TripleStore& store);

/// True iff the form validates against the catalog, executes without error,
/// and yields a non-empty answer set or any count.
bool is_valid_prediction(const LogicalForm& form, const TripleStore& store);
bool is_valid_prediction(std::string_view sexpr, const TripleStore& store);

enum class SparqlShape : std::uint8_t { SelectDistinct, CountAggregate, SuperlativeSubquery };

struct SparqlQuery {
  std::string text;
  SparqlShape shape = SparqlShape::SelectDistinct;
};

/// Compiles to a SPARQL SELECT over variables ?x, ?y0, ?y1, ... with
/// patterns in AST pre-order. Entities and schema names become `<name>`
/// IRIs, literals `"v"^^<tag>`.
SparqlQuery compile_sparql(const LogicalForm& form, std::string_view type_relation = "type_rel");

/// Evaluates a query in the subset emitted by compile_sparql(): basic graph
/// patterns, VALUES, single-comparison FILTERs, COUNT(DISTINCT) and nested
/// MIN/MAX sub-selects. Anything else throws UnsupportedError; malformed
/// text throws ParseError.
///
/// VALUES binds only terms that occur in the graph, so a bare entity absent
/// from the store yields no rows (matching evaluate()).
AnswerSet evaluate_sparql_subset(const SparqlQuery& query, const TripleStore& store);
AnswerSet evaluate_sparql_subset(std::string_view text, const TripleStore& store);

}  // namespace kbqa
