#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kbqa/trie.hpp"
#include "kbqa/vocabulary.hpp"

namespace kbqa {

/// What the decoder may emit: the two schema tries and the entity tokens
/// linked for the current question (sorted).
struct DecodeConstraints {
  const Vocabulary* vocab = nullptr;
  const SchemaTrie* classes = nullptr;
  const SchemaTrie* relations = nullptr;
  std::vector<TokenId> entities;

  /// Keeps only ids that re-parse as entities (not class- or literal-shaped).
  void set_entities(const std::vector<EntityId>& ids);
};

/// Category of the next grammar slot.
enum class Expectation : std::uint8_t {
  Expression,         // class, entity, or "(" operator ...
  ExpressionOrCount,  // root: as Expression, COUNT also allowed
  JoinTarget,         // Expression or numeric literal
  RelationOrReverse,  // relation or "(R"
  Relation,
  NumericLiteral,
  Operator,  // just after "("
  Close,
  End,
  Finished,
};

/// Incremental LL(1) recognizer for the logical-form grammar over decoder
/// tokens. Schema slots follow the tries; an item ends when the next token is
/// not a child of a terminal trie node.
class GrammarState {
 public:
  GrammarState();

  /// Sorted, unique token ids legal in this state.
  std::vector<TokenId> allowed_next(const DecodeConstraints& c) const;
  bool allows(TokenId token, const DecodeConstraints& c) const;

  /// Consumes a token; returns false (leaving the state unspecified) when it
  /// is not legal.
  bool advance(TokenId token, const DecodeConstraints& c);

  /// The expression is complete; only the end token may follow.
  bool done() const;
  /// The end token has been consumed.
  bool finished() const noexcept { return phase_ == Phase::Finished; }
  Expectation expectation() const;
  std::size_t depth() const noexcept { return stack_.size(); }

  /// Replays a token sequence from the initial state.
  static std::optional<GrammarState> replay(std::span<const TokenId> tokens, const DecodeConstraints& c);

 private:
  enum class Frame : std::uint8_t { Top, And, Join, Reverse, Count, ArgMin, ArgMax, Compare };
  enum class Phase : std::uint8_t { Ready, AfterOpen, InClass, InRelation, InLiteral, Finished };
  enum class Lit : std::uint8_t { Sign, Int, Point, Frac, Exp, ExpSign, ExpDigits, Marker, Tagged };

  struct Slot {
    Frame frame;
    std::uint8_t position;
  };

  Expectation slot_expectation() const;
  void complete_atom();
  void allowed_into(const DecodeConstraints& c, std::vector<TokenId>& out) const;
  void literal_allowed(const DecodeConstraints& c, std::vector<TokenId>& out) const;
  bool literal_can_end() const;
  bool advance_literal(TokenId token, const DecodeConstraints& c);

  std::vector<Slot> stack_;
  Phase phase_ = Phase::Ready;
  Lit lit_ = Lit::Int;
  bool lit_fraction_ = false;
  std::uint8_t lit_digits_ = 0;
  SchemaTrie::NodeIndex trie_node_ = SchemaTrie::kRoot;
};

}  // namespace kbqa
