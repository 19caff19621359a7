#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kbqa/literal.hpp"

namespace kbqa {

class TripleStore;

enum class ExprKind : std::uint8_t { Entity, Literal, Class, And, Join, Count, ArgMin, ArgMax, Compare };
enum class CompareOp : std::uint8_t { Lt, Le, Gt, Ge };

std::string_view to_string(CompareOp op);
std::optional<CompareOp> compare_op_from(std::string_view head);

/// Immutable logical-form AST with shared subtrees.
///
///   expr   := entity | class | (AND expr expr) | (JOIN rel expr|literal)
///           | (COUNT expr) | (ARGMIN expr relation) | (ARGMAX expr relation)
///           | (lt|le|gt|ge relation literal)
///   rel    := relation | (R relation)
///
/// COUNT is only legal at the root; a bare literal only as a JOIN target.
/// The factories enforce these rules and throw TypeError otherwise.
class LogicalForm {
 public:
  static LogicalForm entity(std::string id);
  static LogicalForm literal(LiteralValue value);
  static LogicalForm class_ref(std::string name);
  static LogicalForm conj(LogicalForm left, LogicalForm right);
  static LogicalForm join(std::string relation, LogicalForm target, bool reversed = false);
  static LogicalForm count(LogicalForm sub);
  static LogicalForm argmin(LogicalForm sub, std::string relation);
  static LogicalForm argmax(LogicalForm sub, std::string relation);
  static LogicalForm compare(CompareOp op, std::string relation, LiteralValue value);

  ExprKind kind() const noexcept { return node_->kind; }
  /// Entity id, class name, or relation name, depending on kind().
  const std::string& symbol() const noexcept { return node_->symbol; }
  /// JOIN only: relation wrapped in (R ...).
  bool reversed() const noexcept { return node_->reversed; }
  CompareOp op() const noexcept { return node_->op; }
  const LiteralValue& literal_value() const { return *node_->literal; }
  std::size_t arity() const noexcept { return node_->children.size(); }
  const LogicalForm& child(std::size_t i) const { return node_->children.at(i); }

  /// Denotes a set of KB nodes (everything except COUNT and bare literals).
  bool is_set_valued() const noexcept;

  friend bool operator==(const LogicalForm& a, const LogicalForm& b);

 private:
  struct Node {
    ExprKind kind;
    std::string symbol;
    bool reversed = false;
    CompareOp op = CompareOp::Lt;
    std::optional<LiteralValue> literal;
    std::vector<LogicalForm> children;
  };

  explicit LogicalForm(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Atom classification used by the parser: a symbol containing '.' is a
/// class unless it is shaped like a Freebase machine id (`m.0l2l_`,
/// `g.11b6...`); everything else is an entity id.
bool looks_like_class(std::string_view symbol);

/// Parses one logical form. Throws ParseError with the byte offset of the
/// offending token.
LogicalForm parse_sexpr(std::string_view text);

/// Prints the tree exactly as structured (no reordering).
std::string print_sexpr(const LogicalForm& form);

/// Sorts every AND pair by the canonical print of its children. Idempotent.
LogicalForm canonicalize(const LogicalForm& form);

/// print_sexpr(canonicalize(form)).
std::string print_canonical(const LogicalForm& form);

struct SchemaViolation {
  enum class Kind : std::uint8_t { UnknownClass, UnknownRelation, ClassUsedAsRelation, RelationUsedAsClass };
  Kind kind;
  std::string name;
  friend bool operator==(const SchemaViolation&, const SchemaViolation&) = default;
};

std::string describe(const SchemaViolation& violation);

/// Checks every class and relation name against the store catalog.
std::vector<SchemaViolation> validate_schema(const LogicalForm& form, const TripleStore& store);

enum class FunctionClass : std::uint8_t { None, Count, Comparative, Superlative };

std::string_view to_string(FunctionClass fc);

/// Superlative if any ARGMIN/ARGMAX, else Comparative if any lt/le/gt/ge,
/// else Count if the root is COUNT, else None.
FunctionClass function_class(const LogicalForm& form);

/// Number of relation-name occurrences.
std::size_t relation_count(const LogicalForm& form);

struct SymbolSet {
  std::vector<std::string> classes;
  std::vector<std::string> relations;
  std::vector<std::string> entities;
  std::vector<LiteralValue> literals;
};

/// Every symbol in pre-order, duplicates kept.
SymbolSet collect_symbols(const LogicalForm& form);

}  // namespace kbqa
