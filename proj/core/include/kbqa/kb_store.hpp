#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "kbqa/literal.hpp"

namespace kbqa {

using EntityId = std::string;

/// Object position of a triple: an entity (or class) id, or a literal.
using Term = std::variant<EntityId, LiteralValue>;

std::string term_to_string(const Term& term);

enum class SchemaKind : std::uint8_t { Class, Relation };

struct SchemaItem {
  SchemaKind kind = SchemaKind::Relation;
  std::string name;
  std::string label;
  std::optional<std::string> domain_class;
  std::optional<std::string> range_class;
};

/// Human-readable label for a dotted schema name: last segment, underscores
/// as spaces ("ms.length_units" -> "length units").
std::string default_schema_label(std::string_view name);

struct Triple {
  EntityId subject;
  std::string relation;
  Term object;

  friend auto operator<=>(const Triple&, const Triple&) = default;
  friend bool operator==(const Triple&, const Triple&) = default;
};

struct AliasHit {
  EntityId entity;
  double popularity = 0.0;
};

struct EntityMeta {
  std::string label;
  std::vector<std::string> aliases;
  double popularity = 0.0;
};

enum class NodeId : std::uint32_t {};
enum class RelationId : std::uint32_t {};

/// Interned adjacency entry: the relation and the node at the other end.
struct Edge {
  RelationId relation;
  NodeId node;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct StoreOptions {
  /// Relation whose objects are class names (rdf:type analogue).
  std::string type_relation = "type_rel";
  /// Reject alias rows naming entities absent from the store instead of
  /// keeping them with a warning.
  bool strict_aliases = false;
};

enum class TripleFormat { Tsv3, NTriples };

/// Case-folds and whitespace-normalizes an alias or mention surface.
std::string fold_alias(std::string_view text);

/// Frozen, immutable knowledge base. Built by StoreBuilder; every query is
/// const and safe to call from concurrent readers.
class TripleStore {
 public:
  TripleStore() = default;

  std::set<std::pair<std::string, Term>> neighbors_out(
      std::string_view subject, std::optional<std::string_view> relation = std::nullopt) const;
  std::set<std::pair<std::string, EntityId>> neighbors_in(
      const Term& object, std::optional<std::string_view> relation = std::nullopt) const;
  std::set<EntityId> instances_of(std::string_view class_name) const;
  std::set<std::string> entity_relations(std::string_view entity) const;

  /// Alias lookup (case-folded), popularity-descending, ties by entity id.
  std::span<const AliasHit> lookup_alias(std::string_view alias) const;
  /// Length in whitespace tokens of the longest alias.
  std::size_t max_alias_tokens() const noexcept { return max_alias_tokens_; }

  const SchemaItem* find_schema(std::string_view name) const;
  bool has_class(std::string_view name) const;
  bool has_relation(std::string_view name) const;
  /// All schema items, sorted by (kind, name).
  std::span<const SchemaItem> catalog() const noexcept { return catalog_; }
  std::vector<std::string> class_names() const;
  std::vector<std::string> relation_names() const;

  const EntityMeta* entity_meta(std::string_view entity) const;
  /// Label if known, else the entity id itself.
  std::string label_of(std::string_view entity) const;
  /// Entities that have metadata or appear as a triple subject.
  std::vector<EntityId> entity_ids() const;

  std::vector<Triple> triples() const;
  std::size_t triple_count() const noexcept { return subjects_.size(); }
  const std::string& type_relation() const noexcept { return options_.type_relation; }
  const StoreOptions& options() const noexcept { return options_; }

  // Interned access used by the evaluators and the enumerator.
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::optional<NodeId> find_node(const Term& term) const;
  std::optional<NodeId> find_entity(std::string_view id) const;
  const Term& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  bool is_literal(NodeId id) const { return std::holds_alternative<LiteralValue>(node(id)); }
  std::string node_text(NodeId id) const { return term_to_string(node(id)); }

  std::optional<RelationId> find_relation(std::string_view name) const;
  const std::string& relation_name(RelationId id) const {
    return relation_names_[static_cast<std::size_t>(id)];
  }
  std::size_t relation_id_count() const noexcept { return relation_names_.size(); }
  std::optional<RelationId> type_relation_id() const { return find_relation(options_.type_relation); }

  /// Outgoing edges of a node sorted by (relation, object); optionally just
  /// one relation's slice.
  std::span<const Edge> out_edges(NodeId subject) const;
  std::span<const Edge> out_edges(NodeId subject, RelationId relation) const;
  std::span<const Edge> in_edges(NodeId object) const;
  std::span<const Edge> in_edges(NodeId object, RelationId relation) const;
  /// All (subject, object) pairs of a relation, sorted.
  std::span<const std::pair<NodeId, NodeId>> relation_pairs(RelationId relation) const;
  /// Sorted members of a class.
  std::span<const NodeId> class_members(std::string_view class_name) const;

 private:
  friend class StoreBuilder;

  StoreOptions options_;
  std::vector<Term> nodes_;
  std::unordered_map<std::string, NodeId> node_index_;
  std::vector<std::string> relation_names_;
  std::unordered_map<std::string, RelationId> relation_index_;

  // Triples as parallel columns (deduplicated, sorted by subject, relation, object).
  std::vector<NodeId> subjects_;
  std::vector<RelationId> relations_;
  std::vector<NodeId> objects_;

  // CSR adjacency.
  std::vector<std::uint32_t> out_offsets_, in_offsets_;
  std::vector<Edge> out_edges_, in_edges_;
  std::vector<std::vector<std::pair<NodeId, NodeId>>> by_relation_;
  std::map<std::string, std::vector<NodeId>, std::less<>> class_members_;

  std::vector<SchemaItem> catalog_;
  std::unordered_map<std::string, std::size_t> catalog_index_;
  std::map<std::string, std::vector<AliasHit>, std::less<>> aliases_;
  std::size_t max_alias_tokens_ = 0;
  std::map<std::string, EntityMeta, std::less<>> entity_meta_;
};

/// Single-writer ingestion front end. Accumulates triples, schema, labels
/// and aliases, then freezes into a TripleStore.
class StoreBuilder {
 public:
  explicit StoreBuilder(StoreOptions options = {});

  void add_triple(EntityId subject, std::string relation, Term object);
  void add_schema(SchemaItem item);
  void add_label(EntityId entity, std::string label);
  void add_alias(std::string alias, EntityId entity, double popularity);

  /// One triple per line. Blank lines and lines starting with '#' are skipped.
  void load_triples(std::istream& in, TripleFormat format = TripleFormat::Tsv3);
  /// `alias \t entity_id \t popularity` per line.
  void load_aliases(std::istream& in);
  /// `entity_id \t label` per line.
  void load_labels(std::istream& in);
  /// `class \t name [\t label]` or `relation \t name \t domain \t range [\t label]`.
  void load_schema(std::istream& in);
  /// Store dump as written by write_dump(): '@'-directives plus TSV triples.
  void load_dump(std::istream& in);

  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  std::size_t pending_triples() const noexcept { return triples_.size(); }

  TripleStore freeze() &&;

 private:
  bool knows_entity(std::string_view id) const;
  void parse_schema_fields(const std::vector<std::string_view>& fields, std::size_t line);

  StoreOptions options_;
  std::set<Triple> triples_;
  std::set<std::string, std::less<>> entities_;
  std::map<std::string, SchemaItem, std::less<>> schema_;
  std::map<EntityId, std::string, std::less<>> labels_;
  struct AliasRow {
    std::string alias;
    EntityId entity;
    double popularity;
  };
  std::vector<AliasRow> aliases_;
  std::vector<std::string> warnings_;
};

/// Writes a self-contained text dump that load_dump() reads back into an
/// identical store.
void write_dump(const TripleStore& store, std::ostream& out);

/// Convenience: parses one TSV object field (entity id unless it is a
/// number, quoted, or carries `^^tag`).
Term parse_tsv_object(std::string_view field);

}  // namespace kbqa
