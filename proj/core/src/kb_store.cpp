#include "kbqa/kb_store.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "kbqa/error.hpp"
#include "kbqa/text.hpp"

namespace kbqa {
namespace {

constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

std::string node_key(const Term& term) {
  if (const auto* id = std::get_if<EntityId>(&term)) return "E" + *id;
  return "L" + std::get<LiteralValue>(term).value_key();
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

bool skippable(std::string_view line) {
  auto t = trim(line);
  return t.empty() || t.front() == '#';
}

std::string format_popularity(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string_view iri_local_name(std::string_view iri) {
  auto cut = iri.find_last_of("/#");
  return cut == std::string_view::npos ? iri : iri.substr(cut + 1);
}

// Minimal N-Triples reader: `<s> <p> <o> .` with `"..."`, `"..."^^<dt>` and
// `"..."@lang` literals.
struct NTriplesLine {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t line;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line, true); }

  std::string_view iri() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of line");
    if (text[pos] == '_') fail("blank nodes are not supported");
    if (text[pos] != '<') fail("expected IRI");
    auto end = text.find('>', pos);
    if (end == std::string_view::npos) fail("unterminated IRI");
    auto value = text.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    return value;
  }

  Term object() {
    skip_ws();
    if (pos < text.size() && text[pos] == '"') {
      std::string value;
      std::size_t i = pos + 1;
      bool closed = false;
      for (; i < text.size(); ++i) {
        if (text[i] == '\\' && i + 1 < text.size()) {
          char e = text[++i];
          value += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        } else if (text[i] == '"') {
          closed = true;
          ++i;
          break;
        } else {
          value += text[i];
        }
      }
      if (!closed) fail("unterminated literal");
      pos = i;
      std::optional<std::string_view> tag;
      if (text.substr(pos, 2) == "^^") {
        pos += 2;
        tag = iri_local_name(iri());
      } else if (pos < text.size() && text[pos] == '@') {
        while (pos < text.size() && text[pos] != ' ' && text[pos] != '\t') ++pos;
      }
      try {
        return LiteralValue::from_lexical(value, tag);
      } catch (const TypeError& e) {
        throw TypeError("line " + std::to_string(line) + ": " + e.what());
      }
    }
    return EntityId(iri_local_name(iri()));
  }

  void finish() {
    skip_ws();
    if (pos >= text.size() || text[pos] != '.') fail("expected '.' at end of triple");
    ++pos;
    skip_ws();
    if (pos < text.size() && text[pos] != '#') fail("trailing characters after '.'");
  }
};

}  // namespace

std::string term_to_string(const Term& term) {
  if (const auto* id = std::get_if<EntityId>(&term)) return *id;
  return std::get<LiteralValue>(term).to_string();
}

std::string default_schema_label(std::string_view name) {
  auto cut = name.find_last_of('.');
  std::string label(cut == std::string_view::npos ? name : name.substr(cut + 1));
  std::replace(label.begin(), label.end(), '_', ' ');
  return label;
}

std::string fold_alias(std::string_view text) { return join(tokenize_text(text), " "); }

Term parse_tsv_object(std::string_view field) {
  if (auto lit = LiteralValue::try_parse(field)) return *lit;
  return EntityId(field);
}

// ---------------------------------------------------------------------------
// TripleStore

std::optional<NodeId> TripleStore::find_node(const Term& term) const {
  auto it = node_index_.find(node_key(term));
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<NodeId> TripleStore::find_entity(std::string_view id) const {
  return find_node(Term(EntityId(id)));
}

std::optional<RelationId> TripleStore::find_relation(std::string_view name) const {
  auto it = relation_index_.find(std::string(name));
  if (it == relation_index_.end()) return std::nullopt;
  return it->second;
}

std::span<const Edge> TripleStore::out_edges(NodeId subject) const {
  auto i = static_cast<std::size_t>(subject);
  if (i + 1 >= out_offsets_.size()) return {};
  return std::span<const Edge>(out_edges_).subspan(out_offsets_[i], out_offsets_[i + 1] - out_offsets_[i]);
}

std::span<const Edge> TripleStore::in_edges(NodeId object) const {
  auto i = static_cast<std::size_t>(object);
  if (i + 1 >= in_offsets_.size()) return {};
  return std::span<const Edge>(in_edges_).subspan(in_offsets_[i], in_offsets_[i + 1] - in_offsets_[i]);
}

namespace {
std::span<const Edge> relation_slice(std::span<const Edge> edges, RelationId relation) {
  auto lo = std::lower_bound(edges.begin(), edges.end(), relation,
                             [](const Edge& e, RelationId r) { return e.relation < r; });
  auto hi = std::upper_bound(lo, edges.end(), relation,
                             [](RelationId r, const Edge& e) { return r < e.relation; });
  return {lo, hi};
}
}  // namespace

std::span<const Edge> TripleStore::out_edges(NodeId subject, RelationId relation) const {
  return relation_slice(out_edges(subject), relation);
}

std::span<const Edge> TripleStore::in_edges(NodeId object, RelationId relation) const {
  return relation_slice(in_edges(object), relation);
}

std::span<const std::pair<NodeId, NodeId>> TripleStore::relation_pairs(RelationId relation) const {
  auto i = static_cast<std::size_t>(relation);
  if (i >= by_relation_.size()) return {};
  return by_relation_[i];
}

std::span<const NodeId> TripleStore::class_members(std::string_view class_name) const {
  auto it = class_members_.find(class_name);
  if (it == class_members_.end()) return {};
  return it->second;
}

std::set<std::pair<std::string, Term>> TripleStore::neighbors_out(
    std::string_view subject, std::optional<std::string_view> relation) const {
  std::set<std::pair<std::string, Term>> out;
  auto node = find_entity(subject);
  if (!node) return out;
  std::span<const Edge> edges = out_edges(*node);
  if (relation) {
    auto rel = find_relation(*relation);
    if (!rel) return out;
    edges = out_edges(*node, *rel);
  }
  for (const auto& e : edges) out.emplace(relation_name(e.relation), this->node(e.node));
  return out;
}

std::set<std::pair<std::string, EntityId>> TripleStore::neighbors_in(
    const Term& object, std::optional<std::string_view> relation) const {
  std::set<std::pair<std::string, EntityId>> out;
  auto node = find_node(object);
  if (!node) return out;
  std::span<const Edge> edges = in_edges(*node);
  if (relation) {
    auto rel = find_relation(*relation);
    if (!rel) return out;
    edges = in_edges(*node, *rel);
  }
  for (const auto& e : edges) out.emplace(relation_name(e.relation), node_text(e.node));
  return out;
}

std::set<EntityId> TripleStore::instances_of(std::string_view class_name) const {
  std::set<EntityId> out;
  for (auto id : class_members(class_name)) out.insert(node_text(id));
  return out;
}

std::set<std::string> TripleStore::entity_relations(std::string_view entity) const {
  std::set<std::string> out;
  auto node = find_entity(entity);
  if (!node) return out;
  for (const auto& e : out_edges(*node)) out.insert(relation_name(e.relation));
  for (const auto& e : in_edges(*node)) out.insert(relation_name(e.relation));
  return out;
}

std::span<const AliasHit> TripleStore::lookup_alias(std::string_view alias) const {
  auto it = aliases_.find(fold_alias(alias));
  if (it == aliases_.end()) return {};
  return it->second;
}

const SchemaItem* TripleStore::find_schema(std::string_view name) const {
  auto it = catalog_index_.find(std::string(name));
  return it == catalog_index_.end() ? nullptr : &catalog_[it->second];
}

bool TripleStore::has_class(std::string_view name) const {
  const auto* item = find_schema(name);
  return item && item->kind == SchemaKind::Class;
}

bool TripleStore::has_relation(std::string_view name) const {
  const auto* item = find_schema(name);
  return item && item->kind == SchemaKind::Relation;
}

std::vector<std::string> TripleStore::class_names() const {
  std::vector<std::string> out;
  for (const auto& item : catalog_)
    if (item.kind == SchemaKind::Class) out.push_back(item.name);
  return out;
}

std::vector<std::string> TripleStore::relation_names() const {
  std::vector<std::string> out;
  for (const auto& item : catalog_)
    if (item.kind == SchemaKind::Relation) out.push_back(item.name);
  return out;
}

const EntityMeta* TripleStore::entity_meta(std::string_view entity) const {
  auto it = entity_meta_.find(entity);
  return it == entity_meta_.end() ? nullptr : &it->second;
}

std::string TripleStore::label_of(std::string_view entity) const {
  const auto* meta = entity_meta(entity);
  return meta && !meta->label.empty() ? meta->label : std::string(entity);
}

std::vector<EntityId> TripleStore::entity_ids() const {
  std::set<EntityId> ids;
  auto type = type_relation_id();
  for (std::size_t i = 0; i < subjects_.size(); ++i) {
    ids.insert(node_text(subjects_[i]));
    if (relations_[i] != type && !is_literal(objects_[i])) ids.insert(node_text(objects_[i]));
  }
  for (const auto& [id, meta] : entity_meta_) ids.insert(id);
  return {ids.begin(), ids.end()};
}

std::vector<Triple> TripleStore::triples() const {
  std::vector<Triple> out;
  out.reserve(subjects_.size());
  for (std::size_t i = 0; i < subjects_.size(); ++i) {
    out.push_back(Triple{node_text(subjects_[i]), relation_name(relations_[i]), node(objects_[i])});
  }
  return out;
}

// ---------------------------------------------------------------------------
// StoreBuilder

StoreBuilder::StoreBuilder(StoreOptions options) : options_(std::move(options)) {}

void StoreBuilder::add_triple(EntityId subject, std::string relation, Term object) {
  if (subject.empty() || relation.empty()) throw DataError("triple with empty subject or relation");
  if (relation == options_.type_relation) {
    const auto* cls = std::get_if<EntityId>(&object);
    if (!cls || cls->empty()) throw TypeError("object of " + relation + " must be a class name");
    if (!schema_.contains(*cls)) schema_.emplace(*cls, SchemaItem{SchemaKind::Class, *cls, {}, {}, {}});
  } else {
    if (!schema_.contains(relation)) {
      schema_.emplace(relation, SchemaItem{SchemaKind::Relation, relation, {}, {}, {}});
    }
    if (const auto* id = std::get_if<EntityId>(&object)) entities_.insert(*id);
  }
  entities_.insert(subject);
  triples_.insert(Triple{std::move(subject), std::move(relation), std::move(object)});
}

void StoreBuilder::add_schema(SchemaItem item) {
  if (item.name.empty()) throw DataError("schema item with empty name");
  auto it = schema_.find(item.name);
  if (it != schema_.end() && it->second.kind != item.kind) {
    throw DataError("schema item '" + item.name + "' registered as both class and relation");
  }
  schema_.insert_or_assign(item.name, std::move(item));
}

void StoreBuilder::add_label(EntityId entity, std::string label) {
  labels_.insert_or_assign(std::move(entity), std::move(label));
}

bool StoreBuilder::knows_entity(std::string_view id) const {
  return entities_.contains(id) || labels_.contains(id);
}

void StoreBuilder::add_alias(std::string alias, EntityId entity, double popularity) {
  if (!(popularity >= 0.0) || !std::isfinite(popularity)) {
    throw DataError("alias popularity must be a non-negative real");
  }
  if (!knows_entity(entity)) {
    if (options_.strict_aliases) throw DataError("alias '" + alias + "' names unknown entity " + entity);
    warnings_.push_back("alias '" + alias + "' names unknown entity " + entity);
  }
  aliases_.push_back(AliasRow{std::move(alias), std::move(entity), popularity});
}

void StoreBuilder::load_triples(std::istream& in, TripleFormat format) {
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = strip_cr(raw);
    if (skippable(line)) continue;
    if (format == TripleFormat::Tsv3) {
      auto fields = split(line, '\t');
      if (fields.size() != 3) throw ParseError("expected 3 tab-separated fields", line_no, true);
      for (auto f : fields)
        if (f.empty()) throw ParseError("empty field", line_no, true);
      Term object;
      try {
        object = parse_tsv_object(fields[2]);
      } catch (const TypeError& e) {
        throw TypeError("line " + std::to_string(line_no) + ": " + e.what());
      } catch (const ParseError& e) {
        throw ParseError(e.what(), line_no, true);
      }
      try {
        add_triple(EntityId(fields[0]), std::string(fields[1]), std::move(object));
      } catch (const TypeError& e) {
        throw TypeError("line " + std::to_string(line_no) + ": " + e.what());
      }
    } else {
      NTriplesLine reader{line, 0, line_no};
      std::string subject(iri_local_name(reader.iri()));
      auto predicate_iri = reader.iri();
      std::string relation =
          predicate_iri == kRdfType ? options_.type_relation : std::string(iri_local_name(predicate_iri));
      Term object = reader.object();
      reader.finish();
      try {
        add_triple(std::move(subject), std::move(relation), std::move(object));
      } catch (const TypeError& e) {
        throw TypeError("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
  }
}

void StoreBuilder::load_aliases(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = strip_cr(raw);
    if (skippable(line)) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 3) throw ParseError("expected alias, entity, popularity", line_no, true);
    double popularity = 0;
    auto pop = trim(fields[2]);
    auto [ptr, ec] = std::from_chars(pop.data(), pop.data() + pop.size(), popularity);
    if (ec != std::errc{} || ptr != pop.data() + pop.size() || popularity < 0 || !std::isfinite(popularity)) {
      throw ParseError("popularity must be a non-negative real", line_no, true);
    }
    add_alias(std::string(fields[0]), EntityId(fields[1]), popularity);
  }
}

void StoreBuilder::load_labels(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = strip_cr(raw);
    if (skippable(line)) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 2 || fields[0].empty()) throw ParseError("expected entity, label", line_no, true);
    add_label(EntityId(fields[0]), std::string(fields[1]));
  }
}

void StoreBuilder::parse_schema_fields(const std::vector<std::string_view>& fields, std::size_t line) {
  auto opt = [](std::string_view f) -> std::optional<std::string> {
    if (f.empty()) return std::nullopt;
    return std::string(f);
  };
  if (fields[0] == "class") {
    if (fields.size() < 2 || fields.size() > 3 || fields[1].empty()) {
      throw ParseError("expected: class, name [, label]", line, true);
    }
    add_schema(SchemaItem{SchemaKind::Class, std::string(fields[1]),
                          fields.size() == 3 ? std::string(fields[2]) : std::string(), {}, {}});
  } else if (fields[0] == "relation") {
    if (fields.size() < 4 || fields.size() > 5 || fields[1].empty()) {
      throw ParseError("expected: relation, name, domain, range [, label]", line, true);
    }
    add_schema(SchemaItem{SchemaKind::Relation, std::string(fields[1]),
                          fields.size() == 5 ? std::string(fields[4]) : std::string(), opt(fields[2]),
                          opt(fields[3])});
  } else {
    throw ParseError("unknown schema kind '" + std::string(fields[0]) + "'", line, true);
  }
}

void StoreBuilder::load_schema(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = strip_cr(raw);
    if (skippable(line)) continue;
    parse_schema_fields(split(line, '\t'), line_no);
  }
}

void StoreBuilder::load_dump(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = strip_cr(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() != '@') {
      auto fields = split(line, '\t');
      if (fields.size() != 3) throw ParseError("expected 3 tab-separated fields", line_no, true);
      try {
        add_triple(EntityId(fields[0]), std::string(fields[1]), parse_tsv_object(fields[2]));
      } catch (const TypeError& e) {
        throw TypeError("line " + std::to_string(line_no) + ": " + e.what());
      }
      continue;
    }
    auto fields = split(line.substr(1), '\t');
    auto directive = fields[0];
    if (directive == "option") {
      if (fields.size() != 3 || fields[1] != "type_relation") throw ParseError("bad @option", line_no, true);
      if (!triples_.empty()) throw DataError("@option must precede triples in a dump");
      options_.type_relation = std::string(fields[2]);
    } else if (directive == "class" || directive == "relation") {
      parse_schema_fields(fields, line_no);
    } else if (directive == "label") {
      if (fields.size() != 3) throw ParseError("bad @label", line_no, true);
      add_label(EntityId(fields[1]), std::string(fields[2]));
    } else if (directive == "alias") {
      if (fields.size() != 4) throw ParseError("bad @alias", line_no, true);
      double popularity = 0;
      auto [ptr, ec] = std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), popularity);
      if (ec != std::errc{}) throw ParseError("bad alias popularity", line_no, true);
      aliases_.push_back(AliasRow{std::string(fields[1]), EntityId(fields[2]), popularity});
    } else {
      throw ParseError("unknown dump directive '@" + std::string(directive) + "'", line_no, true);
    }
  }
}

TripleStore StoreBuilder::freeze() && {
  TripleStore store;
  store.options_ = options_;

  auto intern_node = [&](const Term& term) {
    auto key = node_key(term);
    auto [it, inserted] = store.node_index_.try_emplace(key, static_cast<NodeId>(store.nodes_.size()));
    if (inserted) store.nodes_.push_back(term);
    return it->second;
  };

  std::set<std::string> relation_set;
  for (const auto& t : triples_) relation_set.insert(t.relation);
  for (const auto& name : relation_set) {
    store.relation_index_.emplace(name, static_cast<RelationId>(store.relation_names_.size()));
    store.relation_names_.push_back(name);
  }

  struct Row {
    NodeId s;
    RelationId r;
    NodeId o;
    auto operator<=>(const Row&) const = default;
  };
  std::vector<Row> rows;
  rows.reserve(triples_.size());
  for (const auto& t : triples_) {
    auto s = intern_node(Term(t.subject));
    auto o = intern_node(t.object);
    rows.push_back(Row{s, store.relation_index_.at(t.relation), o});
  }
  for (const auto& [id, label] : labels_) intern_node(Term(id));
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

  const std::size_t n = store.nodes_.size();
  store.subjects_.reserve(rows.size());
  store.relations_.reserve(rows.size());
  store.objects_.reserve(rows.size());
  for (const auto& r : rows) {
    store.subjects_.push_back(r.s);
    store.relations_.push_back(r.r);
    store.objects_.push_back(r.o);
  }

  store.out_offsets_.assign(n + 1, 0);
  store.in_offsets_.assign(n + 1, 0);
  for (const auto& r : rows) {
    ++store.out_offsets_[static_cast<std::size_t>(r.s) + 1];
    ++store.in_offsets_[static_cast<std::size_t>(r.o) + 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    store.out_offsets_[i + 1] += store.out_offsets_[i];
    store.in_offsets_[i + 1] += store.in_offsets_[i];
  }
  store.out_edges_.resize(rows.size());
  store.in_edges_.resize(rows.size());
  {
    auto out_fill = store.out_offsets_;
    auto in_fill = store.in_offsets_;
    for (const auto& r : rows) {
      store.out_edges_[out_fill[static_cast<std::size_t>(r.s)]++] = Edge{r.r, r.o};
      store.in_edges_[in_fill[static_cast<std::size_t>(r.o)]++] = Edge{r.r, r.s};
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::sort(store.in_edges_.begin() + store.in_offsets_[i], store.in_edges_.begin() + store.in_offsets_[i + 1]);
    }
  }

  store.by_relation_.assign(store.relation_names_.size(), {});
  for (const auto& r : rows) store.by_relation_[static_cast<std::size_t>(r.r)].emplace_back(r.s, r.o);

  if (auto type = store.find_relation(options_.type_relation)) {
    for (auto [s, o] : store.by_relation_[static_cast<std::size_t>(*type)]) {
      store.class_members_[store.node_text(o)].push_back(s);
    }
    for (auto& [name, members] : store.class_members_) std::sort(members.begin(), members.end());
  }

  for (auto& [name, item] : schema_) {
    if (item.label.empty()) item.label = default_schema_label(item.name);
    store.catalog_.push_back(item);
  }
  std::sort(store.catalog_.begin(), store.catalog_.end(), [](const SchemaItem& a, const SchemaItem& b) {
    return std::tie(a.kind, a.name) < std::tie(b.kind, b.name);
  });
  for (std::size_t i = 0; i < store.catalog_.size(); ++i) store.catalog_index_.emplace(store.catalog_[i].name, i);

  for (auto& row : aliases_) {
    auto key = fold_alias(row.alias);
    if (key.empty()) continue;
    auto& hits = store.aliases_[key];
    auto existing = std::find_if(hits.begin(), hits.end(), [&](const AliasHit& h) { return h.entity == row.entity; });
    if (existing != hits.end()) {
      existing->popularity = std::max(existing->popularity, row.popularity);
    } else {
      hits.push_back(AliasHit{row.entity, row.popularity});
    }
    auto& meta = store.entity_meta_[row.entity];
    if (std::find(meta.aliases.begin(), meta.aliases.end(), key) == meta.aliases.end()) meta.aliases.push_back(key);
    meta.popularity = std::max(meta.popularity, row.popularity);
    store.max_alias_tokens_ = std::max(store.max_alias_tokens_, tokenize_text(key).size());
  }
  for (auto& [alias, hits] : store.aliases_) {
    std::sort(hits.begin(), hits.end(), [](const AliasHit& a, const AliasHit& b) {
      if (a.popularity != b.popularity) return a.popularity > b.popularity;
      return a.entity < b.entity;
    });
  }
  for (auto& [id, meta] : store.entity_meta_) std::sort(meta.aliases.begin(), meta.aliases.end());
  for (const auto& [id, label] : labels_) store.entity_meta_[id].label = label;
  for (auto& [id, meta] : store.entity_meta_) {
    if (!meta.label.empty()) continue;
    // Fall back to the entity's most popular alias.
    const std::string* best = nullptr;
    double best_pop = -1;
    for (const auto& alias : meta.aliases) {
      for (const auto& hit : store.aliases_.at(alias)) {
        if (hit.entity == id && hit.popularity > best_pop) {
          best = &alias;
          best_pop = hit.popularity;
        }
      }
    }
    if (best) meta.label = *best;
  }
  return store;
}

void write_dump(const TripleStore& store, std::ostream& out) {
  out << "# kbqa store dump\n";
  out << "@option\ttype_relation\t" << store.type_relation() << '\n';
  for (const auto& item : store.catalog()) {
    if (item.kind == SchemaKind::Class) {
      out << "@class\t" << item.name << '\t' << item.label << '\n';
    } else {
      out << "@relation\t" << item.name << '\t' << item.domain_class.value_or("") << '\t'
          << item.range_class.value_or("") << '\t' << item.label << '\n';
    }
  }
  for (const auto& id : store.entity_ids()) {
    const auto* meta = store.entity_meta(id);
    if (!meta) continue;
    if (!meta->label.empty()) out << "@label\t" << id << '\t' << meta->label << '\n';
    for (const auto& alias : meta->aliases) {
      for (const auto& hit : store.lookup_alias(alias)) {
        if (hit.entity == id) out << "@alias\t" << alias << '\t' << id << '\t' << format_popularity(hit.popularity) << '\n';
      }
    }
  }
  for (const auto& t : store.triples()) {
    out << t.subject << '\t' << t.relation << '\t' << term_to_string(t.object) << '\n';
  }
}

}  // namespace kbqa
