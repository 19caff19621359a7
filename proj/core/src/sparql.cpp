#include <algorithm>
#include <cctype>
#include <optional>
#include <unordered_map>
#include <variant>

#include "kbqa/error.hpp"
#include "kbqa/executor.hpp"

namespace kbqa {
namespace {

// ---------------------------------------------------------------------------
// Compilation

std::string sparql_literal(const LiteralValue& lit) {
  std::string out = "\"";
  for (char c : lit.lexical()) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  std::optional<std::string> tag = lit.tag();
  if (!tag && lit.kind() == LiteralKind::Float) tag = "float";
  if (tag) out += "^^<" + *tag + ">";
  return out;
}

std::string iri(std::string_view name) { return "<" + std::string(name) + ">"; }

struct Group {
  std::vector<std::string> lines;
  std::vector<std::string> filters;
};

class Compiler {
 public:
  explicit Compiler(std::string_view type_relation) : type_relation_(type_relation) {}

  std::string fresh() { return "?y" + std::to_string(next_var_++); }

  void emit(const LogicalForm& f, const std::string& var, Group& group) {
    switch (f.kind()) {
      case ExprKind::Entity: group.lines.push_back("VALUES " + var + " { " + iri(f.symbol()) + " }"); return;
      case ExprKind::Class:
        group.lines.push_back(var + " " + iri(type_relation_) + " " + iri(f.symbol()) + " .");
        return;
      case ExprKind::And:
        emit(f.child(0), var, group);
        emit(f.child(1), var, group);
        return;
      case ExprKind::Join: {
        const auto& target = f.child(0);
        auto rel = iri(f.symbol());
        if (target.kind() == ExprKind::Entity || target.kind() == ExprKind::Literal) {
          auto constant =
              target.kind() == ExprKind::Entity ? iri(target.symbol()) : sparql_literal(target.literal_value());
          group.lines.push_back(f.reversed() ? constant + " " + rel + " " + var + " ."
                                             : var + " " + rel + " " + constant + " .");
          return;
        }
        auto y = fresh();
        group.lines.push_back(f.reversed() ? y + " " + rel + " " + var + " ." : var + " " + rel + " " + y + " .");
        emit(target, y, group);
        return;
      }
      case ExprKind::Compare: {
        auto y = fresh();
        group.lines.push_back(var + " " + iri(f.symbol()) + " " + y + " .");
        static constexpr const char* ops[] = {"<", "<=", ">", ">="};
        group.filters.push_back("FILTER(" + y + " " + ops[static_cast<int>(f.op())] + " " +
                                sparql_literal(f.literal_value()) + ")");
        return;
      }
      case ExprKind::ArgMin:
      case ExprKind::ArgMax: {
        emit(f.child(0), var, group);
        auto value = fresh();
        group.lines.push_back(var + " " + iri(f.symbol()) + " " + value + " .");
        auto inner_value = fresh();
        auto extreme = fresh();
        auto inner_subject = fresh();
        Group inner;
        emit(f.child(0), inner_subject, inner);
        inner.lines.push_back(inner_subject + " " + iri(f.symbol()) + " " + inner_value + " .");
        std::string sub = "{ SELECT (" + std::string(f.kind() == ExprKind::ArgMin ? "MIN" : "MAX") + "(" +
                          inner_value + ") AS " + extreme + ") WHERE " + render(inner, 2) + " }";
        group.lines.push_back(sub);
        group.filters.push_back("FILTER(" + value + " = " + extreme + ")");
        return;
      }
      case ExprKind::Literal:
      case ExprKind::Count: throw TypeError("expression is not set-valued");
    }
  }

  static std::string render(const Group& g, int indent) {
    std::string pad(static_cast<std::size_t>(indent), ' ');
    std::string out = "{\n";
    for (const auto& l : g.lines) out += pad + "  " + l + "\n";
    for (const auto& l : g.filters) out += pad + "  " + l + "\n";
    return out + pad + "}";
  }

 private:
  std::string type_relation_;
  int next_var_ = 0;
};

bool has_superlative(const LogicalForm& f) {
  if (f.kind() == ExprKind::ArgMin || f.kind() == ExprKind::ArgMax) return true;
  for (std::size_t i = 0; i < f.arity(); ++i)
    if (has_superlative(f.child(i))) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Subset evaluator

struct Lexeme {
  enum class Kind { Word, Var, Iri, Literal, Punct, Op, End } kind;
  std::string text;
  std::optional<std::string> tag;
  std::size_t offset;
};

class SparqlLexer {
 public:
  explicit SparqlLexer(std::string_view text) : text_(text) {}

  Lexeme next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::size_t start = pos_;
    if (pos_ >= text_.size()) return {Lexeme::Kind::End, {}, {}, start};
    char c = text_[pos_];
    if (c == '{' || c == '}' || c == '(' || c == ')' || c == '.') {
      ++pos_;
      return {Lexeme::Kind::Punct, std::string(1, c), {}, start};
    }
    if (c == '?') {
      ++pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      return {Lexeme::Kind::Var, std::string(text_.substr(start, pos_ - start)), {}, start};
    }
    if (c == '<' || c == '>' || c == '=' || c == '!') {
      bool iri_start = c == '<' && pos_ + 1 < text_.size() && text_[pos_ + 1] != '=' &&
                       !std::isspace(static_cast<unsigned char>(text_[pos_ + 1]));
      if (iri_start) {
        auto end = text_.find('>', pos_);
        if (end == std::string_view::npos) throw ParseError("unterminated IRI", start);
        pos_ = end + 1;
        return {Lexeme::Kind::Iri, std::string(text_.substr(start + 1, end - start - 1)), {}, start};
      }
      ++pos_;
      if (pos_ < text_.size() && text_[pos_] == '=') ++pos_;
      return {Lexeme::Kind::Op, std::string(text_.substr(start, pos_ - start)), {}, start};
    }
    if (c == '"') {
      std::string value;
      ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
        value += text_[pos_++];
      }
      if (pos_ >= text_.size()) throw ParseError("unterminated literal", start);
      ++pos_;
      std::optional<std::string> tag;
      if (text_.substr(pos_, 3) == "^^<") {
        auto end = text_.find('>', pos_);
        if (end == std::string_view::npos) throw ParseError("unterminated datatype IRI", pos_);
        tag = std::string(text_.substr(pos_ + 3, end - pos_ - 3));
        pos_ = end + 1;
      }
      return {Lexeme::Kind::Literal, value, tag, start};
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      std::string word(text_.substr(start, pos_ - start));
      std::transform(word.begin(), word.end(), word.begin(), [](unsigned char ch) { return std::toupper(ch); });
      return {Lexeme::Kind::Word, word, {}, start};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

struct TermPattern {
  enum class Kind { Var, Iri, Literal } kind;
  int var = -1;
  std::string iri;
  std::optional<LiteralValue> literal;
};

struct TriplePattern {
  TermPattern subject;
  std::string predicate;
  TermPattern object;
};

struct ValuesClause {
  int var;
  std::vector<TermPattern> terms;
};

struct FilterClause {
  TermPattern left;
  std::string op;
  TermPattern right;
};

struct GroupPattern;

struct SubSelect {
  bool minimum;
  int input;
  int output;
  std::shared_ptr<GroupPattern> where;
};

struct GroupPattern {
  std::vector<std::variant<TriplePattern, ValuesClause, SubSelect>> elements;
  std::vector<FilterClause> filters;
};

struct ParsedQuery {
  bool count = false;
  int projected = -1;
  GroupPattern where;
  std::size_t var_count = 0;
};

class SparqlParser {
 public:
  explicit SparqlParser(std::string_view text) : lexer_(text) { advance(); }

  ParsedQuery parse() {
    ParsedQuery q;
    expect_word("SELECT");
    if (is_word("DISTINCT")) {
      advance();
      q.projected = expect_var();
    } else if (is_punct("(")) {
      advance();
      expect_word("COUNT");
      expect_punct("(");
      expect_word("DISTINCT");
      q.projected = expect_var();
      expect_punct(")");
      expect_word("AS");
      expect_var();
      expect_punct(")");
      q.count = true;
    } else {
      unsupported("projection");
    }
    expect_word("WHERE");
    q.where = group();
    if (current_.kind != Lexeme::Kind::End) {
      if (current_.kind == Lexeme::Kind::Word) unsupported(current_.text);
      fail("trailing input");
    }
    q.var_count = vars_.size();
    return q;
  }

 private:
  static bool known_keyword(const std::string& w) {
    return w == "SELECT" || w == "DISTINCT" || w == "WHERE" || w == "FILTER" || w == "VALUES" || w == "COUNT" ||
           w == "MIN" || w == "MAX" || w == "AS";
  }

  void advance() {
    current_ = lexer_.next();
    if (current_.kind == Lexeme::Kind::Word && !known_keyword(current_.text)) unsupported(current_.text);
  }
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, current_.offset); }
  [[noreturn]] void unsupported(const std::string& what) const {
    throw UnsupportedError("unsupported SPARQL construct: " + what);
  }
  bool is_word(std::string_view w) const { return current_.kind == Lexeme::Kind::Word && current_.text == w; }
  bool is_punct(std::string_view p) const { return current_.kind == Lexeme::Kind::Punct && current_.text == p; }
  void expect_word(std::string_view w) {
    if (!is_word(w)) fail("expected " + std::string(w));
    advance();
  }
  void expect_punct(std::string_view p) {
    if (!is_punct(p)) fail("expected '" + std::string(p) + "'");
    advance();
  }
  int var_slot(const std::string& name) {
    auto [it, inserted] = vars_.try_emplace(name, static_cast<int>(vars_.size()));
    return it->second;
  }
  int expect_var() {
    if (current_.kind != Lexeme::Kind::Var) fail("expected a variable");
    int slot = var_slot(current_.text);
    advance();
    return slot;
  }

  TermPattern term() {
    TermPattern t{};
    switch (current_.kind) {
      case Lexeme::Kind::Var: t.kind = TermPattern::Kind::Var; t.var = var_slot(current_.text); break;
      case Lexeme::Kind::Iri: t.kind = TermPattern::Kind::Iri; t.iri = current_.text; break;
      case Lexeme::Kind::Literal:
        t.kind = TermPattern::Kind::Literal;
        try {
          t.literal = LiteralValue::from_lexical(current_.text, current_.tag);
        } catch (const TypeError& e) {
          throw ParseError(e.what(), current_.offset);
        }
        break;
      default: fail("expected a term");
    }
    advance();
    return t;
  }

  GroupPattern group() {
    GroupPattern g;
    expect_punct("{");
    while (!is_punct("}")) {
      if (current_.kind == Lexeme::Kind::End) fail("unterminated group");
      if (is_word("FILTER")) {
        advance();
        expect_punct("(");
        auto left = term();
        if (current_.kind != Lexeme::Kind::Op) fail("expected a comparison operator");
        auto op = current_.text;
        if (op != "<" && op != "<=" && op != ">" && op != ">=" && op != "=") unsupported("operator " + op);
        advance();
        auto right = term();
        if (!is_punct(")")) unsupported("compound FILTER expression");
        advance();
        g.filters.push_back(FilterClause{std::move(left), op, std::move(right)});
      } else if (is_word("VALUES")) {
        advance();
        ValuesClause v{expect_var(), {}};
        expect_punct("{");
        while (!is_punct("}")) v.terms.push_back(term());
        advance();
        g.elements.emplace_back(std::move(v));
      } else if (is_punct("{")) {
        advance();
        expect_word("SELECT");
        expect_punct("(");
        bool minimum = is_word("MIN");
        if (!minimum && !is_word("MAX")) unsupported("aggregate in sub-select");
        advance();
        expect_punct("(");
        int input = expect_var();
        expect_punct(")");
        expect_word("AS");
        int output = expect_var();
        expect_punct(")");
        expect_word("WHERE");
        auto inner = std::make_shared<GroupPattern>(group());
        expect_punct("}");
        g.elements.emplace_back(SubSelect{minimum, input, output, std::move(inner)});
      } else {
        auto subject = term();
        if (current_.kind != Lexeme::Kind::Iri) unsupported("non-IRI predicate");
        std::string predicate = current_.text;
        advance();
        auto object = term();
        expect_punct(".");
        g.elements.emplace_back(TriplePattern{std::move(subject), std::move(predicate), std::move(object)});
      }
    }
    advance();
    return g;
  }

  SparqlLexer lexer_;
  Lexeme current_{Lexeme::Kind::End, {}, {}, 0};
  std::unordered_map<std::string, int> vars_;
};

constexpr std::int64_t kUnbound = -1;
using Row = std::vector<std::int64_t>;

class SubsetEvaluator {
 public:
  SubsetEvaluator(const TripleStore& store, std::size_t var_count) : store_(store), width_(var_count) {}

  std::vector<Row> run(const GroupPattern& g) {
    std::vector<Row> rows{Row(width_, kUnbound)};
    for (const auto& element : g.elements) {
      if (rows.empty()) break;
      rows = std::visit([&](const auto& e) { return apply(e, rows); }, element);
    }
    std::vector<Row> kept;
    for (auto& row : rows) {
      bool ok = std::all_of(g.filters.begin(), g.filters.end(), [&](const FilterClause& f) { return holds(f, row); });
      if (ok) kept.push_back(std::move(row));
    }
    return kept;
  }

 private:
  std::optional<NodeId> constant(const TermPattern& t) const {
    if (t.kind == TermPattern::Kind::Iri) return store_.find_entity(t.iri);
    return store_.find_node(Term(*t.literal));
  }

  std::vector<Row> apply(const TriplePattern& p, const std::vector<Row>& rows) {
    std::vector<Row> out;
    auto relation = store_.find_relation(p.predicate);
    if (!relation) return out;
    std::optional<NodeId> s_const, o_const;
    if (p.subject.kind != TermPattern::Kind::Var) {
      s_const = constant(p.subject);
      if (!s_const) return out;
    }
    if (p.object.kind != TermPattern::Kind::Var) {
      o_const = constant(p.object);
      if (!o_const) return out;
    }
    auto bound = [](const Row& row, const TermPattern& t, std::optional<NodeId> c) -> std::optional<NodeId> {
      if (c) return c;
      if (row[static_cast<std::size_t>(t.var)] == kUnbound) return std::nullopt;
      return static_cast<NodeId>(row[static_cast<std::size_t>(t.var)]);
    };
    auto emit = [&](const Row& row, NodeId s, NodeId o) {
      Row next = row;
      if (!s_const) next[static_cast<std::size_t>(p.subject.var)] = static_cast<std::int64_t>(s);
      if (!o_const) {
        auto& slot = next[static_cast<std::size_t>(p.object.var)];
        if (slot != kUnbound && slot != static_cast<std::int64_t>(o)) return;
        slot = static_cast<std::int64_t>(o);
      }
      out.push_back(std::move(next));
    };
    for (const auto& row : rows) {
      auto s = bound(row, p.subject, s_const);
      auto o = bound(row, p.object, o_const);
      if (s && o) {
        auto edges = store_.out_edges(*s, *relation);
        if (std::binary_search(edges.begin(), edges.end(), Edge{*relation, *o})) emit(row, *s, *o);
      } else if (s) {
        for (const auto& e : store_.out_edges(*s, *relation)) emit(row, *s, e.node);
      } else if (o) {
        for (const auto& e : store_.in_edges(*o, *relation)) emit(row, e.node, *o);
      } else {
        for (auto [ps, po] : store_.relation_pairs(*relation)) emit(row, ps, po);
      }
    }
    return out;
  }

  std::vector<Row> apply(const ValuesClause& v, const std::vector<Row>& rows) {
    std::vector<NodeId> nodes;
    for (const auto& t : v.terms) {
      if (t.kind == TermPattern::Kind::Var) throw UnsupportedError("variable inside VALUES");
      if (auto n = constant(t)) nodes.push_back(*n);
    }
    std::vector<Row> out;
    for (const auto& row : rows) {
      auto slot = static_cast<std::size_t>(v.var);
      for (auto n : nodes) {
        if (row[slot] == kUnbound || row[slot] == static_cast<std::int64_t>(n)) {
          Row next = row;
          next[slot] = static_cast<std::int64_t>(n);
          out.push_back(std::move(next));
        }
      }
    }
    return out;
  }

  std::vector<Row> apply(const SubSelect& s, const std::vector<Row>& rows) {
    auto inner = run(*s.where);
    std::optional<std::pair<double, NodeId>> best;
    for (const auto& row : inner) {
      auto v = row[static_cast<std::size_t>(s.input)];
      if (v == kUnbound) continue;
      auto node = static_cast<NodeId>(v);
      if (!store_.is_literal(node)) continue;
      const auto& lit = std::get<LiteralValue>(store_.node(node));
      if (!lit.is_numeric()) continue;
      double x = lit.as_double();
      if (!best || (s.minimum ? x < best->first : x > best->first)) best = {x, node};
    }
    std::vector<Row> out;
    if (!best) return out;
    for (const auto& row : rows) {
      auto slot = static_cast<std::size_t>(s.output);
      if (row[slot] != kUnbound && row[slot] != static_cast<std::int64_t>(best->second)) continue;
      Row next = row;
      next[slot] = static_cast<std::int64_t>(best->second);
      out.push_back(std::move(next));
    }
    return out;
  }

  std::optional<LiteralValue> value_of(const TermPattern& t, const Row& row) const {
    if (t.kind == TermPattern::Kind::Literal) return t.literal;
    if (t.kind == TermPattern::Kind::Iri) return std::nullopt;
    auto v = row[static_cast<std::size_t>(t.var)];
    if (v == kUnbound || !store_.is_literal(static_cast<NodeId>(v))) return std::nullopt;
    return std::get<LiteralValue>(store_.node(static_cast<NodeId>(v)));
  }

  bool holds(const FilterClause& f, const Row& row) const {
    auto a = value_of(f.left, row);
    auto b = value_of(f.right, row);
    if (!a || !b) return false;
    auto order = compare_values(*a, *b);
    if (!order) return false;
    if (f.op == "<") return *order == std::partial_ordering::less;
    if (f.op == "<=") return *order == std::partial_ordering::less || *order == std::partial_ordering::equivalent;
    if (f.op == ">") return *order == std::partial_ordering::greater;
    if (f.op == ">=") return *order == std::partial_ordering::greater || *order == std::partial_ordering::equivalent;
    return *order == std::partial_ordering::equivalent;
  }

  const TripleStore& store_;
  std::size_t width_;
};

}  // namespace

SparqlQuery compile_sparql(const LogicalForm& form, std::string_view type_relation) {
  Compiler compiler(type_relation);
  Group group;
  SparqlQuery query;
  if (form.kind() == ExprKind::Count) {
    compiler.emit(form.child(0), "?x", group);
    query.text = "SELECT (COUNT(DISTINCT ?x) AS ?count) WHERE " + Compiler::render(group, 0);
    query.shape = SparqlShape::CountAggregate;
    return query;
  }
  compiler.emit(form, "?x", group);
  query.text = "SELECT DISTINCT ?x WHERE " + Compiler::render(group, 0);
  query.shape = has_superlative(form) ? SparqlShape::SuperlativeSubquery : SparqlShape::SelectDistinct;
  return query;
}

AnswerSet evaluate_sparql_subset(std::string_view text, const TripleStore& store) {
  auto parsed = SparqlParser(text).parse();
  SubsetEvaluator evaluator(store, parsed.var_count);
  auto rows = evaluator.run(parsed.where);
  NodeSet nodes;
  for (const auto& row : rows) {
    auto v = row[static_cast<std::size_t>(parsed.projected)];
    if (v != kUnbound) nodes.push_back(static_cast<NodeId>(v));
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  if (parsed.count) return AnswerSet::number(static_cast<std::int64_t>(nodes.size()));
  return answers_from_nodes(nodes, store);
}

AnswerSet evaluate_sparql_subset(const SparqlQuery& query, const TripleStore& store) {
  return evaluate_sparql_subset(query.text, store);
}

}  // namespace kbqa
