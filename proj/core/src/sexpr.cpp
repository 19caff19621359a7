#include "kbqa/sexpr.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "kbqa/error.hpp"
#include "kbqa/kb_store.hpp"

namespace kbqa {

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Lt: return "lt";
    case CompareOp::Le: return "le";
    case CompareOp::Gt: return "gt";
    case CompareOp::Ge: return "ge";
  }
  return "?";
}

std::optional<CompareOp> compare_op_from(std::string_view head) {
  if (head == "lt") return CompareOp::Lt;
  if (head == "le") return CompareOp::Le;
  if (head == "gt") return CompareOp::Gt;
  if (head == "ge") return CompareOp::Ge;
  return std::nullopt;
}

std::string_view to_string(FunctionClass fc) {
  switch (fc) {
    case FunctionClass::None: return "none";
    case FunctionClass::Count: return "count";
    case FunctionClass::Comparative: return "comparative";
    case FunctionClass::Superlative: return "superlative";
  }
  return "?";
}

bool looks_like_class(std::string_view symbol) {
  if (symbol.find('.') == std::string_view::npos) return false;
  bool machine_id = symbol.size() >= 3 && symbol[1] == '.' && std::islower(static_cast<unsigned char>(symbol[0])) &&
                    std::all_of(symbol.begin() + 2, symbol.end(), [](char c) {
                      return std::isdigit(static_cast<unsigned char>(c)) ||
                             std::islower(static_cast<unsigned char>(c)) || c == '_';
                    });
  return !machine_id;
}

// ---------------------------------------------------------------------------
// Construction

namespace {
void require_symbol(const std::string& s, const char* what) {
  if (s.empty()) throw TypeError(std::string("empty ") + what);
}
void require_set(const LogicalForm& f, const char* where) {
  if (!f.is_set_valued()) throw TypeError(std::string(where) + " requires a set-valued argument");
}
}  // namespace

bool LogicalForm::is_set_valued() const noexcept {
  return kind() != ExprKind::Count && kind() != ExprKind::Literal;
}

LogicalForm LogicalForm::entity(std::string id) {
  require_symbol(id, "entity id");
  return LogicalForm(std::make_shared<const Node>(Node{ExprKind::Entity, std::move(id), false, CompareOp::Lt, {}, {}}));
}

LogicalForm LogicalForm::literal(LiteralValue value) {
  return LogicalForm(std::make_shared<const Node>(Node{ExprKind::Literal, {}, false, CompareOp::Lt, std::move(value), {}}));
}

LogicalForm LogicalForm::class_ref(std::string name) {
  require_symbol(name, "class name");
  return LogicalForm(std::make_shared<const Node>(Node{ExprKind::Class, std::move(name), false, CompareOp::Lt, {}, {}}));
}

LogicalForm LogicalForm::conj(LogicalForm left, LogicalForm right) {
  require_set(left, "AND");
  require_set(right, "AND");
  return LogicalForm(std::make_shared<const Node>(
      Node{ExprKind::And, {}, false, CompareOp::Lt, {}, {std::move(left), std::move(right)}}));
}

LogicalForm LogicalForm::join(std::string relation, LogicalForm target, bool reversed) {
  require_symbol(relation, "relation");
  if (target.kind() == ExprKind::Count) throw TypeError("JOIN target cannot be COUNT");
  return LogicalForm(std::make_shared<const Node>(
      Node{ExprKind::Join, std::move(relation), reversed, CompareOp::Lt, {}, {std::move(target)}}));
}

LogicalForm LogicalForm::count(LogicalForm sub) {
  require_set(sub, "COUNT");
  return LogicalForm(std::make_shared<const Node>(Node{ExprKind::Count, {}, false, CompareOp::Lt, {}, {std::move(sub)}}));
}

LogicalForm LogicalForm::argmin(LogicalForm sub, std::string relation) {
  require_set(sub, "ARGMIN");
  require_symbol(relation, "relation");
  return LogicalForm(std::make_shared<const Node>(
      Node{ExprKind::ArgMin, std::move(relation), false, CompareOp::Lt, {}, {std::move(sub)}}));
}

LogicalForm LogicalForm::argmax(LogicalForm sub, std::string relation) {
  require_set(sub, "ARGMAX");
  require_symbol(relation, "relation");
  return LogicalForm(std::make_shared<const Node>(
      Node{ExprKind::ArgMax, std::move(relation), false, CompareOp::Lt, {}, {std::move(sub)}}));
}

LogicalForm LogicalForm::compare(CompareOp op, std::string relation, LiteralValue value) {
  require_symbol(relation, "relation");
  if (!value.is_numeric() && value.kind() != LiteralKind::DateTime)
    throw TypeError("comparison literal " + value.to_string() + " is not numeric or datetime");
  return LogicalForm(std::make_shared<const Node>(
      Node{ExprKind::Compare, std::move(relation), false, op, std::move(value), {}}));
}

bool operator==(const LogicalForm& a, const LogicalForm& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.symbol == y.symbol && x.reversed == y.reversed && x.op == y.op &&
         x.literal == y.literal && x.children == y.children;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
  enum class Kind { Open, Close, Atom, End } kind;
  std::string_view text;
  std::size_t offset;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ >= text_.size()) return {Token::Kind::End, {}, pos_};
    std::size_t start = pos_;
    char c = text_[pos_];
    if (c == '(') return ++pos_, Token{Token::Kind::Open, text_.substr(start, 1), start};
    if (c == ')') return ++pos_, Token{Token::Kind::Close, text_.substr(start, 1), start};
    if (c == '"') {
      ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\') ++pos_;
        ++pos_;
      }
      if (pos_ >= text_.size()) throw ParseError("unterminated string literal", start);
      ++pos_;
    }
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')') {
      ++pos_;
    }
    return {Token::Kind::Atom, text_.substr(start, pos_ - start), start};
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { advance(); }

  LogicalForm parse_root() {
    auto form = parse_expr(Position::Root);
    if (current_.kind != Token::Kind::End) throw ParseError("trailing input after expression", current_.offset);
    return form;
  }

 private:
  enum class Position { Root, Inner, JoinTarget };

  void advance() { current_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, current_.offset); }

  void expect_close(std::string_view head) {
    if (current_.kind == Token::Kind::Close) return advance();
    if (current_.kind == Token::Kind::End) fail("unbalanced parentheses: missing ')' for " + std::string(head));
    fail("wrong arity: too many arguments to " + std::string(head));
  }

  std::string expect_relation(std::string_view head) {
    if (current_.kind == Token::Kind::End) fail("unexpected end of input in " + std::string(head));
    if (current_.kind == Token::Kind::Close) fail("wrong arity: missing relation in " + std::string(head));
    if (current_.kind != Token::Kind::Atom) fail("expected a relation name in " + std::string(head));
    if (LiteralValue::try_parse(current_.text)) fail("expected a relation name, found literal");
    std::string name(current_.text);
    advance();
    return name;
  }

  LogicalForm parse_expr(Position where) {
    switch (current_.kind) {
      case Token::Kind::End: fail("unexpected end of input");
      case Token::Kind::Close: fail("wrong arity: missing argument");
      case Token::Kind::Atom: return parse_atom(where);
      case Token::Kind::Open: break;
    }
    auto open_offset = current_.offset;
    advance();
    if (current_.kind != Token::Kind::Atom) fail("expected an operator after '('");
    std::string head(current_.text);
    auto head_offset = current_.offset;
    advance();
    try {
      if (head == "AND") {
        auto left = parse_expr(Position::Inner);
        auto right = parse_expr(Position::Inner);
        expect_close(head);
        return LogicalForm::conj(std::move(left), std::move(right));
      }
      if (head == "JOIN") {
        bool reversed = false;
        std::string relation;
        if (current_.kind == Token::Kind::Open) {
          advance();
          if (current_.kind != Token::Kind::Atom || current_.text != "R") fail("expected (R relation)");
          advance();
          relation = expect_relation("R");
          expect_close("R");
          reversed = true;
        } else {
          relation = expect_relation(head);
        }
        auto target = parse_expr(Position::JoinTarget);
        expect_close(head);
        return LogicalForm::join(std::move(relation), std::move(target), reversed);
      }
      if (head == "COUNT") {
        if (where != Position::Root) throw ParseError("COUNT is only allowed at the root", head_offset);
        auto sub = parse_expr(Position::Inner);
        expect_close(head);
        return LogicalForm::count(std::move(sub));
      }
      if (head == "ARGMIN" || head == "ARGMAX") {
        auto sub = parse_expr(Position::Inner);
        auto relation = expect_relation(head);
        expect_close(head);
        return head == "ARGMIN" ? LogicalForm::argmin(std::move(sub), std::move(relation))
                                : LogicalForm::argmax(std::move(sub), std::move(relation));
      }
      if (auto op = compare_op_from(head)) {
        auto relation = expect_relation(head);
        if (current_.kind != Token::Kind::Atom) fail("wrong arity: missing literal in " + head);
        auto offset = current_.offset;
        std::optional<LiteralValue> value;
        try {
          value = LiteralValue::try_parse(current_.text);
        } catch (const Error& e) {
          throw ParseError(std::string("malformed literal: ") + e.what(), offset);
        }
        if (!value) throw ParseError("malformed literal '" + std::string(current_.text) + "'", offset);
        advance();
        expect_close(head);
        return LogicalForm::compare(*op, std::move(relation), std::move(*value));
      }
      if (head == "R") throw ParseError("(R ...) is only allowed as a JOIN relation", head_offset);
    } catch (const TypeError& e) {
      throw ParseError(e.what(), open_offset);
    }
    throw ParseError("unknown operator '" + head + "'", head_offset);
  }

  LogicalForm parse_atom(Position where) {
    auto text = current_.text;
    auto offset = current_.offset;
    std::optional<LiteralValue> value;
    try {
      value = LiteralValue::try_parse(text);
    } catch (const Error& e) {
      throw ParseError(std::string("malformed literal: ") + e.what(), offset);
    }
    advance();
    if (value) {
      if (where != Position::JoinTarget) throw ParseError("a literal may only appear as a JOIN target", offset);
      return LogicalForm::literal(std::move(*value));
    }
    if (text.find('^') != std::string_view::npos || text.find('"') != std::string_view::npos) {
      throw ParseError("malformed literal '" + std::string(text) + "'", offset);
    }
    return looks_like_class(text) ? LogicalForm::class_ref(std::string(text)) : LogicalForm::entity(std::string(text));
  }

  Lexer lexer_;
  Token current_{Token::Kind::End, {}, 0};
};

void print_into(const LogicalForm& f, std::string& out) {
  switch (f.kind()) {
    case ExprKind::Entity:
    case ExprKind::Class: out += f.symbol(); return;
    case ExprKind::Literal: out += f.literal_value().to_string(); return;
    case ExprKind::And:
      out += "(AND ";
      print_into(f.child(0), out);
      out += ' ';
      print_into(f.child(1), out);
      out += ')';
      return;
    case ExprKind::Join:
      out += "(JOIN ";
      if (f.reversed()) {
        out += "(R " + f.symbol() + ")";
      } else {
        out += f.symbol();
      }
      out += ' ';
      print_into(f.child(0), out);
      out += ')';
      return;
    case ExprKind::Count:
      out += "(COUNT ";
      print_into(f.child(0), out);
      out += ')';
      return;
    case ExprKind::ArgMin:
    case ExprKind::ArgMax:
      out += f.kind() == ExprKind::ArgMin ? "(ARGMIN " : "(ARGMAX ";
      print_into(f.child(0), out);
      out += ' ' + f.symbol() + ')';
      return;
    case ExprKind::Compare:
      out += '(';
      out += to_string(f.op());
      out += ' ' + f.symbol() + ' ' + f.literal_value().to_string() + ')';
      return;
  }
}

}  // namespace

LogicalForm parse_sexpr(std::string_view text) { return Parser(text).parse_root(); }

std::string print_sexpr(const LogicalForm& form) {
  std::string out;
  print_into(form, out);
  return out;
}

LogicalForm canonicalize(const LogicalForm& form) {
  switch (form.kind()) {
    case ExprKind::Entity:
    case ExprKind::Class:
    case ExprKind::Literal:
    case ExprKind::Compare: return form;
    case ExprKind::And: {
      auto a = canonicalize(form.child(0));
      auto b = canonicalize(form.child(1));
      if (print_sexpr(b) < print_sexpr(a)) std::swap(a, b);
      return LogicalForm::conj(std::move(a), std::move(b));
    }
    case ExprKind::Join: return LogicalForm::join(form.symbol(), canonicalize(form.child(0)), form.reversed());
    case ExprKind::Count: return LogicalForm::count(canonicalize(form.child(0)));
    case ExprKind::ArgMin: return LogicalForm::argmin(canonicalize(form.child(0)), form.symbol());
    case ExprKind::ArgMax: return LogicalForm::argmax(canonicalize(form.child(0)), form.symbol());
  }
  return form;
}

std::string print_canonical(const LogicalForm& form) { return print_sexpr(canonicalize(form)); }

// ---------------------------------------------------------------------------
// Analysis

SymbolSet collect_symbols(const LogicalForm& form) {
  SymbolSet out;
  std::function<void(const LogicalForm&)> walk = [&](const LogicalForm& f) {
    switch (f.kind()) {
      case ExprKind::Entity: out.entities.push_back(f.symbol()); break;
      case ExprKind::Class: out.classes.push_back(f.symbol()); break;
      case ExprKind::Literal: out.literals.push_back(f.literal_value()); break;
      case ExprKind::Compare:
        out.relations.push_back(f.symbol());
        out.literals.push_back(f.literal_value());
        break;
      case ExprKind::Join:
      case ExprKind::ArgMin:
      case ExprKind::ArgMax: out.relations.push_back(f.symbol()); break;
      default: break;
    }
    for (std::size_t i = 0; i < f.arity(); ++i) walk(f.child(i));
  };
  walk(form);
  return out;
}

std::string describe(const SchemaViolation& v) {
  switch (v.kind) {
    case SchemaViolation::Kind::UnknownClass: return "unknown class '" + v.name + "'";
    case SchemaViolation::Kind::UnknownRelation: return "unknown relation '" + v.name + "'";
    case SchemaViolation::Kind::ClassUsedAsRelation: return "class '" + v.name + "' used as a relation";
    case SchemaViolation::Kind::RelationUsedAsClass: return "relation '" + v.name + "' used as a class";
  }
  return v.name;
}

std::vector<SchemaViolation> validate_schema(const LogicalForm& form, const TripleStore& store) {
  std::vector<SchemaViolation> out;
  auto symbols = collect_symbols(form);
  for (const auto& name : symbols.classes) {
    const auto* item = store.find_schema(name);
    if (!item) {
      out.push_back({SchemaViolation::Kind::UnknownClass, name});
    } else if (item->kind != SchemaKind::Class) {
      out.push_back({SchemaViolation::Kind::RelationUsedAsClass, name});
    }
  }
  for (const auto& name : symbols.relations) {
    const auto* item = store.find_schema(name);
    if (!item) {
      out.push_back({SchemaViolation::Kind::UnknownRelation, name});
    } else if (item->kind != SchemaKind::Relation) {
      out.push_back({SchemaViolation::Kind::ClassUsedAsRelation, name});
    }
  }
  return out;
}

FunctionClass function_class(const LogicalForm& form) {
  bool superlative = false;
  bool comparative = false;
  std::function<void(const LogicalForm&)> walk = [&](const LogicalForm& f) {
    if (f.kind() == ExprKind::ArgMin || f.kind() == ExprKind::ArgMax) superlative = true;
    if (f.kind() == ExprKind::Compare) comparative = true;
    for (std::size_t i = 0; i < f.arity(); ++i) walk(f.child(i));
  };
  walk(form);
  if (superlative) return FunctionClass::Superlative;
  if (comparative) return FunctionClass::Comparative;
  if (form.kind() == ExprKind::Count) return FunctionClass::Count;
  return FunctionClass::None;
}

std::size_t relation_count(const LogicalForm& form) { return collect_symbols(form).relations.size(); }

}  // namespace kbqa
