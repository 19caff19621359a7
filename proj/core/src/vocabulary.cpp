#include "kbqa/vocabulary.hpp"

#include <algorithm>

#include "kbqa/error.hpp"
#include "kbqa/text.hpp"

namespace kbqa {
namespace {

bool word_char(char c) {
  return !(c == '(' || c == ')' || c == '"' || c == ' ' || c == '\t' || c == '\n' || c == '\r');
}

bool glues_both(const TokenEntry& t) {
  return t.kind == TokenKind::Punct && (t.text == "." || t.text == "_" || t.text == "^^");
}

}  // namespace

Vocabulary::Vocabulary() {
  for (const char* s : {"<s>", "</s>", "<unk>", "(", ")", "<entities>", "<elfs>", "<schema>", ",", ";"})
    add(TokenKind::Special, s);
  for (const char* s : {"AND", "JOIN", "R", "COUNT", "ARGMIN", "ARGMAX", "lt", "le", "gt", "ge"})
    add(TokenKind::Operator, s);
  for (const char* s : {".", "_", "^^", "-", "e"}) add(TokenKind::Punct, s);
  for (char d = '0'; d <= '9'; ++d) add(TokenKind::Digit, std::string(1, d));
  add(TokenKind::Tag, "float");
  add(TokenKind::Tag, "integer");
}

TokenId Vocabulary::add(TokenKind kind, std::string_view text) {
  std::pair<TokenKind, std::string> key{kind, std::string(text)};
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  if (text.empty()) throw TokenizeError("empty token");
  auto id = static_cast<TokenId>(entries_.size());
  entries_.push_back(TokenEntry{kind, key.second});
  index_.emplace(std::move(key), id);
  if (kind == TokenKind::Tag) {
    auto probe = [&](std::string_view lexical) {
      try {
        return LiteralValue::from_lexical(lexical, text).is_numeric();
      } catch (const TypeError&) {
        return false;
      }
    };
    if (probe("1")) numeric_tags_.push_back(id);
    if (probe("1.5")) fraction_tags_.push_back(id);
  }
  return id;
}

std::optional<TokenId> Vocabulary::find(TokenKind kind, std::string_view text) const {
  auto it = index_.find({kind, std::string(text)});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Vocabulary::is_numeric_tag(TokenId id) const {
  return std::find(numeric_tags_.begin(), numeric_tags_.end(), id) != numeric_tags_.end();
}

bool Vocabulary::tag_accepts_fraction(TokenId id) const {
  return std::find(fraction_tags_.begin(), fraction_tags_.end(), id) != fraction_tags_.end();
}

std::vector<std::string> Vocabulary::schema_pieces(std::string_view name) {
  std::vector<std::string> out;
  std::string word;
  auto flush = [&] {
    if (word.empty()) throw TokenizeError("schema name '" + std::string(name) + "' has an empty segment");
    out.push_back(std::move(word));
    word.clear();
  };
  for (char c : name) {
    if (c == '.' || c == '_') {
      flush();
      out.emplace_back(1, c);
    } else if (!word_char(c)) {
      throw TokenizeError("schema name '" + std::string(name) + "' contains an unsupported character");
    } else {
      word += c;
    }
  }
  flush();
  return out;
}

void Vocabulary::add_schema_name(std::string_view name) {
  for (const auto& piece : schema_pieces(name))
    if (piece != "." && piece != "_") add(TokenKind::Word, piece);
}

void Vocabulary::add_words(std::string_view text) {
  for (const auto& w : tokenize_text(text)) add(TokenKind::Word, w);
}

void Vocabulary::add_form_symbols(const LogicalForm& form) {
  auto symbols = collect_symbols(form);
  for (const auto& c : symbols.classes) add_schema_name(c);
  for (const auto& r : symbols.relations) add_schema_name(r);
  for (const auto& e : symbols.entities) {
    if (e.empty() || !std::all_of(e.begin(), e.end(), word_char))
      throw TokenizeError("entity id '" + e + "' cannot be tokenized");
    add(TokenKind::Entity, e);
  }
  for (const auto& l : symbols.literals)
    if (l.tag()) add(TokenKind::Tag, *l.tag());
}

Vocabulary Vocabulary::for_store(const TripleStore& store) {
  Vocabulary v;
  for (const auto& item : store.catalog()) v.add_schema_name(item.name);
  for (const auto& id : store.entity_ids()) {
    if (id.empty() || !std::all_of(id.begin(), id.end(), word_char))
      throw TokenizeError("entity id '" + id + "' cannot be tokenized");
    v.add(TokenKind::Entity, id);
  }
  for (std::size_t i = 0; i < store.node_count(); ++i) {
    const auto& term = store.node(static_cast<NodeId>(i));
    if (const auto* lit = std::get_if<LiteralValue>(&term); lit && lit->is_numeric() && lit->tag())
      v.add(TokenKind::Tag, *lit->tag());
  }
  return v;
}

std::vector<TokenId> Vocabulary::encode_schema_name(std::string_view name) const {
  std::vector<TokenId> out;
  for (const auto& piece : schema_pieces(name)) {
    std::optional<TokenId> id;
    if (piece == ".") id = kDot;
    else if (piece == "_") id = kUnderscore;
    else id = find(TokenKind::Word, piece);
    if (!id) throw TokenizeError("schema name '" + std::string(name) + "': unknown word '" + piece + "'");
    out.push_back(*id);
  }
  return out;
}

TokenId Vocabulary::encode_entity(std::string_view id) const {
  auto t = find(TokenKind::Entity, id);
  if (!t) throw TokenizeError("unknown entity id '" + std::string(id) + "'");
  return *t;
}

std::vector<TokenId> Vocabulary::encode_literal(const LiteralValue& value) const {
  if (!value.is_numeric()) throw TokenizeError("only numeric literals can be tokenized: " + value.to_string());
  std::vector<TokenId> out;
  for (char c : value.lexical()) {
    if (c >= '0' && c <= '9') out.push_back(kDigit0 + static_cast<TokenId>(c - '0'));
    else if (c == '-') out.push_back(kMinus);
    else if (c == '.') out.push_back(kDot);
    else if (c == 'e' || c == 'E') out.push_back(kExponent);
    else throw TokenizeError("literal '" + value.to_string() + "' contains an unsupported character");
  }
  if (value.tag()) {
    auto tag = find(TokenKind::Tag, *value.tag());
    if (!tag) throw TokenizeError("unknown literal tag '" + *value.tag() + "'");
    out.push_back(kTypeMarker);
    out.push_back(*tag);
  }
  return out;
}

void Vocabulary::encode_into(const LogicalForm& form, std::vector<TokenId>& out) const {
  auto append = [&](const std::vector<TokenId>& ids) { out.insert(out.end(), ids.begin(), ids.end()); };
  switch (form.kind()) {
    case ExprKind::Entity: out.push_back(encode_entity(form.symbol())); return;
    case ExprKind::Class: append(encode_schema_name(form.symbol())); return;
    case ExprKind::Literal: append(encode_literal(form.literal_value())); return;
    case ExprKind::And:
      out.insert(out.end(), {kOpen, kAnd});
      encode_into(form.child(0), out);
      encode_into(form.child(1), out);
      break;
    case ExprKind::Join:
      out.insert(out.end(), {kOpen, kJoin});
      if (form.reversed()) out.insert(out.end(), {kOpen, kReverse});
      append(encode_schema_name(form.symbol()));
      if (form.reversed()) out.push_back(kClose);
      encode_into(form.child(0), out);
      break;
    case ExprKind::Count:
      out.insert(out.end(), {kOpen, kCount});
      encode_into(form.child(0), out);
      break;
    case ExprKind::ArgMin:
    case ExprKind::ArgMax:
      out.insert(out.end(), {kOpen, form.kind() == ExprKind::ArgMin ? kArgMin : kArgMax});
      encode_into(form.child(0), out);
      append(encode_schema_name(form.symbol()));
      break;
    case ExprKind::Compare:
      out.insert(out.end(), {kOpen, static_cast<TokenId>(kLt + static_cast<TokenId>(form.op()))});
      append(encode_schema_name(form.symbol()));
      append(encode_literal(form.literal_value()));
      break;
  }
  out.push_back(kClose);
}

std::vector<TokenId> Vocabulary::encode_form(const LogicalForm& form) const {
  std::vector<TokenId> out;
  encode_into(form, out);
  return out;
}

std::vector<TokenId> Vocabulary::encode_text(std::string_view text) const {
  std::vector<TokenId> out;
  for (const auto& w : tokenize_text(text)) out.push_back(find(TokenKind::Word, w).value_or(kUnknown));
  return out;
}

std::string Vocabulary::detokenize(std::span<const TokenId> tokens) const {
  std::string out;
  const TokenEntry* prev = nullptr;
  for (TokenId id : tokens) {
    if (id == kBegin || id == kEnd) continue;
    const auto& cur = entry(id);
    if (prev) {
      bool glue = (prev->kind == TokenKind::Special && prev->text == "(") ||
                  (cur.kind == TokenKind::Special && cur.text == ")") || glues_both(*prev) || glues_both(cur) ||
                  (prev->kind == TokenKind::Punct && (prev->text == "-" || prev->text == "e")) ||
                  (cur.kind == TokenKind::Punct && cur.text == "e") ||
                  (prev->kind == TokenKind::Digit && cur.kind == TokenKind::Digit);
      if (!glue) out += ' ';
    }
    out += cur.text;
    prev = &cur;
  }
  return out;
}

}  // namespace kbqa
