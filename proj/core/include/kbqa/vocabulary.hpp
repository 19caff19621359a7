#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kbqa/kb_store.hpp"
#include "kbqa/sexpr.hpp"

namespace kbqa {

using TokenId = std::uint32_t;

/// Tokens are identified by (kind, text) so that, say, the entity id "e" and
/// the exponent marker "e" stay distinct.
enum class TokenKind : std::uint8_t { Special, Operator, Punct, Digit, Word, Entity, Tag };

struct TokenEntry {
  TokenKind kind;
  std::string text;
};

/// Decoder vocabulary. Ids are dense and append-only; the fixed tokens below
/// always occupy the same ids.
///
/// Logical forms tokenize as: operators and parentheses atomic, schema names
/// split into words at '.' and '_' (the separators are tokens too), entity ids
/// atomic, numeric literals one token per character ('-', digits, '.', 'e')
/// followed by optional `^^` and a tag token.
class Vocabulary {
 public:
  static constexpr TokenId kBegin = 0;
  static constexpr TokenId kEnd = 1;
  static constexpr TokenId kUnknown = 2;
  static constexpr TokenId kOpen = 3;
  static constexpr TokenId kClose = 4;
  static constexpr TokenId kEntitiesSection = 5;
  static constexpr TokenId kElfsSection = 6;
  static constexpr TokenId kSchemaSection = 7;
  static constexpr TokenId kComma = 8;
  static constexpr TokenId kSemicolon = 9;
  static constexpr TokenId kAnd = 10;
  static constexpr TokenId kJoin = 11;
  static constexpr TokenId kReverse = 12;
  static constexpr TokenId kCount = 13;
  static constexpr TokenId kArgMin = 14;
  static constexpr TokenId kArgMax = 15;
  static constexpr TokenId kLt = 16;
  static constexpr TokenId kLe = 17;
  static constexpr TokenId kGt = 18;
  static constexpr TokenId kGe = 19;
  static constexpr TokenId kDot = 20;
  static constexpr TokenId kUnderscore = 21;
  static constexpr TokenId kTypeMarker = 22;
  static constexpr TokenId kMinus = 23;
  static constexpr TokenId kExponent = 24;
  static constexpr TokenId kDigit0 = 25;  // '0'..'9' are kDigit0 + d

  Vocabulary();

  /// Base tokens plus every schema-name word, entity id, and literal tag of
  /// the store. Throws TokenizeError naming the first item that cannot be
  /// represented.
  static Vocabulary for_store(const TripleStore& store);

  TokenId add(TokenKind kind, std::string_view text);
  std::optional<TokenId> find(TokenKind kind, std::string_view text) const;
  const TokenEntry& entry(TokenId id) const { return entries_.at(id); }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Adds every word of free text (see tokenize_text).
  void add_words(std::string_view text);
  /// Adds the words, entity ids, and tags needed to encode `form`.
  void add_form_symbols(const LogicalForm& form);
  void add_schema_name(std::string_view name);

  bool is_numeric_tag(TokenId id) const;
  /// Numeric tag whose literals may carry a fractional part or exponent.
  bool tag_accepts_fraction(TokenId id) const;
  const std::vector<TokenId>& numeric_tags() const noexcept { return numeric_tags_; }

  std::vector<TokenId> encode_schema_name(std::string_view name) const;
  TokenId encode_entity(std::string_view id) const;
  /// Numeric literals only; anything else throws TokenizeError.
  std::vector<TokenId> encode_literal(const LiteralValue& value) const;
  std::vector<TokenId> encode_form(const LogicalForm& form) const;
  /// Free text: words as Word tokens, unknown words map to kUnknown.
  std::vector<TokenId> encode_text(std::string_view text) const;

  /// Inverse of encode_form for well-formed sequences; begin/end tokens are
  /// skipped.
  std::string detokenize(std::span<const TokenId> tokens) const;

  /// Splits a schema name at '.' and '_'. Throws TokenizeError for empty
  /// pieces or characters that cannot appear in a word token.
  static std::vector<std::string> schema_pieces(std::string_view name);

 private:
  void encode_into(const LogicalForm& form, std::vector<TokenId>& out) const;
  std::vector<TokenEntry> entries_;
  std::map<std::pair<TokenKind, std::string>, TokenId> index_;
  std::vector<TokenId> numeric_tags_;
  std::vector<TokenId> fraction_tags_;
};

}  // namespace kbqa
