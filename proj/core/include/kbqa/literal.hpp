#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace kbqa {

enum class LiteralKind : std::uint8_t { Float, Integer, String, DateTime };

/// A typed KB literal such as `257.0^^float`.
///
/// Numeric payloads are always finite. Integers and datetimes always carry a
/// type tag (defaulting to "integer" / "dateTime") so that their printed form
/// re-parses to the same kind; floats and strings may be untagged.
class LiteralValue {
 public:
  static LiteralValue from_double(double value, std::optional<std::string> tag = std::nullopt);
  static LiteralValue from_integer(std::int64_t value, std::optional<std::string> tag = std::nullopt);
  static LiteralValue from_string(std::string value, std::optional<std::string> tag = std::nullopt);
  static LiteralValue from_datetime(std::string value, std::optional<std::string> tag = std::nullopt);

  /// Builds a literal from a lexical value and an optional datatype tag.
  /// Throws TypeError when the value does not fit the kind the tag implies.
  static LiteralValue from_lexical(std::string_view value, std::optional<std::string_view> tag);

  /// Parses the s-expression/TSV spelling: `v^^tag`, a bare number, or a
  /// double-quoted string with optional `^^tag`. Bare numbers are floats.
  static LiteralValue parse(std::string_view text);

  /// Like parse() but returns nullopt for text that is not literal-shaped
  /// (no `^^`, not quoted, not a number).
  static std::optional<LiteralValue> try_parse(std::string_view text);

  LiteralKind kind() const noexcept { return kind_; }
  bool is_numeric() const noexcept { return kind_ == LiteralKind::Float || kind_ == LiteralKind::Integer; }
  /// Numeric value, promoting integers to double. Only valid for numeric kinds.
  double as_double() const;
  std::int64_t as_integer() const { return std::get<std::int64_t>(payload_); }
  /// Lexical value without tag or quotes.
  std::string lexical() const;
  const std::optional<std::string>& tag() const noexcept { return tag_; }

  /// Canonical spelling, inverse of parse().
  std::string to_string() const;

  /// Identity used by the store: numeric kinds compare by promoted value,
  /// other kinds by lexical value; tags are ignored.
  std::string value_key() const;
  bool same_value(const LiteralValue& other) const { return value_key() == other.value_key(); }

  /// Structural comparison (kind, payload, tag).
  friend bool operator==(const LiteralValue& a, const LiteralValue& b);
  friend std::strong_ordering operator<=>(const LiteralValue& a, const LiteralValue& b);

 private:
  LiteralValue(LiteralKind kind, std::variant<double, std::int64_t, std::string> payload,
               std::optional<std::string> tag)
      : kind_(kind), payload_(std::move(payload)), tag_(std::move(tag)) {}

  LiteralKind kind_;
  std::variant<double, std::int64_t, std::string> payload_;
  std::optional<std::string> tag_;
};

/// Order used by comparatives and superlatives: numeric vs numeric (promoted
/// to double) and datetime vs datetime (lexical ISO order). Any other pairing
/// is incomparable.
std::optional<std::partial_ordering> compare_values(const LiteralValue& a, const LiteralValue& b);

/// Shortest round-tripping decimal for a finite double, always containing a
/// '.' or exponent so it reads back as a float ("257" -> "257.0").
std::string format_double(double value);

}  // namespace kbqa
