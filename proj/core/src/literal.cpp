#include "kbqa/literal.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <system_error>

#include "kbqa/error.hpp"

namespace kbqa {
namespace {

enum class TagFamily { Float, Integer, DateTime, String, Unknown };

std::string_view local_tag(std::string_view tag) {
  auto cut = tag.find_last_of(":#/");
  return cut == std::string_view::npos ? tag : tag.substr(cut + 1);
}

TagFamily classify_tag(std::string_view tag) {
  static constexpr std::array<std::string_view, 3> floats{"float", "double", "decimal"};
  static constexpr std::array<std::string_view, 11> integers{
      "integer", "int", "long", "short", "byte", "nonNegativeInteger", "positiveInteger",
      "negativeInteger", "nonPositiveInteger", "unsignedInt", "unsignedLong"};
  static constexpr std::array<std::string_view, 5> datetimes{"dateTime", "date", "gYear",
                                                             "gYearMonth", "time"};
  auto local = local_tag(tag);
  for (auto t : floats)
    if (local == t) return TagFamily::Float;
  for (auto t : integers)
    if (local == t) return TagFamily::Integer;
  for (auto t : datetimes)
    if (local == t) return TagFamily::DateTime;
  if (local == "string") return TagFamily::String;
  return TagFamily::Unknown;
}

std::optional<double> parse_double(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  char first = text.front();
  if (!(std::isdigit(static_cast<unsigned char>(first)) || first == '-' || first == '.')) {
    return std::nullopt;
  }
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<std::int64_t> parse_int(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

bool plausible_datetime(std::string_view text) {
  if (text.empty()) return false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '"') return false;
  }
  return std::isdigit(static_cast<unsigned char>(text.front())) || text.front() == '-';
}

std::string quote(std::string_view raw) {
  std::string out = "\"";
  for (char c : raw) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

// Reads a quoted string starting at text[0] == '"'. Returns the unescaped
// value and the index one past the closing quote.
std::pair<std::string, std::size_t> unquote(std::string_view text) {
  std::string value;
  for (std::size_t i = 1; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\\') {
      if (++i >= text.size()) break;
      switch (text[i]) {
        case 'n': value += '\n'; break;
        case 't': value += '\t'; break;
        default: value += text[i];
      }
    } else if (c == '"') {
      return {value, i + 1};
    } else {
      value += c;
    }
  }
  throw ParseError("unterminated string literal", text.size());
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  std::string out(buf.data(), ptr);
  if (auto pos = out.find("e+"); pos != std::string::npos) out.erase(pos + 1, 1);
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

LiteralValue LiteralValue::from_double(double value, std::optional<std::string> tag) {
  if (!std::isfinite(value)) throw TypeError("non-finite numeric literal");
  return LiteralValue(LiteralKind::Float, value, std::move(tag));
}

LiteralValue LiteralValue::from_integer(std::int64_t value, std::optional<std::string> tag) {
  return LiteralValue(LiteralKind::Integer, value, tag ? std::move(tag) : std::string("integer"));
}

LiteralValue LiteralValue::from_string(std::string value, std::optional<std::string> tag) {
  return LiteralValue(LiteralKind::String, std::move(value), std::move(tag));
}

LiteralValue LiteralValue::from_datetime(std::string value, std::optional<std::string> tag) {
  if (!plausible_datetime(value)) throw TypeError("malformed datetime literal '" + value + "'");
  return LiteralValue(LiteralKind::DateTime, std::move(value),
                      tag ? std::move(tag) : std::string("dateTime"));
}

LiteralValue LiteralValue::from_lexical(std::string_view value, std::optional<std::string_view> tag) {
  std::optional<std::string> tag_copy;
  if (tag) tag_copy = std::string(*tag);
  auto family = tag ? classify_tag(*tag) : TagFamily::Unknown;
  auto mismatch = [&](const char* what) {
    return TypeError("literal '" + std::string(value) + "' is not a valid " + what + " (tag '" +
                     std::string(tag.value_or("")) + "')");
  };
  switch (family) {
    case TagFamily::Float: {
      auto d = parse_double(value);
      if (!d) throw mismatch("float");
      return from_double(*d, tag_copy);
    }
    case TagFamily::Integer: {
      auto i = parse_int(value);
      if (!i) throw mismatch("integer");
      return from_integer(*i, tag_copy);
    }
    case TagFamily::DateTime:
      if (!plausible_datetime(value)) throw mismatch("datetime");
      return from_datetime(std::string(value), tag_copy);
    case TagFamily::String:
      return from_string(std::string(value), tag_copy);
    case TagFamily::Unknown:
      break;
  }
  if (auto i = parse_int(value); i && tag) return from_integer(*i, tag_copy);
  if (auto d = parse_double(value)) return from_double(*d, tag_copy);
  return from_string(std::string(value), tag_copy);
}

std::optional<LiteralValue> LiteralValue::try_parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text.front() == '"') {
    auto [value, end] = unquote(text);
    auto rest = text.substr(end);
    if (rest.empty()) return from_string(std::move(value));
    if (rest.substr(0, 2) != "^^" || rest.size() == 2) {
      throw ParseError("expected ^^tag after string literal", end);
    }
    return from_lexical(value, rest.substr(2));
  }
  if (auto marker = text.find("^^"); marker != std::string_view::npos) {
    auto value = text.substr(0, marker);
    auto tag = text.substr(marker + 2);
    if (value.empty() || tag.empty()) throw ParseError("malformed typed literal '" + std::string(text) + "'", 0);
    return from_lexical(value, tag);
  }
  if (auto d = parse_double(text)) return from_double(*d);
  return std::nullopt;
}

LiteralValue LiteralValue::parse(std::string_view text) {
  auto lit = try_parse(text);
  if (!lit) throw ParseError("not a literal: '" + std::string(text) + "'", 0);
  return *lit;
}

double LiteralValue::as_double() const {
  if (kind_ == LiteralKind::Float) return std::get<double>(payload_);
  if (kind_ == LiteralKind::Integer) return static_cast<double>(std::get<std::int64_t>(payload_));
  throw TypeError("literal " + to_string() + " is not numeric");
}

std::string LiteralValue::lexical() const {
  switch (kind_) {
    case LiteralKind::Float: return format_double(std::get<double>(payload_));
    case LiteralKind::Integer: return std::to_string(std::get<std::int64_t>(payload_));
    default: return std::get<std::string>(payload_);
  }
}

std::string LiteralValue::to_string() const {
  std::string out = kind_ == LiteralKind::String ? quote(std::get<std::string>(payload_)) : lexical();
  if (tag_) out += "^^" + *tag_;
  return out;
}

std::string LiteralValue::value_key() const {
  switch (kind_) {
    case LiteralKind::Float:
    case LiteralKind::Integer: return "N" + format_double(as_double());
    case LiteralKind::DateTime: return "D" + std::get<std::string>(payload_);
    case LiteralKind::String: return "S" + std::get<std::string>(payload_);
  }
  return {};
}

bool operator==(const LiteralValue& a, const LiteralValue& b) { return (a <=> b) == 0; }

std::strong_ordering operator<=>(const LiteralValue& a, const LiteralValue& b) {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  if (a.kind_ == LiteralKind::Float) {
    double x = std::get<double>(a.payload_), y = std::get<double>(b.payload_);
    if (x < y) return std::strong_ordering::less;
    if (x > y) return std::strong_ordering::greater;
  } else if (a.kind_ == LiteralKind::Integer) {
    if (auto c = std::get<std::int64_t>(a.payload_) <=> std::get<std::int64_t>(b.payload_); c != 0) return c;
  } else {
    if (auto c = std::get<std::string>(a.payload_) <=> std::get<std::string>(b.payload_); c != 0) return c;
  }
  return a.tag_ <=> b.tag_;
}

std::optional<std::partial_ordering> compare_values(const LiteralValue& a, const LiteralValue& b) {
  if (a.is_numeric() && b.is_numeric()) return a.as_double() <=> b.as_double();
  if (a.kind() == LiteralKind::DateTime && b.kind() == LiteralKind::DateTime) {
    auto c = a.lexical() <=> b.lexical();
    return c == 0 ? std::partial_ordering::equivalent
                  : (c < 0 ? std::partial_ordering::less : std::partial_ordering::greater);
  }
  return std::nullopt;
}

}  // namespace kbqa
