#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kbqa {

/// Lower-cased word tokens: maximal runs of ASCII alphanumerics (or non-ASCII
/// bytes), with a '.' kept inside a number ("257.0"). Everything else, including
/// '.' and '_' inside schema names, separates tokens.
std::vector<std::string> tokenize_text(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view separator);

/// Splits on a single character, keeping empty fields.
std::vector<std::string_view> split(std::string_view text, char separator);

std::string_view trim(std::string_view text);

/// Light suffix stripping used for lexical matching ("units" -> "unit").
std::string stem(std::string_view token);

}  // namespace kbqa
