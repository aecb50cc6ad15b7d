#pragma once

#include <string>
#include <string_view>

// Unicode text helpers shared by every module. All inputs and outputs are
// UTF-8; invalid sequences are replaced with U+FFFD by the normalizing
// functions and rejected by is_valid_utf8.
namespace relmine::text {

bool is_valid_utf8(std::string_view s) noexcept;

/// Strip leading and trailing Unicode White_Space.
std::string_view trim(std::string_view s);

/// Canonical comparison form: NFC, simple (locale-free) case fold, trim,
/// and every internal whitespace run collapsed to one U+0020. Idempotent.
std::string normalize(std::string_view s);

enum class NumericRule {
  /// Whitespace and punctuation are ignored; the rest must be decimal digits.
  kLenient,
  /// Every character of the trimmed text must be a decimal digit.
  kStrict,
};

/// True when the text carries no lexical content beyond decimal digits
/// (Unicode general category Nd). Empty or all-punctuation text is not
/// numeric.
bool is_purely_numeric(std::string_view s, NumericRule rule = NumericRule::kLenient);

}  // namespace relmine::text
