#include "relmine/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <cstdint>

#include "relmine/errors.hpp"

namespace relmine::text {
namespace {

bool is_ascii(std::string_view s) noexcept {
  for (unsigned char c : s) {
    if (c >= 0x80) return false;
  }
  return true;
}

bool is_ascii_space(char c) noexcept { return c == ' ' || (c >= '\t' && c <= '\r'); }

// Decodes one code point; invalid sequences come back negative.
UChar32 next_code_point(std::string_view s, std::int32_t& i) noexcept {
  UChar32 c;
  U8_NEXT(reinterpret_cast<const std::uint8_t*>(s.data()), i, static_cast<std::int32_t>(s.size()), c);
  return c;
}

std::string collapse_ascii(std::string_view s, bool fold) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_ascii_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    if (fold && c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    out.push_back(c);
  }
  return out;
}

const icu::Normalizer2& nfc() {
  static const icu::Normalizer2* instance = [] {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) throw RuntimeFailure("ICU NFC normalizer unavailable");
    return n;
  }();
  return *instance;
}

icu::UnicodeString to_nfc(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(s, status);
  if (U_FAILURE(status)) throw RuntimeFailure("NFC normalization failed");
  return out;
}

}  // namespace

bool is_valid_utf8(std::string_view s) noexcept {
  std::int32_t i = 0;
  const auto n = static_cast<std::int32_t>(s.size());
  while (i < n) {
    if (next_code_point(s, i) < 0) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  std::int32_t begin = 0;
  const auto n = static_cast<std::int32_t>(s.size());
  while (begin < n) {
    std::int32_t i = begin;
    const UChar32 c = next_code_point(s, i);
    if (c < 0 || !u_isUWhiteSpace(c)) break;
    begin = i;
  }
  std::int32_t end = begin;
  std::int32_t i = begin;
  while (i < n) {
    const UChar32 c = next_code_point(s, i);
    if (c < 0 || !u_isUWhiteSpace(c)) end = i;
  }
  return s.substr(static_cast<std::size_t>(begin), static_cast<std::size_t>(end - begin));
}

std::string normalize(std::string_view s) {
  if (is_ascii(s)) return collapse_ascii(s, true);

  // NFC, per-code-point simple fold, NFC again: folding can leave sequences
  // that compose differently, and the second pass keeps the result stable.
  const icu::UnicodeString composed =
      to_nfc(icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<std::int32_t>(s.size()))));
  icu::UnicodeString folded;
  for (std::int32_t i = 0; i < composed.length();) {
    const UChar32 c = composed.char32At(i);
    folded.append(u_foldCase(c, U_FOLD_CASE_DEFAULT));
    i += U16_LENGTH(c);
  }
  const icu::UnicodeString recomposed = to_nfc(folded);

  icu::UnicodeString collapsed;
  bool pending_space = false;
  for (std::int32_t i = 0; i < recomposed.length();) {
    const UChar32 c = recomposed.char32At(i);
    i += U16_LENGTH(c);
    if (u_isUWhiteSpace(c)) {
      pending_space = !collapsed.isEmpty();
      continue;
    }
    if (pending_space) {
      collapsed.append(static_cast<UChar>(u' '));
      pending_space = false;
    }
    collapsed.append(c);
  }
  std::string out;
  collapsed.toUTF8String(out);
  return out;
}

bool is_purely_numeric(std::string_view s, NumericRule rule) {
  const std::string_view body = rule == NumericRule::kStrict ? trim(s) : s;
  std::size_t digits = 0;
  std::int32_t i = 0;
  const auto n = static_cast<std::int32_t>(body.size());
  while (i < n) {
    const UChar32 c = next_code_point(body, i);
    if (c < 0) return false;
    if (u_isdigit(c)) {
      ++digits;
      continue;
    }
    if (rule == NumericRule::kLenient && (u_isUWhiteSpace(c) || u_ispunct(c))) continue;
    return false;
  }
  return digits > 0;
}

}  // namespace relmine::text
