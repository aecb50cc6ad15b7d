#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace relmine {

/// Closed set of query languages seen across both tasks. Enumerators are in
/// code order so ordered containers keyed by Language iterate alphabetically.
enum class Language : std::uint8_t {
  kAr,
  kDe,
  kEn,
  kEs,
  kFr,
  kId,
  kIt,
  kJa,
  kKo,
  kPl,
  kPt,
  kTh,
  kVi,
};

inline constexpr std::array<Language, 13> kAllLanguages = {
    Language::kAr, Language::kDe, Language::kEn, Language::kEs, Language::kFr,
    Language::kId, Language::kIt, Language::kJa, Language::kKo, Language::kPl,
    Language::kPt, Language::kTh, Language::kVi,
};

/// Two-letter lowercase ISO-639-1 code.
std::string_view code(Language lang) noexcept;

/// Exact, case-sensitive lookup; anything outside the closed set is nullopt.
std::optional<Language> parse_language(std::string_view code) noexcept;

/// Like parse_language but throws ValidationError naming the bad code.
Language language_from_code(std::string_view code);

}  // namespace relmine
