#include "relmine/language.hpp"

#include <string>

#include "relmine/errors.hpp"

namespace relmine {

std::string_view code(Language lang) noexcept {
  switch (lang) {
    case Language::kAr: return "ar";
    case Language::kDe: return "de";
    case Language::kEn: return "en";
    case Language::kEs: return "es";
    case Language::kFr: return "fr";
    case Language::kId: return "id";
    case Language::kIt: return "it";
    case Language::kJa: return "ja";
    case Language::kKo: return "ko";
    case Language::kPl: return "pl";
    case Language::kPt: return "pt";
    case Language::kTh: return "th";
    case Language::kVi: return "vi";
  }
  return "??";
}

std::optional<Language> parse_language(std::string_view c) noexcept {
  for (Language lang : kAllLanguages) {
    if (code(lang) == c) return lang;
  }
  return std::nullopt;
}

Language language_from_code(std::string_view c) {
  if (auto lang = parse_language(c)) return *lang;
  throw ValidationError("unknown language code '" + std::string(c) + "'");
}

}  // namespace relmine
