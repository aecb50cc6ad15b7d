#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>

#include "relmine/category_path.hpp"
#include "relmine/language.hpp"

namespace relmine {

enum class Task { kQC, kQI };

std::string_view task_name(Task task) noexcept;  // "qc" / "qi"
std::optional<Task> parse_task(std::string_view name) noexcept;

enum class Label : std::uint8_t { kNegative = 0, kPositive = 1 };

inline int to_int(Label l) noexcept { return static_cast<int>(l); }

enum class Origin : std::uint8_t { kOriginal, kTranslated, kGeneratedNegative };

std::string_view origin_name(Origin origin) noexcept;
std::optional<Origin> parse_origin(std::string_view name) noexcept;

/// One labeled query/category-path example.
struct QCRecord {
  std::string query;
  Language language = Language::kEn;
  CategoryPath path;
  Label label = Label::kNegative;
  Origin origin = Origin::kOriginal;

  friend bool operator==(const QCRecord&, const QCRecord&) = default;
};

/// One labeled query/item example. The title is English for every language.
struct QIRecord {
  std::string query;
  Language language = Language::kEn;
  std::string item_id;
  std::string item_title;
  Label label = Label::kNegative;
  Origin origin = Origin::kOriginal;

  friend bool operator==(const QIRecord&, const QIRecord&) = default;
};

/// Identity of a (query, target) pair after text normalization. The target
/// is the normalized path rendering for QC and the verbatim item id for QI.
struct CanonicalKey {
  std::string norm_query;
  std::string norm_target;

  friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
  friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;
};

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& k) const noexcept {
    std::size_t h = std::hash<std::string>{}(k.norm_query);
    return h ^ (std::hash<std::string>{}(k.norm_target) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
};

using KeySet = std::unordered_set<CanonicalKey, CanonicalKeyHash>;

CanonicalKey canonical_key(const QCRecord& r);
CanonicalKey canonical_key(const QIRecord& r);
CanonicalKey canonical_key(std::string_view query, const CategoryPath& path);

/// Keys of every label-1 record.
KeySet positive_keys(std::span<const QCRecord> records);
KeySet positive_keys(std::span<const QIRecord> records);

}  // namespace relmine
