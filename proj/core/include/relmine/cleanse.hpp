#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "relmine/records.hpp"
#include "relmine/text.hpp"

namespace relmine {

/// Records sharing one canonical key but carrying both labels; every member
/// is dropped.
struct ConflictGroup {
  CanonicalKey key;
  std::vector<std::size_t> indices;  // positions in the input, ascending
};

template <typename Record>
struct ConflictResult {
  std::vector<Record> kept;
  std::vector<ConflictGroup> removed_groups;  // ordered by first member
};

ConflictResult<QCRecord> remove_conflicts(std::span<const QCRecord> records);
ConflictResult<QIRecord> remove_conflicts(std::span<const QIRecord> records);

/// Keeps the first record of every (canonical key, label); origin is not
/// part of the identity.
std::vector<QCRecord> dedup(std::span<const QCRecord> records);
std::vector<QIRecord> dedup(std::span<const QIRecord> records);

/// Normalized queries exempt from numeric filtering.
using Allowlist = std::unordered_set<std::string>;

/// Newline-delimited UTF-8; each non-blank line is normalized on load.
Allowlist load_allowlist(const std::filesystem::path& path);

template <typename Record>
struct NumericFilterResult {
  std::vector<Record> kept;
  std::vector<Record> removed;
  std::size_t allowlisted_kept = 0;
};

NumericFilterResult<QCRecord> filter_numeric(std::span<const QCRecord> records, const Allowlist& allowlist,
                                             text::NumericRule rule = text::NumericRule::kLenient);
NumericFilterResult<QIRecord> filter_numeric(std::span<const QIRecord> records, const Allowlist& allowlist,
                                             text::NumericRule rule = text::NumericRule::kLenient);

struct CleanseReport {
  std::size_t input = 0;
  std::size_t conflicts_removed = 0;
  std::size_t duplicates_removed = 0;
  std::size_t numeric_removed = 0;
  std::size_t allowlisted_kept = 0;
  std::size_t kept = 0;

  bool reconciles() const noexcept {
    return kept + conflicts_removed + duplicates_removed + numeric_removed == input;
  }
  nlohmann::json to_json() const;
};

struct CleanseOptions {
  bool remove_conflicts = true;
  bool dedup = true;
  bool filter_numeric = true;
  text::NumericRule numeric_rule = text::NumericRule::kLenient;
  Allowlist allowlist;
};

template <typename Record>
struct CleanseResult {
  std::vector<Record> records;
  CleanseReport report;
  std::vector<ConflictGroup> conflict_groups;
};

/// Conflicts, then duplicates, then numeric queries.
CleanseResult<QCRecord> cleanse(std::span<const QCRecord> records, const CleanseOptions& options);
CleanseResult<QIRecord> cleanse(std::span<const QIRecord> records, const CleanseOptions& options);

struct LabelCounts {
  std::uint64_t positives = 0;
  std::uint64_t negatives = 0;

  std::uint64_t total() const noexcept { return positives + negatives; }
  LabelCounts& operator+=(const LabelCounts& o) noexcept {
    positives += o.positives;
    negatives += o.negatives;
    return *this;
  }
  friend bool operator==(const LabelCounts&, const LabelCounts&) = default;
};

/// Per-language label counts. Languages with no records are absent.
class LabelStats {
 public:
  void add(Language lang, Label label, std::uint64_t count = 1);
  LabelStats& operator+=(const LabelStats& other);

  const std::map<Language, LabelCounts>& per_language() const noexcept { return per_language_; }
  LabelCounts of(Language lang) const;
  LabelCounts totals() const;

  /// {"languages": {"en": {"negatives", "positives", "total"}, ...}, "totals": {...}}
  nlohmann::json to_json() const;
  /// "language,positives,negatives,total" header, one row per language.
  std::string to_csv() const;

  friend bool operator==(const LabelStats&, const LabelStats&) = default;

 private:
  std::map<Language, LabelCounts> per_language_;
};

LabelStats language_stats(std::span<const QCRecord> records);
LabelStats language_stats(std::span<const QIRecord> records);

}  // namespace relmine
