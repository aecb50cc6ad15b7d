#include "relmine/cleanse.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "relmine/errors.hpp"
#include "relmine/record_io.hpp"

namespace relmine {
namespace {

template <typename Record>
ConflictResult<Record> remove_conflicts_impl(std::span<const Record> records) {
  struct Group {
    std::size_t order;
    bool seen[2] = {false, false};
  };
  std::vector<CanonicalKey> keys;
  keys.reserve(records.size());
  std::unordered_map<CanonicalKey, Group, CanonicalKeyHash> groups;
  groups.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    keys.push_back(canonical_key(records[i]));
    auto [it, inserted] = groups.try_emplace(keys.back(), Group{groups.size()});
    it->second.seen[to_int(records[i].label)] = true;
  }

  ConflictResult<Record> result;
  std::unordered_map<CanonicalKey, std::size_t, CanonicalKeyHash> group_slot;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Group& g = groups.at(keys[i]);
    if (!(g.seen[0] && g.seen[1])) {
      result.kept.push_back(records[i]);
      continue;
    }
    auto [slot, inserted] = group_slot.try_emplace(keys[i], result.removed_groups.size());
    if (inserted) result.removed_groups.push_back({keys[i], {}});
    result.removed_groups[slot->second].indices.push_back(i);
  }
  return result;
}

template <typename Record>
std::vector<Record> dedup_impl(std::span<const Record> records) {
  struct IdentityHash {
    std::size_t operator()(const std::pair<CanonicalKey, Label>& k) const noexcept {
      return CanonicalKeyHash{}(k.first) * 31 + static_cast<std::size_t>(k.second);
    }
  };
  std::unordered_set<std::pair<CanonicalKey, Label>, IdentityHash> seen;
  seen.reserve(records.size());
  std::vector<Record> kept;
  for (const auto& r : records) {
    if (seen.emplace(canonical_key(r), r.label).second) kept.push_back(r);
  }
  return kept;
}

template <typename Record>
NumericFilterResult<Record> filter_numeric_impl(std::span<const Record> records, const Allowlist& allowlist,
                                                text::NumericRule rule) {
  NumericFilterResult<Record> result;
  for (const auto& r : records) {
    if (!text::is_purely_numeric(r.query, rule)) {
      result.kept.push_back(r);
    } else if (allowlist.count(text::normalize(r.query)) > 0) {
      result.kept.push_back(r);
      ++result.allowlisted_kept;
    } else {
      result.removed.push_back(r);
    }
  }
  return result;
}

template <typename Record>
CleanseResult<Record> cleanse_impl(std::span<const Record> records, const CleanseOptions& options) {
  CleanseResult<Record> result;
  result.report.input = records.size();
  std::vector<Record> current(records.begin(), records.end());

  if (options.remove_conflicts) {
    auto conflicts = remove_conflicts_impl<Record>(current);
    result.report.conflicts_removed = current.size() - conflicts.kept.size();
    result.conflict_groups = std::move(conflicts.removed_groups);
    current = std::move(conflicts.kept);
  }
  if (options.dedup) {
    auto kept = dedup_impl<Record>(current);
    result.report.duplicates_removed = current.size() - kept.size();
    current = std::move(kept);
  }
  if (options.filter_numeric) {
    auto numeric = filter_numeric_impl<Record>(current, options.allowlist, options.numeric_rule);
    result.report.numeric_removed = numeric.removed.size();
    result.report.allowlisted_kept = numeric.allowlisted_kept;
    current = std::move(numeric.kept);
  }
  result.report.kept = current.size();
  result.records = std::move(current);
  return result;
}

template <typename Record>
LabelStats stats_impl(std::span<const Record> records) {
  LabelStats stats;
  for (const auto& r : records) stats.add(r.language, r.label);
  return stats;
}

nlohmann::json counts_json(const LabelCounts& c) {
  return {{"negatives", c.negatives}, {"positives", c.positives}, {"total", c.total()}};
}

}  // namespace

ConflictResult<QCRecord> remove_conflicts(std::span<const QCRecord> records) { return remove_conflicts_impl(records); }
ConflictResult<QIRecord> remove_conflicts(std::span<const QIRecord> records) { return remove_conflicts_impl(records); }

std::vector<QCRecord> dedup(std::span<const QCRecord> records) { return dedup_impl(records); }
std::vector<QIRecord> dedup(std::span<const QIRecord> records) { return dedup_impl(records); }

Allowlist load_allowlist(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  Allowlist allowlist;
  std::string line;
  while (std::getline(in, line)) {
    std::string norm = text::normalize(line);
    if (!norm.empty()) allowlist.insert(std::move(norm));
  }
  return allowlist;
}

NumericFilterResult<QCRecord> filter_numeric(std::span<const QCRecord> records, const Allowlist& allowlist,
                                             text::NumericRule rule) {
  return filter_numeric_impl(records, allowlist, rule);
}
NumericFilterResult<QIRecord> filter_numeric(std::span<const QIRecord> records, const Allowlist& allowlist,
                                             text::NumericRule rule) {
  return filter_numeric_impl(records, allowlist, rule);
}

CleanseResult<QCRecord> cleanse(std::span<const QCRecord> records, const CleanseOptions& options) {
  return cleanse_impl(records, options);
}
CleanseResult<QIRecord> cleanse(std::span<const QIRecord> records, const CleanseOptions& options) {
  return cleanse_impl(records, options);
}

nlohmann::json CleanseReport::to_json() const {
  return {{"allowlisted_kept", allowlisted_kept},     {"conflicts_removed", conflicts_removed},
          {"duplicates_removed", duplicates_removed}, {"input", input},
          {"kept", kept},                             {"numeric_removed", numeric_removed}};
}

void LabelStats::add(Language lang, Label label, std::uint64_t count) {
  auto& c = per_language_[lang];
  (label == Label::kPositive ? c.positives : c.negatives) += count;
}

LabelStats& LabelStats::operator+=(const LabelStats& other) {
  for (const auto& [lang, counts] : other.per_language_) per_language_[lang] += counts;
  return *this;
}

LabelCounts LabelStats::of(Language lang) const {
  const auto it = per_language_.find(lang);
  return it == per_language_.end() ? LabelCounts{} : it->second;
}

LabelCounts LabelStats::totals() const {
  LabelCounts sum;
  for (const auto& [lang, counts] : per_language_) sum += counts;
  return sum;
}

nlohmann::json LabelStats::to_json() const {
  nlohmann::json languages = nlohmann::json::object();
  for (const auto& [lang, counts] : per_language_) languages[std::string(code(lang))] = counts_json(counts);
  return {{"languages", languages}, {"totals", counts_json(totals())}};
}

std::string LabelStats::to_csv() const {
  std::ostringstream out;
  out << "language,positives,negatives,total\n";
  for (const auto& [lang, c] : per_language_) {
    out << code(lang) << ',' << c.positives << ',' << c.negatives << ',' << c.total() << '\n';
  }
  return out.str();
}

LabelStats language_stats(std::span<const QCRecord> records) { return stats_impl(records); }
LabelStats language_stats(std::span<const QIRecord> records) { return stats_impl(records); }

}  // namespace relmine
