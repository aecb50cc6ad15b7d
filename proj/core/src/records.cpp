#include "relmine/records.hpp"

#include "relmine/text.hpp"

namespace relmine {

std::string_view task_name(Task task) noexcept { return task == Task::kQC ? "qc" : "qi"; }

std::optional<Task> parse_task(std::string_view name) noexcept {
  if (name == "qc" || name == "QC") return Task::kQC;
  if (name == "qi" || name == "QI") return Task::kQI;
  return std::nullopt;
}

std::string_view origin_name(Origin origin) noexcept {
  switch (origin) {
    case Origin::kOriginal: return "original";
    case Origin::kTranslated: return "translated";
    case Origin::kGeneratedNegative: return "generated-negative";
  }
  return "original";
}

std::optional<Origin> parse_origin(std::string_view name) noexcept {
  if (name == "original") return Origin::kOriginal;
  if (name == "translated") return Origin::kTranslated;
  if (name == "generated-negative") return Origin::kGeneratedNegative;
  return std::nullopt;
}

CanonicalKey canonical_key(std::string_view query, const CategoryPath& path) {
  return {text::normalize(query), text::normalize(path.render())};
}

CanonicalKey canonical_key(const QCRecord& r) { return canonical_key(r.query, r.path); }

CanonicalKey canonical_key(const QIRecord& r) { return {text::normalize(r.query), r.item_id}; }

namespace {
template <typename Record>
KeySet positives_of(std::span<const Record> records) {
  KeySet keys;
  for (const auto& r : records) {
    if (r.label == Label::kPositive) keys.insert(canonical_key(r));
  }
  return keys;
}
}  // namespace

KeySet positive_keys(std::span<const QCRecord> records) { return positives_of(records); }
KeySet positive_keys(std::span<const QIRecord> records) { return positives_of(records); }

}  // namespace relmine
