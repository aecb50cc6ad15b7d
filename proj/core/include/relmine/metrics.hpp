#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relmine/records.hpp"

namespace relmine {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Pairs are matched by position. Throws ValidationError on a length mismatch.
ConfusionCounts confusion_counts(std::span<const Label> gold, std::span<const Label> predicted);
/// Integer labels; anything but 0 or 1 is a ValidationError.
ConfusionCounts confusion_counts(std::span<const int> gold, std::span<const int> predicted);

struct Scores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Positive-class precision, recall and F1; an undefined ratio counts as 0.
Scores score_positive(const ConfusionCounts& c) noexcept;
inline double f1_positive(const ConfusionCounts& c) noexcept { return score_positive(c).f1; }

struct LanguageMetrics {
  ConfusionCounts counts;
  Scores scores;
};

struct MetricsReport {
  Task task = Task::kQC;
  std::map<Language, LanguageMetrics> per_language;
  /// Pooled over every pair; the headline number.
  LanguageMetrics micro;
  /// Unweighted mean of the per-language scores.
  Scores macro;

  nlohmann::json to_json() const;
  /// Fixed-width text table, one row per language plus micro and macro.
  std::string table() const;
};

MetricsReport evaluate_task(Task task, std::span<const Language> languages, std::span<const Label> gold,
                            std::span<const Label> predicted);
MetricsReport evaluate_task(std::span<const QCRecord> gold, std::span<const Label> predicted);
MetricsReport evaluate_task(std::span<const QIRecord> gold, std::span<const Label> predicted);

/// Reads an "index\tlabel" TSV (with that header) and returns labels ordered
/// by index. Every index in [0, expected) must appear exactly once; anything
/// else is a ValidationError.
std::vector<Label> read_predictions(const std::filesystem::path& path, std::size_t expected);
void write_predictions(const std::filesystem::path& path, std::span<const Label> labels);

/// Parses both files and scores them. A gold file with malformed lines is
/// rejected, since its indices would be ambiguous.
MetricsReport evaluate_files(Task task, const std::filesystem::path& gold, const std::filesystem::path& predictions);

/// Arithmetic mean; 0 for an empty list.
double average_f1(std::span<const double> scores) noexcept;

}  // namespace relmine
