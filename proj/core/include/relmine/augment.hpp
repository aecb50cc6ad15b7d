#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "relmine/errors.hpp"
#include "relmine/random.hpp"
#include "relmine/record_io.hpp"
#include "relmine/records.hpp"
#include "relmine/translator.hpp"

namespace relmine {

inline constexpr std::array<Language, 4> kDefaultQcTargets = {Language::kDe, Language::kAr, Language::kIt,
                                                              Language::kPl};
inline constexpr std::array<Language, 6> kDefaultQiTargets = {Language::kDe, Language::kAr, Language::kIt,
                                                              Language::kPl, Language::kVi, Language::kId};
inline constexpr std::size_t kDefaultQcQuota = 42000;
inline constexpr std::size_t kDefaultQiQuota = 50000;

/// No training record qualifies as a translation source.
class EmptyEligiblePool : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Which training records to translate into which languages. Sources are
/// indices into the training corpus the plan was made from.
struct TranslationPlan {
  Task task = Task::kQC;
  std::uint64_t seed = kDefaultSeed;
  std::size_t quota = 0;
  std::size_t source_count = 0;
  std::vector<Language> targets;
  /// Per target, ascending source indices.
  std::map<Language, std::vector<std::size_t>> entries;

  std::size_t size() const;
  nlohmann::json to_json() const;
  /// Throws FormatError on a malformed document.
  static TranslationPlan from_json(const nlohmann::json& j);
};

/// Sources are records whose path is in `dev_paths`, in any language other
/// than the target. Each target gets min(quota, eligible) records, sampled
/// uniformly within each label with the label mix of the eligible pool
/// (largest-remainder rounding).
TranslationPlan plan_qc_augmentation(std::span<const QCRecord> train, const std::set<CategoryPath>& dev_paths,
                                     std::span<const Language> targets = kDefaultQcTargets,
                                     std::size_t quota = kDefaultQcQuota, std::uint64_t seed = kDefaultSeed);

/// As above with English records as the only sources.
TranslationPlan plan_qi_augmentation(std::span<const QIRecord> train,
                                     std::span<const Language> targets = kDefaultQiTargets,
                                     std::size_t quota = kDefaultQiQuota, std::uint64_t seed = kDefaultSeed);

struct ExecuteOptions {
  std::size_t batch_size = 64;
  unsigned retries = 3;
  unsigned max_in_flight = 1;
};

template <typename Record>
struct AugmentResult {
  std::vector<Record> records;          // plan order: targets, then source index
  std::vector<Diagnostic> diagnostics;  // position = source index
};

/// Translates each planned query; target field and label are copied, origin
/// becomes translated. Batches share one source language. A batch that still
/// fails after `retries` retries turns into one diagnostic per entry; if
/// every batch fails, throws TranslatorUnavailable.
AugmentResult<QCRecord> execute_plan(const TranslationPlan& plan, std::span<const QCRecord> train,
                                     Translator& translator, const ExecuteOptions& options = {});
AugmentResult<QIRecord> execute_plan(const TranslationPlan& plan, std::span<const QIRecord> train,
                                     Translator& translator, const ExecuteOptions& options = {});

}  // namespace relmine
