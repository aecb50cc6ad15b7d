#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "relmine/embeddings.hpp"
#include "relmine/expected.hpp"
#include "relmine/random.hpp"
#include "relmine/record_io.hpp"
#include "relmine/records.hpp"

namespace relmine {

enum class MiningMode {
  /// Least similar candidate.
  kEasy,
  /// Most similar candidate strictly below the threshold.
  kHard,
  /// Uniformly random candidate strictly below the threshold.
  kHardRandom,
};

std::string_view mining_mode_name(MiningMode mode) noexcept;
std::optional<MiningMode> parse_mining_mode(std::string_view name) noexcept;

struct MiningConfig {
  MiningMode mode = MiningMode::kEasy;
  double hard_threshold = 0.7;
  std::uint64_t seed = kDefaultSeed;

  /// Throws ValidationError unless 0 < hard_threshold <= 1.
  void validate() const;
};

struct MinedItem {
  std::string item_id;
  /// Cosine similarity to the positive item, as the kernel reports it.
  float similarity = 0.0f;
};

enum class MineError { kUnknownItem, kNoCandidates, kNoCandidatesBelowThreshold };

std::string_view mine_error_name(MineError e) noexcept;

using MineOutcome = Expected<MinedItem, MineError>;

// Candidates are every other item of the positive item's language partition.
// Similarities are float; the threshold is compared in float too, so a
// candidate whose similarity is float(tau) is excluded. Ties go to the
// lexicographically smallest item id.
MineOutcome mine_easy(std::string_view positive_item_id, Language language, const EmbeddingStore& store);
MineOutcome mine_hard(std::string_view positive_item_id, Language language, const EmbeddingStore& store,
                      double tau = 0.7);
/// `stream` picks the random stream (batch mining passes the record index).
MineOutcome mine_hard_random(std::string_view positive_item_id, Language language, const EmbeddingStore& store,
                             double tau, std::uint64_t seed, std::uint64_t stream = 0);

using ItemTitles = std::unordered_map<std::string, std::string>;

/// item_id -> title over `records`.
ItemTitles item_titles(std::span<const QIRecord> records);

struct MinedBatch {
  std::vector<QIRecord> negatives;
  std::vector<std::size_t> sources;
  std::vector<float> similarities;
  std::vector<Diagnostic> diagnostics;  // position = index into the input
};

/// One negative per positive: same query and language, mined item, label 0,
/// origin generated-negative. A mined (query, item) that is already a
/// positive pair is skipped with a diagnostic. Titles come from `titles`, or
/// from `positives` when null. Output is ordered by input index and is
/// identical for any worker count. Throws PreconditionError if any input
/// record is not positive.
MinedBatch batch_mine(std::span<const QIRecord> positives, const EmbeddingStore& store, const MiningConfig& config,
                      unsigned workers = 1, const ItemTitles* titles = nullptr);

}  // namespace relmine
