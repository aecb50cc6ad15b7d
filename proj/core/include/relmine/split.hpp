#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "relmine/random.hpp"
#include "relmine/records.hpp"

namespace relmine {

enum class SplitPart : std::uint8_t { kTrain, kValidation, kTest };
enum class SplitMode { kStratified, kQueryDisjoint };

std::string_view split_part_name(SplitPart part) noexcept;  // train / validation / test
std::string_view split_mode_name(SplitMode mode) noexcept;  // stratified / query-disjoint
std::optional<SplitMode> parse_split_mode(std::string_view name) noexcept;

struct SplitRatios {
  double train = 0.9;
  double validation = 0.05;
  double test = 0.05;

  /// Throws ValidationError unless all are positive and sum to 1 within 1e-9.
  void validate() const;
  double operator[](std::size_t i) const { return i == 0 ? train : i == 1 ? validation : test; }
};

struct SplitManifest {
  SplitMode mode = SplitMode::kStratified;
  std::uint64_t seed = kDefaultSeed;
  SplitRatios ratios;
  /// One entry per input record, by input index.
  std::vector<SplitPart> assignments;
  /// Query-disjoint mode: number of query groups and the largest group.
  std::size_t groups = 0;
  std::size_t largest_group = 0;

  std::array<std::size_t, 3> counts() const;
  std::array<double, 3> realized_ratios() const;
  /// Largest |realized - requested| over the three parts.
  double max_deviation() const;
  /// {seed, mode, ratios, realized, groups, largest_group, assignments:[{index, split}]}
  nlohmann::json to_json() const;
};

/// Within every (language, label) stratum: seeded shuffle, then cut at the
/// largest-remainder rounding of the ratios, so each part is within one
/// record of its share.
SplitManifest split_stratified(std::span<const QCRecord> records, const SplitRatios& ratios,
                               std::uint64_t seed = kDefaultSeed);
SplitManifest split_stratified(std::span<const QIRecord> records, const SplitRatios& ratios,
                               std::uint64_t seed = kDefaultSeed);

/// Records are grouped by normalized query and every group lands in one part.
/// Groups are ordered by query_hash(query, seed) (ties by query text) and laid
/// out along [0, 1) in proportion to their record counts; a group goes to the
/// part containing its midpoint. Realized shares deviate from the ratios by at
/// most one group's size over the record count, and the assignment depends
/// only on the multiset of records, not their order.
SplitManifest split_query_disjoint(std::span<const QCRecord> records, const SplitRatios& ratios,
                                   std::uint64_t seed = kDefaultSeed);
SplitManifest split_query_disjoint(std::span<const QIRecord> records, const SplitRatios& ratios,
                                   std::uint64_t seed = kDefaultSeed);

/// FNV-1a 64 over the eight little-endian seed bytes followed by the UTF-8
/// query bytes, finished with the splitmix64 mixer. Stable across platforms.
std::uint64_t query_hash(std::string_view normalized_query, std::uint64_t seed) noexcept;

}  // namespace relmine
