#include "relmine/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>

#include "relmine/errors.hpp"
#include "relmine/text.hpp"

namespace relmine {
namespace {

struct SplitKey {
  Language language;
  Label label;
  const std::string* query;
};

template <typename Record>
std::vector<SplitKey> keys_of(std::span<const Record> records) {
  std::vector<SplitKey> keys;
  keys.reserve(records.size());
  for (const auto& r : records) keys.push_back({r.language, r.label, &r.query});
  return keys;
}

// Largest-remainder apportionment of n over the three ratios.
std::array<std::size_t, 3> apportion(std::size_t n, const SplitRatios& ratios) {
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double exact = static_cast<double>(n) * ratios[i];
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    remainder[i] = exact - std::floor(exact);
    assigned += counts[i];
  }
  while (assigned > n) {
    for (std::size_t i = 3; i-- > 0;) {
      if (counts[i] > 0 && assigned > n) {
        --counts[i];
        --assigned;
      }
    }
  }
  while (assigned < n) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < 3; ++i) {
      if (remainder[i] > remainder[best]) best = i;
    }
    ++counts[best];
    remainder[best] = -1.0;
    ++assigned;
  }
  return counts;
}

SplitManifest stratified(const std::vector<SplitKey>& keys, const SplitRatios& ratios, std::uint64_t seed) {
  ratios.validate();
  SplitManifest manifest;
  manifest.mode = SplitMode::kStratified;
  manifest.seed = seed;
  manifest.ratios = ratios;
  manifest.assignments.assign(keys.size(), SplitPart::kTrain);

  std::map<std::pair<Language, Label>, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < keys.size(); ++i) strata[{keys[i].language, keys[i].label}].push_back(i);

  for (auto& [stratum, members] : strata) {
    auto rng = make_rng(seed, (static_cast<std::uint64_t>(stratum.first) << 8) | to_int(stratum.second));
    for (std::size_t i = members.size(); i > 1; --i) std::swap(members[i - 1], members[uniform_index(rng, i)]);
    const auto counts = apportion(members.size(), ratios);
    std::size_t pos = 0;
    for (std::size_t part = 0; part < 3; ++part) {
      for (std::size_t k = 0; k < counts[part]; ++k) manifest.assignments[members[pos++]] = static_cast<SplitPart>(part);
    }
  }
  return manifest;
}

SplitManifest query_disjoint(const std::vector<SplitKey>& keys, const SplitRatios& ratios, std::uint64_t seed) {
  ratios.validate();
  SplitManifest manifest;
  manifest.mode = SplitMode::kQueryDisjoint;
  manifest.seed = seed;
  manifest.ratios = ratios;
  manifest.assignments.assign(keys.size(), SplitPart::kTrain);

  std::unordered_map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < keys.size(); ++i) groups[text::normalize(*keys[i].query)].push_back(i);

  struct Group {
    std::uint64_t hash;
    const std::string* query;
    const std::vector<std::size_t>* members;
  };
  std::vector<Group> ordered;
  ordered.reserve(groups.size());
  for (const auto& [query, members] : groups) ordered.push_back({query_hash(query, seed), &query, &members});
  std::sort(ordered.begin(), ordered.end(), [](const Group& a, const Group& b) {
    return a.hash != b.hash ? a.hash < b.hash : *a.query < *b.query;
  });

  const double total = static_cast<double>(keys.size());
  const double train_end = ratios.train;
  const double validation_end = ratios.train + ratios.validation;
  std::size_t before = 0;
  for (const Group& g : ordered) {
    const std::size_t size = g.members->size();
    const double midpoint = (static_cast<double>(before) + static_cast<double>(size) / 2.0) / total;
    const SplitPart part = midpoint < train_end        ? SplitPart::kTrain
                           : midpoint < validation_end ? SplitPart::kValidation
                                                       : SplitPart::kTest;
    for (std::size_t i : *g.members) manifest.assignments[i] = part;
    before += size;
    manifest.largest_group = std::max(manifest.largest_group, size);
  }
  manifest.groups = ordered.size();
  return manifest;
}

}  // namespace

std::string_view split_part_name(SplitPart part) noexcept {
  switch (part) {
    case SplitPart::kTrain: return "train";
    case SplitPart::kValidation: return "validation";
    case SplitPart::kTest: return "test";
  }
  return "train";
}

std::string_view split_mode_name(SplitMode mode) noexcept {
  return mode == SplitMode::kStratified ? "stratified" : "query-disjoint";
}

std::optional<SplitMode> parse_split_mode(std::string_view name) noexcept {
  if (name == "stratified") return SplitMode::kStratified;
  if (name == "query-disjoint") return SplitMode::kQueryDisjoint;
  return std::nullopt;
}

void SplitRatios::validate() const {
  if (!(train > 0.0 && validation > 0.0 && test > 0.0)) throw ValidationError("split ratios must all be positive");
  const double sum = train + validation + test;
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("split ratios sum to " + std::to_string(sum) + ", not 1");
}

std::array<std::size_t, 3> SplitManifest::counts() const {
  std::array<std::size_t, 3> c{};
  for (SplitPart p : assignments) ++c[static_cast<std::size_t>(p)];
  return c;
}

std::array<double, 3> SplitManifest::realized_ratios() const {
  const auto c = counts();
  std::array<double, 3> r{};
  if (assignments.empty()) return r;
  for (std::size_t i = 0; i < 3; ++i) r[i] = static_cast<double>(c[i]) / static_cast<double>(assignments.size());
  return r;
}

double SplitManifest::max_deviation() const {
  const auto r = realized_ratios();
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, std::abs(r[i] - ratios[i]));
  return worst;
}

nlohmann::json SplitManifest::to_json() const {
  nlohmann::json assigned = nlohmann::json::array();
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    assigned.push_back({{"index", i}, {"split", std::string(split_part_name(assignments[i]))}});
  }
  const auto realized = realized_ratios();
  nlohmann::json j = {
      {"seed", seed},
      {"mode", std::string(split_mode_name(mode))},
      {"ratios", {ratios.train, ratios.validation, ratios.test}},
      {"realized", {realized[0], realized[1], realized[2]}},
      {"max_deviation", max_deviation()},
      {"assignments", assigned},
  };
  if (mode == SplitMode::kQueryDisjoint) {
    j["groups"] = groups;
    j["largest_group"] = largest_group;
  }
  return j;
}

SplitManifest split_stratified(std::span<const QCRecord> records, const SplitRatios& ratios, std::uint64_t seed) {
  return stratified(keys_of(records), ratios, seed);
}
SplitManifest split_stratified(std::span<const QIRecord> records, const SplitRatios& ratios, std::uint64_t seed) {
  return stratified(keys_of(records), ratios, seed);
}
SplitManifest split_query_disjoint(std::span<const QCRecord> records, const SplitRatios& ratios, std::uint64_t seed) {
  return query_disjoint(keys_of(records), ratios, seed);
}
SplitManifest split_query_disjoint(std::span<const QIRecord> records, const SplitRatios& ratios, std::uint64_t seed) {
  return query_disjoint(keys_of(records), ratios, seed);
}

std::uint64_t query_hash(std::string_view normalized_query, std::uint64_t seed) noexcept {
  constexpr std::uint64_t kOffset = 0xcbf29ce484222325ULL;
  constexpr std::uint64_t kPrime = 0x100000001b3ULL;
  std::uint64_t h = kOffset;
  for (int shift = 0; shift < 64; shift += 8) {
    h ^= (seed >> shift) & 0xFF;
    h *= kPrime;
  }
  for (unsigned char c : normalized_query) {
    h ^= c;
    h *= kPrime;
  }
  return splitmix64(h);
}

}  // namespace relmine
