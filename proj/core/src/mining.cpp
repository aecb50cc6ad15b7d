#include "relmine/mining.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "relmine/errors.hpp"
#include "relmine/similarity_kernel.hpp"
#include "relmine/text.hpp"

namespace relmine {
namespace {

// Candidate rows per kernel call; 512 x 128 floats stay resident in L2.
constexpr std::size_t kCandidateTile = 512;
// Positives sharing one pass over the candidates.
constexpr std::size_t kQueryGroup = 64;

struct Query {
  std::size_t row;
  std::uint64_t stream;
};

struct Choice {
  std::size_t row = EmbeddingPartition::npos;
  float similarity = 0.0f;
  std::uint64_t eligible = 0;
};

// Running selection for one positive over candidate rows visited in
// ascending order.
class Selector {
 public:
  Selector(const EmbeddingPartition& part, const MiningConfig& config, std::uint64_t stream)
      : part_(part),
        mode_(config.mode),
        tau_(static_cast<float>(config.hard_threshold)),
        rng_(make_rng(config.seed, stream)) {}

  void offer(std::size_t row, float sim) {
    switch (mode_) {
      case MiningMode::kEasy:
        if (better(row, sim, sim < best_.similarity)) take(row, sim);
        break;
      case MiningMode::kHard:
        if (sim < tau_ && better(row, sim, sim > best_.similarity)) take(row, sim);
        break;
      case MiningMode::kHardRandom:
        if (sim < tau_) {
          ++best_.eligible;
          if (uniform_index(rng_, best_.eligible) == 0) take(row, sim);
        }
        break;
    }
  }

  const Choice& choice() const { return best_; }

 private:
  bool better(std::size_t row, float sim, bool strictly) const {
    if (best_.row == EmbeddingPartition::npos || strictly) return true;
    return sim == best_.similarity && part_.id(row) < part_.id(best_.row);
  }
  void take(std::size_t row, float sim) {
    best_.row = row;
    best_.similarity = sim;
  }

  const EmbeddingPartition& part_;
  MiningMode mode_;
  float tau_;
  std::mt19937_64 rng_;
  Choice best_;
};

// Scores `queries` (rows of `part`) against every other row of `part`.
std::vector<Choice> scan(const EmbeddingPartition& part, std::span<const Query> queries, const MiningConfig& config) {
  const std::size_t d = part.dimension();
  std::vector<double> wide;
  wide.reserve(queries.size() * d);
  for (const Query& q : queries) {
    const auto row = part.row(q.row);
    wide.insert(wide.end(), row.begin(), row.end());
  }
  std::vector<Selector> selectors;
  selectors.reserve(queries.size());
  for (const Query& q : queries) selectors.emplace_back(part, config, q.stream);

  std::vector<float> block(queries.size() * kCandidateTile);
  for (std::size_t start = 0; start < part.size(); start += kCandidateTile) {
    const std::size_t n = std::min(kCandidateTile, part.size() - start);
    kernel::similarity_block(wide.data(), queries.size(), part.data() + start * d, n, d, block.data());
    for (std::size_t q = 0; q < queries.size(); ++q) {
      const float* sims = block.data() + q * n;
      for (std::size_t c = 0; c < n; ++c) {
        const std::size_t row = start + c;
        if (row != queries[q].row) selectors[q].offer(row, sims[c]);
      }
    }
  }
  std::vector<Choice> out;
  out.reserve(selectors.size());
  for (const auto& s : selectors) out.push_back(s.choice());
  return out;
}

MineOutcome finish(const EmbeddingPartition& part, const Choice& choice, MiningMode mode) {
  if (choice.row == EmbeddingPartition::npos) {
    return mode == MiningMode::kEasy ? MineError::kNoCandidates : MineError::kNoCandidatesBelowThreshold;
  }
  return MinedItem{part.id(choice.row), choice.similarity};
}

MineOutcome mine_one(std::string_view id, Language language, const EmbeddingStore& store,
                     const MiningConfig& config, std::uint64_t stream) {
  config.validate();
  const EmbeddingPartition* part = store.partition(language);
  if (part == nullptr) return MineError::kUnknownItem;
  const std::size_t row = part->find(id);
  if (row == EmbeddingPartition::npos) return MineError::kUnknownItem;
  if (part->size() < 2) return MineError::kNoCandidates;
  const Query query{row, stream};
  return finish(*part, scan(*part, std::span(&query, 1), config).front(), config.mode);
}

}  // namespace

std::string_view mining_mode_name(MiningMode mode) noexcept {
  switch (mode) {
    case MiningMode::kEasy: return "easy";
    case MiningMode::kHard: return "hard";
    case MiningMode::kHardRandom: return "hard-random";
  }
  return "easy";
}

std::optional<MiningMode> parse_mining_mode(std::string_view name) noexcept {
  for (auto m : {MiningMode::kEasy, MiningMode::kHard, MiningMode::kHardRandom}) {
    if (mining_mode_name(m) == name) return m;
  }
  return std::nullopt;
}

void MiningConfig::validate() const {
  if (!(hard_threshold > 0.0 && hard_threshold <= 1.0)) {
    throw ValidationError("hard threshold must lie in (0, 1], got " + std::to_string(hard_threshold));
  }
}

std::string_view mine_error_name(MineError e) noexcept {
  switch (e) {
    case MineError::kUnknownItem: return "item has no embedding in its language";
    case MineError::kNoCandidates: return "no other item in the language";
    case MineError::kNoCandidatesBelowThreshold: return "no candidate below the similarity threshold";
  }
  return "unknown";
}

MineOutcome mine_easy(std::string_view positive_item_id, Language language, const EmbeddingStore& store) {
  return mine_one(positive_item_id, language, store, MiningConfig{MiningMode::kEasy}, 0);
}

MineOutcome mine_hard(std::string_view positive_item_id, Language language, const EmbeddingStore& store, double tau) {
  return mine_one(positive_item_id, language, store, MiningConfig{MiningMode::kHard, tau}, 0);
}

MineOutcome mine_hard_random(std::string_view positive_item_id, Language language, const EmbeddingStore& store,
                             double tau, std::uint64_t seed, std::uint64_t stream) {
  return mine_one(positive_item_id, language, store, MiningConfig{MiningMode::kHardRandom, tau, seed}, stream);
}

ItemTitles item_titles(std::span<const QIRecord> records) {
  ItemTitles titles;
  for (const auto& r : records) titles.emplace(r.item_id, r.item_title);
  return titles;
}

MinedBatch batch_mine(std::span<const QIRecord> positives, const EmbeddingStore& store, const MiningConfig& config,
                      unsigned workers, const ItemTitles* titles) {
  config.validate();
  for (const auto& r : positives) {
    if (r.label != Label::kPositive) throw PreconditionError("batch_mine expects positive records only");
  }

  std::vector<std::optional<MineOutcome>> outcomes(positives.size());

  // Work units: up to kQueryGroup records of one language.
  struct Unit {
    const EmbeddingPartition* part;
    std::vector<std::size_t> records;
    std::vector<Query> queries;
  };
  std::map<Language, std::vector<std::size_t>> by_language;
  for (std::size_t i = 0; i < positives.size(); ++i) {
    const QIRecord& r = positives[i];
    const EmbeddingPartition* part = store.partition(r.language);
    const std::size_t row = part == nullptr ? EmbeddingPartition::npos : part->find(r.item_id);
    if (row == EmbeddingPartition::npos) {
      outcomes[i] = MineError::kUnknownItem;
    } else if (part->size() < 2) {
      outcomes[i] = MineError::kNoCandidates;
    } else {
      by_language[r.language].push_back(i);
    }
  }
  std::vector<Unit> units;
  for (const auto& [lang, indices] : by_language) {
    const EmbeddingPartition* part = store.partition(lang);
    for (std::size_t start = 0; start < indices.size(); start += kQueryGroup) {
      Unit unit{part, {}, {}};
      for (std::size_t k = start; k < std::min(indices.size(), start + kQueryGroup); ++k) {
        unit.records.push_back(indices[k]);
        unit.queries.push_back({part->find(positives[indices[k]].item_id), indices[k]});
      }
      units.push_back(std::move(unit));
    }
  }

  const auto run_unit = [&](const Unit& unit) {
    const auto choices = scan(*unit.part, unit.queries, config);
    for (std::size_t k = 0; k < choices.size(); ++k) {
      outcomes[unit.records[k]] = finish(*unit.part, choices[k], config.mode);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(units.size())));
  if (threads <= 1) {
    for (const auto& unit : units) run_unit(unit);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t u = w; u < units.size(); u += threads) run_unit(units[u]);
      });
    }
  }

  const ItemTitles own_titles = titles == nullptr ? item_titles(positives) : ItemTitles{};
  const ItemTitles& lookup = titles == nullptr ? own_titles : *titles;
  const KeySet positive_pairs = positive_keys(positives);

  MinedBatch batch;
  for (std::size_t i = 0; i < positives.size(); ++i) {
    const MineOutcome& outcome = *outcomes[i];
    if (!outcome.has_value()) {
      batch.diagnostics.push_back({i, std::string(mine_error_name(outcome.error()))});
      continue;
    }
    const QIRecord& source = positives[i];
    const MinedItem& mined = outcome.value();
    if (positive_pairs.count(CanonicalKey{text::normalize(source.query), mined.item_id}) > 0) {
      batch.diagnostics.push_back({i, "mined item '" + mined.item_id + "' is already a positive for this query"});
      continue;
    }
    const auto title = lookup.find(mined.item_id);
    if (title == lookup.end()) {
      batch.diagnostics.push_back({i, "no title known for mined item '" + mined.item_id + "'"});
      continue;
    }
    QIRecord negative = source;
    negative.item_id = mined.item_id;
    negative.item_title = title->second;
    negative.label = Label::kNegative;
    negative.origin = Origin::kGeneratedNegative;
    batch.negatives.push_back(std::move(negative));
    batch.sources.push_back(i);
    batch.similarities.push_back(mined.similarity);
  }
  return batch;
}

}  // namespace relmine
