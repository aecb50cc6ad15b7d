#include "relmine/taxonomy.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <thread>
#include <unordered_map>

#include "relmine/errors.hpp"
#include "relmine/text.hpp"

namespace relmine {

TaxonomyTree TaxonomyTree::build(std::span<const CategoryPath> paths) {
  if (paths.empty()) throw PreconditionError("cannot build a taxonomy from zero paths");
  TaxonomyTree tree;
  for (const auto& path : paths) {
    if (path.empty()) throw PreconditionError("empty category path");
    std::optional<NodeId> parent;
    for (std::size_t level = 0; level < path.depth(); ++level) {
      auto& siblings = parent ? tree.nodes_[*parent].children : tree.roots_;
      const std::string& name = path.level(level);
      auto it = siblings.find(name);
      if (it == siblings.end()) {
        const auto id = static_cast<NodeId>(tree.nodes_.size());
        siblings.emplace(name, id);
        tree.nodes_.push_back({name, path.prefix(level + 1), parent, {}, false, 0, 0});
        parent = id;
      } else {
        parent = it->second;
      }
    }
    tree.nodes_[*parent].observed_leaf = true;
  }

  tree.leaf_position_.assign(tree.nodes_.size(), std::numeric_limits<std::size_t>::max());
  std::function<void(NodeId)> visit = [&](NodeId id) {
    Node& n = tree.nodes_[id];
    n.leaf_begin = tree.leaves_.size();
    if (n.observed_leaf) {
      tree.leaf_position_[id] = tree.leaves_.size();
      tree.leaves_.push_back(id);
    }
    for (const auto& [name, child] : n.children) visit(child);
    tree.nodes_[id].leaf_end = tree.leaves_.size();
  };
  for (const auto& [name, root] : tree.roots_) visit(root);
  return tree;
}

std::vector<NodeId> TaxonomyTree::roots() const {
  std::vector<NodeId> out;
  for (const auto& [name, id] : roots_) out.push_back(id);
  return out;
}

std::optional<NodeId> TaxonomyTree::find(const CategoryPath& path) const {
  const std::map<std::string, NodeId>* level = &roots_;
  std::optional<NodeId> found;
  for (const auto& name : path.levels()) {
    const auto it = level->find(name);
    if (it == level->end()) return std::nullopt;
    found = it->second;
    level = &nodes_[it->second].children;
  }
  return found;
}

std::vector<CategoryPath> TaxonomyTree::observed_paths() const {
  std::vector<CategoryPath> out;
  out.reserve(leaves_.size());
  for (NodeId id : leaves_) out.push_back(nodes_[id].path);
  return out;
}

std::size_t TaxonomyTree::leaf_position(NodeId id) const { return leaf_position_.at(id); }

nlohmann::json TaxonomyTree::to_json() const {
  std::function<nlohmann::json(NodeId)> dump = [&](NodeId id) {
    const Node& n = nodes_[id];
    nlohmann::json children = nlohmann::json::array();
    for (const auto& [name, child] : n.children) children.push_back(dump(child));
    return nlohmann::json{{"name", n.name}, {"observed_leaf", n.observed_leaf}, {"children", children}};
  };
  nlohmann::json roots = nlohmann::json::array();
  for (const auto& [name, id] : roots_) roots.push_back(dump(id));
  return {{"nodes", nodes_.size()}, {"observed_leaves", leaves_.size()}, {"roots", roots}};
}

std::string_view strategy_name(NegativeStrategy s) noexcept {
  switch (s) {
    case NegativeStrategy::kSameL1: return "same-l1";
    case NegativeStrategy::kSiblingLeaf: return "sibling-leaf";
    case NegativeStrategy::kCrossRoot: return "cross-root";
    case NegativeStrategy::kSyntheticQuery: return "synthetic-query";
  }
  return "sibling-leaf";
}

std::optional<NegativeStrategy> parse_strategy(std::string_view name) noexcept {
  for (auto s : {NegativeStrategy::kSameL1, NegativeStrategy::kSiblingLeaf, NegativeStrategy::kCrossRoot,
                 NegativeStrategy::kSyntheticQuery}) {
    if (strategy_name(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view gen_error_name(GenError e) noexcept {
  switch (e) {
    case GenError::kNoAlternative: return "no alternative category";
    case GenError::kCollisionExhausted: return "every candidate collides with a positive";
    case GenError::kGeneratorUnavailable: return "query generator unavailable";
  }
  return "unknown";
}

namespace {

QCRecord make_negative(const QCRecord& positive) {
  QCRecord negative = positive;
  negative.label = Label::kNegative;
  negative.origin = Origin::kGeneratedNegative;
  return negative;
}

NodeId checked_node(const QCRecord& record, const TaxonomyTree& tree, const NegativeGenConfig& config,
                    std::size_t min_depth) {
  if (record.label != Label::kPositive) throw PreconditionError("negative generation needs a positive record");
  if (config.max_resamples == 0) throw PreconditionError("max_resamples must be positive");
  if (record.path.depth() < min_depth) {
    throw PreconditionError("category path '" + record.path.render() + "' is shallower than " +
                            std::to_string(min_depth) + " levels");
  }
  const auto id = tree.find(record.path);
  if (!id) throw PreconditionError("category path '" + record.path.render() + "' is not in the taxonomy");
  return *id;
}

// Draws up to max_resamples distinct candidates (sparse Fisher-Yates over
// [0, count)) and returns the first one whose key is not a positive.
template <typename CandidateAt>
GenOutcome draw_candidate(const QCRecord& record, const TaxonomyTree& tree, const KeySet& positives,
                          const NegativeGenConfig& config, std::uint64_t record_index, std::size_t count,
                          CandidateAt candidate_at) {
  if (count == 0) return GenError::kNoAlternative;
  auto rng = make_rng(config.seed, record_index);
  std::unordered_map<std::size_t, std::size_t> swapped;
  const auto slot = [&](std::size_t i) {
    const auto it = swapped.find(i);
    return it == swapped.end() ? i : it->second;
  };
  const std::size_t attempts = std::min<std::size_t>(config.max_resamples, count);
  for (std::size_t a = 0; a < attempts; ++a) {
    const std::size_t j = a + uniform_index(rng, count - a);
    const std::size_t pick = slot(j);
    swapped[j] = slot(a);
    const CategoryPath& path = tree.node(candidate_at(pick)).path;
    if (positives.count(canonical_key(record.query, path)) == 0) {
      QCRecord negative = make_negative(record);
      negative.path = path;
      return negative;
    }
  }
  return GenError::kCollisionExhausted;
}

// Observed leaves of [begin, end) with `skip` (a leaf position, possibly
// outside the range) removed.
struct RangeMinus {
  std::size_t begin, end, skip;
  std::size_t count() const { return end - begin - (skip >= begin && skip < end ? 1 : 0); }
  std::size_t at(std::size_t i) const {
    const std::size_t pos = begin + i;
    return skip >= begin && pos >= skip ? pos + 1 : pos;
  }
};

std::size_t own_position(const TaxonomyTree& tree, NodeId id) {
  return tree.node(id).observed_leaf ? tree.leaf_position(id) : std::numeric_limits<std::size_t>::max();
}

}  // namespace

GenOutcome gen_neg_same_l1(const QCRecord& record, const TaxonomyTree& tree, const KeySet& positives,
                           const NegativeGenConfig& config, std::uint64_t record_index) {
  const NodeId id = checked_node(record, tree, config, 2);
  const NodeId l1 = *tree.find(record.path.prefix(2));
  const auto& anchor = tree.node(l1);
  const RangeMinus range{anchor.leaf_begin, anchor.leaf_end, own_position(tree, id)};
  const auto leaves = tree.observed_leaves();
  return draw_candidate(record, tree, positives, config, record_index, range.count(),
                        [&](std::size_t i) { return leaves[range.at(i)]; });
}

GenOutcome gen_neg_sibling_leaf(const QCRecord& record, const TaxonomyTree& tree, const KeySet& positives,
                                const NegativeGenConfig& config, std::uint64_t record_index) {
  const NodeId id = checked_node(record, tree, config, 2);
  std::vector<NodeId> siblings;
  for (const auto& [name, child] : tree.node(*tree.node(id).parent).children) {
    if (child != id && tree.node(child).observed_leaf) siblings.push_back(child);
  }
  return draw_candidate(record, tree, positives, config, record_index, siblings.size(),
                        [&](std::size_t i) { return siblings[i]; });
}

GenOutcome gen_neg_cross_root(const QCRecord& record, const TaxonomyTree& tree, const KeySet& positives,
                              const NegativeGenConfig& config, std::uint64_t record_index) {
  checked_node(record, tree, config, 1);
  const auto& root = tree.node(*tree.find(record.path.prefix(1)));
  const auto leaves = tree.observed_leaves();
  const std::size_t before = root.leaf_begin;
  const std::size_t count = leaves.size() - (root.leaf_end - root.leaf_begin);
  return draw_candidate(record, tree, positives, config, record_index, count, [&](std::size_t i) {
    return leaves[i < before ? i : root.leaf_end + (i - before)];
  });
}

GenOutcome gen_neg_synthetic_query(const QCRecord& record, QueryGenerator& generator, const KeySet& positives,
                                   const NegativeGenConfig& config) {
  if (record.label != Label::kPositive) throw PreconditionError("negative generation needs a positive record");
  if (config.max_resamples == 0) throw PreconditionError("max_resamples must be positive");
  const std::string original = text::normalize(record.query);
  for (std::uint32_t attempt = 0; attempt < config.max_resamples; ++attempt) {
    std::string candidate;
    try {
      candidate = generator.generate({record.query, record.language, record.path, attempt});
    } catch (const GeneratorUnavailable&) {
      return GenError::kGeneratorUnavailable;
    }
    if (text::trim(candidate).empty() || candidate.find_first_of("\t\n\r") != std::string::npos) continue;
    if (!text::is_valid_utf8(candidate)) continue;
    const CanonicalKey key = canonical_key(candidate, record.path);
    if (key.norm_query == original || positives.count(key) > 0) continue;
    QCRecord negative = make_negative(record);
    negative.query = std::move(candidate);
    return negative;
  }
  return GenError::kCollisionExhausted;
}

NegativeBatch generate_negatives(std::span<const QCRecord> corpus, const NegativeGenConfig& config,
                                 QueryGenerator* generator, unsigned workers) {
  NegativeBatch batch;
  if (corpus.empty()) return batch;
  const bool synthetic = config.strategy == NegativeStrategy::kSyntheticQuery;
  if (synthetic && generator == nullptr) throw PreconditionError("synthetic-query strategy needs a generator");
  if (config.max_resamples == 0) throw PreconditionError("max_resamples must be positive");

  std::vector<CategoryPath> paths;
  paths.reserve(corpus.size());
  for (const auto& r : corpus) paths.push_back(r.path);
  const TaxonomyTree tree = TaxonomyTree::build(paths);
  const KeySet positives = positive_keys(corpus);

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].label == Label::kPositive) todo.push_back(i);
  }

  struct Slot {
    std::optional<QCRecord> negative;
    std::string failure;
  };
  std::vector<Slot> slots(todo.size());

  const auto run_one = [&](std::size_t t) {
    const std::size_t index = todo[t];
    const QCRecord& record = corpus[index];
    const bool needs_depth = config.strategy == NegativeStrategy::kSameL1 ||
                             config.strategy == NegativeStrategy::kSiblingLeaf;
    if (needs_depth && record.path.depth() < 2) {
      slots[t].failure = "category path shallower than 2 levels";
      return;
    }
    std::optional<GenOutcome> outcome;
    switch (config.strategy) {
      case NegativeStrategy::kSameL1: outcome = gen_neg_same_l1(record, tree, positives, config, index); break;
      case NegativeStrategy::kSiblingLeaf: outcome = gen_neg_sibling_leaf(record, tree, positives, config, index); break;
      case NegativeStrategy::kCrossRoot: outcome = gen_neg_cross_root(record, tree, positives, config, index); break;
      case NegativeStrategy::kSyntheticQuery: outcome = gen_neg_synthetic_query(record, *generator, positives, config); break;
    }
    if (outcome->has_value()) {
      slots[t].negative = std::move(*outcome).value();
    } else if (outcome->error() == GenError::kGeneratorUnavailable) {
      // Only reachable on the single-threaded synthetic path.
      throw GeneratorUnavailable("query generator stopped answering at record " + std::to_string(index));
    } else {
      slots[t].failure = std::string(gen_error_name(outcome->error()));
    }
  };

  const unsigned threads = synthetic ? 1u : std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(todo.size())));
  if (threads <= 1) {
    for (std::size_t t = 0; t < todo.size(); ++t) run_one(t);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < todo.size(); t += threads) run_one(t);
      });
    }
  }

  for (std::size_t t = 0; t < todo.size(); ++t) {
    if (slots[t].negative) {
      batch.negatives.push_back(std::move(*slots[t].negative));
      batch.sources.push_back(todo[t]);
    } else {
      batch.diagnostics.push_back({todo[t], std::move(slots[t].failure)});
    }
  }
  return batch;
}

}  // namespace relmine
