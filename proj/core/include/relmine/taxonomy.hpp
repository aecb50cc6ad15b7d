#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "relmine/category_path.hpp"
#include "relmine/expected.hpp"
#include "relmine/query_generator.hpp"
#include "relmine/random.hpp"
#include "relmine/record_io.hpp"
#include "relmine/records.hpp"

namespace relmine {

using NodeId = std::uint32_t;

/// Category forest assembled from observed paths. Children are ordered by
/// name, so traversal order (and therefore sampling) does not depend on the
/// order paths were supplied in.
class TaxonomyTree {
 public:
  struct Node {
    std::string name;
    CategoryPath path;
    std::optional<NodeId> parent;
    std::map<std::string, NodeId> children;
    /// Some input path ends exactly here.
    bool observed_leaf = false;
    /// Observed leaves of this subtree are observed_leaves()[leaf_begin, leaf_end).
    std::size_t leaf_begin = 0;
    std::size_t leaf_end = 0;
  };

  /// Throws PreconditionError when `paths` is empty.
  static TaxonomyTree build(std::span<const CategoryPath> paths);

  std::size_t size() const noexcept { return nodes_.size(); }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  /// Root ids, by name.
  std::vector<NodeId> roots() const;
  std::optional<NodeId> find(const CategoryPath& path) const;

  /// Observed-leaf nodes in pre-order.
  std::span<const NodeId> observed_leaves() const noexcept { return leaves_; }
  std::vector<CategoryPath> observed_paths() const;
  /// Position of an observed leaf within observed_leaves().
  std::size_t leaf_position(NodeId id) const;

  nlohmann::json to_json() const;

 private:
  std::vector<Node> nodes_;
  std::map<std::string, NodeId> roots_;
  std::vector<NodeId> leaves_;
  std::vector<std::size_t> leaf_position_;
};

enum class NegativeStrategy {
  /// Any other observed leaf under the record's level-1 node.
  kSameL1,
  /// Another child of the record's parent that is an observed leaf.
  kSiblingLeaf,
  /// Any observed leaf under a different root.
  kCrossRoot,
  /// Keep the path, replace the query via a QueryGenerator.
  kSyntheticQuery,
};

std::string_view strategy_name(NegativeStrategy s) noexcept;
std::optional<NegativeStrategy> parse_strategy(std::string_view name) noexcept;

struct NegativeGenConfig {
  NegativeStrategy strategy = NegativeStrategy::kSiblingLeaf;
  std::uint64_t seed = kDefaultSeed;
  /// Draws (or generator requests) per record before giving up.
  std::uint32_t max_resamples = 16;
};

enum class GenError { kNoAlternative, kCollisionExhausted, kGeneratorUnavailable };

std::string_view gen_error_name(GenError e) noexcept;

using GenOutcome = Expected<QCRecord, GenError>;

// Path strategies. Preconditions (PreconditionError otherwise): the record is
// positive and its path is in the tree; same-l1 and sibling-leaf also need
// depth >= 2. Candidates are drawn uniformly without replacement; a candidate
// whose (query, path) key is in `positives` is rejected and another drawn.
// `record_index` selects the random stream, making output independent of
// processing order.
GenOutcome gen_neg_same_l1(const QCRecord& record, const TaxonomyTree& tree, const KeySet& positives,
                           const NegativeGenConfig& config, std::uint64_t record_index = 0);
GenOutcome gen_neg_sibling_leaf(const QCRecord& record, const TaxonomyTree& tree, const KeySet& positives,
                                const NegativeGenConfig& config, std::uint64_t record_index = 0);
GenOutcome gen_neg_cross_root(const QCRecord& record, const TaxonomyTree& tree, const KeySet& positives,
                              const NegativeGenConfig& config, std::uint64_t record_index = 0);

/// Rejects generator output that is blank, unwritable, equal to the original
/// query after normalization, or colliding with a positive key.
GenOutcome gen_neg_synthetic_query(const QCRecord& record, QueryGenerator& generator, const KeySet& positives,
                                   const NegativeGenConfig& config);

struct NegativeBatch {
  std::vector<QCRecord> negatives;
  std::vector<std::size_t> sources;      // corpus index of each negative's positive
  std::vector<Diagnostic> diagnostics;  // position = corpus index
};

/// Applies the configured strategy to every positive in `corpus`, using the
/// taxonomy and positive keys of the corpus itself. `generator` is required
/// for the synthetic strategy, which always runs on one thread; a generator
/// that stops answering throws GeneratorUnavailable. Output is ordered by
/// corpus index whatever the worker count.
NegativeBatch generate_negatives(std::span<const QCRecord> corpus, const NegativeGenConfig& config,
                                 QueryGenerator* generator = nullptr, unsigned workers = 1);

}  // namespace relmine
