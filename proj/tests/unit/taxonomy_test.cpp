#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "generators.hpp"
#include "relmine/errors.hpp"
#include "relmine/query_generator.hpp"
#include "relmine/random.hpp"
#include "relmine/taxonomy.hpp"

namespace relmine {
namespace {

CategoryPath P(const char* s) { return CategoryPath::parse(s); }

QCRecord positive(const char* query, const char* path) {
  return QCRecord{query, Language::kEn, P(path), Label::kPositive, Origin::kOriginal};
}

TaxonomyTree tree_of(std::vector<CategoryPath> paths) { return TaxonomyTree::build(paths); }

NegativeGenConfig cfg(NegativeStrategy s, std::uint64_t seed = 1, std::uint32_t resamples = 16) {
  return NegativeGenConfig{s, seed, resamples};
}

TEST(TaxonomyBuild, Examples) {
  const auto t = tree_of({P("E > A > H"), P("E > A > S"), P("E > T")});
  EXPECT_EQ(t.roots().size(), 1u);
  EXPECT_EQ(t.observed_leaves().size(), 3u);
  EXPECT_EQ(t.size(), 5u);

  const auto chain = tree_of({P("A > B > C > D")});
  EXPECT_EQ(chain.size(), 4u);
  EXPECT_EQ(chain.observed_leaves().size(), 1u);

  EXPECT_EQ(tree_of({P("E > A > H"), P("E > A > H")}).to_json(), tree_of({P("E > A > H")}).to_json());
  EXPECT_THROW(tree_of({}), PreconditionError);
}

TEST(TaxonomyBuild, NodesKnowTheirPaths) {
  const auto t = tree_of({P("E > A > H"), P("F")});
  const auto id = t.find(P("E > A"));
  ASSERT_TRUE(id);
  EXPECT_EQ(t.node(*id).path, P("E > A"));
  EXPECT_FALSE(t.node(*id).observed_leaf);
  ASSERT_TRUE(t.node(*id).parent);
  EXPECT_EQ(t.node(*t.node(*id).parent).path, P("E"));
  EXPECT_FALSE(t.find(P("E > B")));
}

TEST(TaxonomyBuildProperty, ObservedPathsReconstructInput) {
  testing::Rng rng = make_rng(51, 0);
  for (int trial = 0; trial < 300; ++trial) {
    auto paths = testing::random_taxonomy(rng);
    std::vector<CategoryPath> input = paths;
    for (int k = 0; k < 5; ++k) input.push_back(paths[testing::pick(rng, paths.size())]);
    for (std::size_t i = input.size(); i > 1; --i) std::swap(input[i - 1], input[testing::pick(rng, i)]);
    const auto t = TaxonomyTree::build(input);
    const auto observed = t.observed_paths();
    ASSERT_EQ(std::set<CategoryPath>(observed.begin(), observed.end()),
              std::set<CategoryPath>(paths.begin(), paths.end()));
    ASSERT_EQ(observed.size(), paths.size());
    ASSERT_EQ(t.to_json(), TaxonomyTree::build(paths).to_json());
    for (NodeId id = 0; id < t.size(); ++id) {
      const auto& n = t.node(id);
      if (n.parent) {
        ASSERT_EQ(n.path.prefix(n.path.depth() - 1), t.node(*n.parent).path);
        ASSERT_EQ(n.path.leaf(), n.name);
      } else {
        ASSERT_EQ(n.path.depth(), 1u);
      }
    }
  }
}

TEST(SameL1, PicksAnotherLeafUnderLevelOne) {
  const auto t = tree_of({P("Shoes > Athletic > Running > Sneakers"), P("Shoes > Athletic > Outdoor > HikingShoes"),
                          P("Shoes > Formal > Oxford")});
  const auto r = positive("sneakers", "Shoes > Athletic > Running > Sneakers");
  const auto out = gen_neg_same_l1(r, t, {}, cfg(NegativeStrategy::kSameL1));
  ASSERT_TRUE(out);
  EXPECT_EQ(out->path, P("Shoes > Athletic > Outdoor > HikingShoes"));
  EXPECT_EQ(out->label, Label::kNegative);
  EXPECT_EQ(out->origin, Origin::kGeneratedNegative);
  EXPECT_EQ(out->query, "sneakers");
}

TEST(SameL1, NoAlternativeAndCollision) {
  const auto t = tree_of({P("A > B > C"), P("A > X > Y")});
  const auto r = positive("q", "A > B > C");
  const auto none = gen_neg_same_l1(r, t, {}, cfg(NegativeStrategy::kSameL1));
  ASSERT_FALSE(none);
  EXPECT_EQ(none.error(), GenError::kNoAlternative);

  const auto t2 = tree_of({P("A > B > C"), P("A > B > D")});
  const KeySet positives = {canonical_key(r), canonical_key("Q", P("A > B > D"))};
  const auto collided = gen_neg_same_l1(r, t2, positives, cfg(NegativeStrategy::kSameL1));
  ASSERT_FALSE(collided);
  EXPECT_EQ(collided.error(), GenError::kCollisionExhausted);
}

TEST(SiblingLeaf, Examples) {
  const auto t = tree_of({P("E > A > Headphones"), P("E > A > Speakers"), P("E > B > Cables")});
  const auto r = positive("q", "E > A > Headphones");
  const auto out = gen_neg_sibling_leaf(r, t, {}, cfg(NegativeStrategy::kSiblingLeaf));
  ASSERT_TRUE(out);
  EXPECT_EQ(out->path, P("E > A > Speakers"));

  const auto lonely = gen_neg_sibling_leaf(positive("q", "E > B > Cables"), t, {}, cfg(NegativeStrategy::kSiblingLeaf));
  ASSERT_FALSE(lonely);
  EXPECT_EQ(lonely.error(), GenError::kNoAlternative);
}

TEST(SiblingLeaf, IgnoresSiblingsThatAreOnlyInternal) {
  const auto t = tree_of({P("E > A > H"), P("E > A > S > X")});
  const auto out = gen_neg_sibling_leaf(positive("q", "E > A > H"), t, {}, cfg(NegativeStrategy::kSiblingLeaf));
  ASSERT_FALSE(out);
  EXPECT_EQ(out.error(), GenError::kNoAlternative);
}

TEST(SiblingLeaf, UniformOverSiblings) {
  const auto t = tree_of({P("E > A > H"), P("E > A > S"), P("E > A > T")});
  const auto r = positive("q", "E > A > H");
  std::map<std::string, int> hits;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto out = gen_neg_sibling_leaf(r, t, {}, cfg(NegativeStrategy::kSiblingLeaf, seed));
    ASSERT_TRUE(out);
    ++hits[out->path.leaf()];
  }
  EXPECT_EQ(hits.count("H"), 0u);
  EXPECT_GE(hits["S"], 200);
  EXPECT_LE(hits["S"], 300);
  EXPECT_GE(hits["T"], 200);
  EXPECT_LE(hits["T"], 300);
}

TEST(SiblingLeaf, ResamplesPastCollisions) {
  const auto t = tree_of({P("E > A > H"), P("E > A > S"), P("E > A > T")});
  const auto r = positive("q", "E > A > H");
  const KeySet positives = {canonical_key(r), canonical_key("q", P("E > A > S"))};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto out = gen_neg_sibling_leaf(r, t, positives, cfg(NegativeStrategy::kSiblingLeaf, seed));
    ASSERT_TRUE(out);
    EXPECT_EQ(out->path, P("E > A > T"));
  }
  const auto exhausted = gen_neg_sibling_leaf(r, t, positives, cfg(NegativeStrategy::kSiblingLeaf, 3, 1));
  if (!exhausted) EXPECT_EQ(exhausted.error(), GenError::kCollisionExhausted);
}

TEST(CrossRoot, Examples) {
  const auto t = tree_of({P("Electronics > TV"), P("Fashion > Shoes"), P("Fashion > Bags")});
  const auto r = positive("q", "Electronics > TV");
  const auto a = gen_neg_cross_root(r, t, {}, cfg(NegativeStrategy::kCrossRoot, 9));
  const auto b = gen_neg_cross_root(r, t, {}, cfg(NegativeStrategy::kCrossRoot, 9));
  ASSERT_TRUE(a);
  EXPECT_EQ(a->path.level(0), "Fashion");
  EXPECT_EQ(a->path, b->path);

  const auto single = tree_of({P("E > A"), P("E > B")});
  const auto none = gen_neg_cross_root(positive("q", "E > A"), single, {}, cfg(NegativeStrategy::kCrossRoot));
  ASSERT_FALSE(none);
  EXPECT_EQ(none.error(), GenError::kNoAlternative);
}

TEST(PathStrategies, Preconditions) {
  const auto t = tree_of({P("E > A"), P("E > B"), P("F")});
  QCRecord neg = positive("q", "E > A");
  neg.label = Label::kNegative;
  EXPECT_THROW(gen_neg_sibling_leaf(neg, t, {}, cfg(NegativeStrategy::kSiblingLeaf)), PreconditionError);
  EXPECT_THROW(gen_neg_sibling_leaf(positive("q", "E > Z"), t, {}, cfg(NegativeStrategy::kSiblingLeaf)),
               PreconditionError);
  EXPECT_THROW(gen_neg_same_l1(positive("q", "F"), t, {}, cfg(NegativeStrategy::kSameL1)), PreconditionError);
  EXPECT_TRUE(gen_neg_cross_root(positive("q", "F"), t, {}, cfg(NegativeStrategy::kCrossRoot)));
  EXPECT_THROW(gen_neg_cross_root(positive("q", "F"), t, {}, cfg(NegativeStrategy::kCrossRoot, 1, 0)),
               PreconditionError);
}

// Structural postconditions over random trees, records and seeds.
void check_structure(NegativeStrategy strategy, std::uint64_t base_seed, int trials) {
  testing::Rng rng = make_rng(base_seed, 0);
  int produced = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const auto paths = testing::random_taxonomy(rng);
    const TaxonomyTree tree = TaxonomyTree::build(paths);
    std::vector<QCRecord> corpus;
    for (const auto& p : paths) {
      corpus.push_back(QCRecord{"q" + std::to_string(testing::pick(rng, 3)), Language::kEn, p,
                                testing::pick(rng, 4) ? Label::kPositive : Label::kNegative, Origin::kOriginal});
    }
    const KeySet positives = positive_keys(corpus);
    QCRecord record = corpus[testing::pick(rng, corpus.size())];
    record.label = Label::kPositive;
    KeySet with_record = positives;
    with_record.insert(canonical_key(record));
    if (strategy != NegativeStrategy::kCrossRoot && record.path.depth() < 2) continue;
    const NegativeGenConfig config{strategy, rng(), static_cast<std::uint32_t>(1 + testing::pick(rng, 16))};
    const std::uint64_t index = testing::pick(rng, 1000);
    GenOutcome out = strategy == NegativeStrategy::kSameL1
                         ? gen_neg_same_l1(record, tree, with_record, config, index)
                     : strategy == NegativeStrategy::kSiblingLeaf
                         ? gen_neg_sibling_leaf(record, tree, with_record, config, index)
                         : gen_neg_cross_root(record, tree, with_record, config, index);
    if (!out) continue;
    ++produced;
    const CategoryPath& a = record.path;
    const CategoryPath& b = out->path;
    ASSERT_EQ(out->label, Label::kNegative);
    ASSERT_EQ(out->origin, Origin::kGeneratedNegative);
    ASSERT_EQ(out->query, record.query);
    ASSERT_FALSE(with_record.count(canonical_key(*out)));
    ASSERT_TRUE(tree.find(b) && tree.node(*tree.find(b)).observed_leaf);
    switch (strategy) {
      case NegativeStrategy::kSameL1:
        ASSERT_GE(b.depth(), 2u);
        ASSERT_EQ(a.prefix(2), b.prefix(2));
        ASSERT_NE(a, b);
        break;
      case NegativeStrategy::kSiblingLeaf:
        ASSERT_EQ(a.depth(), b.depth());
        ASSERT_EQ(a.prefix(a.depth() - 1), b.prefix(b.depth() - 1));
        ASSERT_NE(a.leaf(), b.leaf());
        break;
      default:
        ASSERT_NE(a.level(0), b.level(0));
        break;
    }
    GenOutcome again = strategy == NegativeStrategy::kSameL1
                           ? gen_neg_same_l1(record, tree, with_record, config, index)
                       : strategy == NegativeStrategy::kSiblingLeaf
                           ? gen_neg_sibling_leaf(record, tree, with_record, config, index)
                           : gen_neg_cross_root(record, tree, with_record, config, index);
    ASSERT_TRUE(again);
    ASSERT_EQ(*again, *out);
  }
  EXPECT_GT(produced, trials / 4);
}

TEST(NegativeStructureProperty, SameL1) { check_structure(NegativeStrategy::kSameL1, 61, 1500); }
TEST(NegativeStructureProperty, SiblingLeaf) { check_structure(NegativeStrategy::kSiblingLeaf, 62, 1500); }
TEST(NegativeStructureProperty, CrossRoot) { check_structure(NegativeStrategy::kCrossRoot, 63, 1500); }

class ScriptedGenerator final : public QueryGenerator {
 public:
  explicit ScriptedGenerator(std::vector<std::string> answers) : answers_(std::move(answers)) {}
  std::string generate(const GenerationRequest& request) override {
    requests.push_back(request);
    if (answers_.empty()) return request.query;
    std::string next = answers_.front();
    answers_.erase(answers_.begin());
    return next;
  }
  std::vector<GenerationRequest> requests;

 private:
  std::vector<std::string> answers_;
};

TEST(SyntheticQuery, StubKeepsPath) {
  StubQueryGenerator stub;
  const auto r = positive("wireless headphones", "E > A > H");
  const auto out = gen_neg_synthetic_query(r, stub, {canonical_key(r)}, cfg(NegativeStrategy::kSyntheticQuery));
  ASSERT_TRUE(out);
  EXPECT_EQ(out->query, "wireless headphones unrelated-token");
  EXPECT_EQ(out->path, r.path);
  EXPECT_EQ(out->label, Label::kNegative);
  EXPECT_EQ(out->origin, Origin::kGeneratedNegative);
}

TEST(SyntheticQuery, EchoExhausts) {
  ScriptedGenerator echo({});
  const auto r = positive("shoes", "E > A");
  const auto out = gen_neg_synthetic_query(r, echo, {}, cfg(NegativeStrategy::kSyntheticQuery, 1, 5));
  ASSERT_FALSE(out);
  EXPECT_EQ(out.error(), GenError::kCollisionExhausted);
  ASSERT_EQ(echo.requests.size(), 5u);
  EXPECT_EQ(echo.requests[4].attempt, 4u);
}

TEST(SyntheticQuery, RejectsCollisionThenAccepts) {
  ScriptedGenerator gen({"  BOOTS ", "", "sandals"});
  const auto r = positive("shoes", "E > A");
  const KeySet positives = {canonical_key(r), canonical_key("boots", r.path)};
  const auto out = gen_neg_synthetic_query(r, gen, positives, cfg(NegativeStrategy::kSyntheticQuery));
  ASSERT_TRUE(out);
  EXPECT_EQ(out->query, "sandals");
  EXPECT_EQ(gen.requests.size(), 3u);
}

class DeadGenerator final : public QueryGenerator {
 public:
  std::string generate(const GenerationRequest&) override { throw GeneratorUnavailable("gone"); }
};

TEST(SyntheticQuery, UnavailableGenerator) {
  DeadGenerator dead;
  const auto out = gen_neg_synthetic_query(positive("q", "A"), dead, {}, cfg(NegativeStrategy::kSyntheticQuery));
  ASSERT_FALSE(out);
  EXPECT_EQ(out.error(), GenError::kGeneratorUnavailable);
  std::vector<QCRecord> corpus = {positive("q", "A")};
  EXPECT_THROW(generate_negatives(corpus, cfg(NegativeStrategy::kSyntheticQuery), &dead), GeneratorUnavailable);
}

TEST(GenerateNegatives, IndependentOfWorkerCount) {
  testing::Rng rng = make_rng(71, 0);
  const auto paths = testing::random_taxonomy(rng, 4, 5, 4);
  std::vector<QCRecord> corpus;
  for (int i = 0; i < 2000; ++i) {
    corpus.push_back(QCRecord{"query " + std::to_string(i % 300), Language::kEn, paths[testing::pick(rng, paths.size())],
                              testing::pick(rng, 3) ? Label::kPositive : Label::kNegative, Origin::kOriginal});
  }
  for (auto strategy : {NegativeStrategy::kSameL1, NegativeStrategy::kSiblingLeaf, NegativeStrategy::kCrossRoot}) {
    const auto one = generate_negatives(corpus, cfg(strategy, 5), nullptr, 1);
    for (unsigned workers : {2u, 3u, 8u}) {
      const auto many = generate_negatives(corpus, cfg(strategy, 5), nullptr, workers);
      ASSERT_EQ(many.negatives, one.negatives);
      ASSERT_EQ(many.sources, one.sources);
      ASSERT_EQ(many.diagnostics, one.diagnostics);
    }
    const auto positives = positive_keys(corpus);
    for (std::size_t i = 0; i < one.negatives.size(); ++i) {
      ASSERT_EQ(corpus[one.sources[i]].label, Label::kPositive);
      ASSERT_FALSE(positives.count(canonical_key(one.negatives[i])));
    }
    ASSERT_EQ(one.negatives.size() + one.diagnostics.size(),
              static_cast<std::size_t>(std::count_if(corpus.begin(), corpus.end(),
                                                     [](const QCRecord& r) { return r.label == Label::kPositive; })));
  }
}

TEST(GenerateNegatives, ShallowPathsBecomeDiagnostics) {
  std::vector<QCRecord> corpus = {positive("a", "E"), positive("b", "E > A"), positive("c", "E > B")};
  const auto out = generate_negatives(corpus, cfg(NegativeStrategy::kSiblingLeaf));
  ASSERT_EQ(out.diagnostics.size(), 1u);
  EXPECT_EQ(out.diagnostics[0].position, 0u);
  EXPECT_EQ(out.negatives.size(), 2u);
}

TEST(Strategy, Names) {
  for (auto s : {NegativeStrategy::kSameL1, NegativeStrategy::kSiblingLeaf, NegativeStrategy::kCrossRoot,
                 NegativeStrategy::kSyntheticQuery}) {
    EXPECT_EQ(parse_strategy(strategy_name(s)), s);
  }
  EXPECT_FALSE(parse_strategy("random"));
}

}  // namespace
}  // namespace relmine
