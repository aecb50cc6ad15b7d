#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>

#include "generators.hpp"
#include "oracles.hpp"
#include "relmine/cleanse.hpp"
#include "relmine/errors.hpp"
#include "relmine/random.hpp"

namespace relmine {
namespace {

QCRecord rec(std::string q, const char* path, Label label, Origin origin = Origin::kOriginal) {
  return QCRecord{std::move(q), Language::kEn, CategoryPath::parse(path), label, origin};
}

constexpr Label P = Label::kPositive;
constexpr Label N = Label::kNegative;

TEST(RemoveConflicts, BothLabelsDropWholeGroup) {
  std::vector<QCRecord> rs = {rec("shoes", "A > X", P), rec("shoes", "A > X", N)};
  const auto r = remove_conflicts(rs);
  EXPECT_TRUE(r.kept.empty());
  ASSERT_EQ(r.removed_groups.size(), 1u);
  EXPECT_EQ(r.removed_groups[0].indices, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(r.removed_groups[0].key.norm_query, "shoes");
}

TEST(RemoveConflicts, DifferentTargetsKept) {
  std::vector<QCRecord> rs = {rec("shoes", "A > X", P), rec("shoes", "A > Y", N)};
  EXPECT_EQ(remove_conflicts(rs).kept, rs);
}

TEST(RemoveConflicts, FoldedKeysCollide) {
  std::vector<QCRecord> rs = {rec("shoes", "A > X", P), rec("SHOES ", "A > X", N)};
  EXPECT_TRUE(remove_conflicts(rs).kept.empty());
}

TEST(RemoveConflicts, GroupOfThreeAllRemovedOrderPreserved) {
  std::vector<QCRecord> rs = {rec("a", "X", P), rec("b", "X", P), rec("a", "X", P), rec("c", "X", N),
                              rec(" A", "X", N)};
  const auto r = remove_conflicts(rs);
  EXPECT_EQ(r.kept, (std::vector<QCRecord>{rs[1], rs[3]}));
  ASSERT_EQ(r.removed_groups.size(), 1u);
  EXPECT_EQ(r.removed_groups[0].indices, (std::vector<std::size_t>{0, 2, 4}));
}

TEST(RemoveConflicts, QiKeyedByItemId) {
  std::vector<QIRecord> rs = {{"q", Language::kEn, "I1", "T", P}, {"Q", Language::kEn, "I1", "T", N},
                              {"q", Language::kEn, "I2", "T", N}};
  const auto r = remove_conflicts(rs);
  ASSERT_EQ(r.kept.size(), 1u);
  EXPECT_EQ(r.kept[0].item_id, "I2");
}

TEST(Dedup, Examples) {
  const auto a = rec("shoes", "A", P);
  EXPECT_EQ(dedup(std::vector<QCRecord>{a, a}).size(), 1u);
  EXPECT_EQ(dedup(std::vector<QCRecord>{a, rec("shoes", "A", P, Origin::kTranslated)}),
            std::vector<QCRecord>{a});
  const auto b = rec("boots", "A", P);
  EXPECT_EQ(dedup(std::vector<QCRecord>{a, a, b, a}), (std::vector<QCRecord>{a, b}));
}

TEST(FilterNumeric, Examples) {
  std::vector<QCRecord> rs = {rec("12345", "A", P), rec("3 in 1 charger", "A", P), rec("501", "A", N),
                              rec("12-34", "A", N)};
  const auto r = filter_numeric(rs, Allowlist{"501"});
  EXPECT_EQ(r.kept, (std::vector<QCRecord>{rs[1], rs[2]}));
  EXPECT_EQ(r.removed, (std::vector<QCRecord>{rs[0], rs[3]}));
  EXPECT_EQ(r.allowlisted_kept, 1u);

  const auto strict = filter_numeric(rs, {}, text::NumericRule::kStrict);
  EXPECT_EQ(strict.removed, (std::vector<QCRecord>{rs[0], rs[2]}));
}

TEST(Allowlist, LoadsNormalizedLines) {
  testing::TempDir dir;
  std::ofstream(dir / "allow.txt") << "501\n\n  1 2 3  \nABC\n";
  const Allowlist a = load_allowlist(dir / "allow.txt");
  EXPECT_EQ(a, (Allowlist{"501", "1 2 3", "abc"}));
  EXPECT_THROW(load_allowlist(dir / "missing.txt"), IoError);
}

TEST(Cleanse, ReportReconcilesAndJsonIsStable) {
  std::vector<QCRecord> rs = {rec("a", "X", P), rec("a", "X", N), rec("b", "X", P), rec("B", "X", P),
                              rec("99", "X", P), rec("501", "X", P)};
  CleanseOptions o;
  o.allowlist = {"501"};
  const auto r = cleanse(rs, o);
  EXPECT_EQ(r.report.input, 6u);
  EXPECT_EQ(r.report.conflicts_removed, 2u);
  EXPECT_EQ(r.report.duplicates_removed, 1u);
  EXPECT_EQ(r.report.numeric_removed, 1u);
  EXPECT_EQ(r.report.allowlisted_kept, 1u);
  EXPECT_EQ(r.report.kept, 2u);
  EXPECT_TRUE(r.report.reconciles());
  EXPECT_EQ(r.report.to_json().dump(),
            R"({"allowlisted_kept":1,"conflicts_removed":2,"duplicates_removed":1,"input":6,"kept":2,)"
            R"("numeric_removed":1})");
}

TEST(Cleanse, StagesCanBeDisabled) {
  std::vector<QCRecord> rs = {rec("a", "X", P), rec("a", "X", N), rec("7", "X", P)};
  CleanseOptions o;
  o.remove_conflicts = false;
  o.filter_numeric = false;
  const auto r = cleanse(rs, o);
  EXPECT_EQ(r.records, rs);
  EXPECT_TRUE(r.report.reconciles());
}

TEST(CleanseProperty, StagesAreIdempotent) {
  testing::Rng rng = make_rng(41, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rs = testing::random_qc_corpus(rng, testing::pick(rng, 120));
    const auto c1 = remove_conflicts(rs).kept;
    ASSERT_EQ(remove_conflicts(c1).kept, c1);
    const auto d1 = dedup(rs);
    ASSERT_EQ(dedup(d1), d1);
    const auto n1 = filter_numeric(rs, {}).kept;
    ASSERT_EQ(filter_numeric(n1, {}).kept, n1);
    const auto full = cleanse(rs, CleanseOptions{});
    ASSERT_TRUE(full.report.reconciles());
    const auto twice = cleanse(full.records, CleanseOptions{});
    ASSERT_EQ(twice.records, full.records);
    ASSERT_EQ(twice.report.kept, full.report.kept);
  }
}

TEST(CleanseProperty, MatchesQuadraticReference) {
  testing::Rng rng = make_rng(42, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rs = testing::random_qc_corpus(rng, testing::pick(rng, 300));
    Allowlist allow;
    if (testing::pick(rng, 2)) allow = {"7", "12-3", "30"};
    CleanseOptions o;
    o.allowlist = allow;
    const auto got = cleanse(rs, o);
    const auto want = testing::reference_cleanse(rs, {allow.begin(), allow.end()});
    ASSERT_EQ(got.records, want.kept);
    ASSERT_EQ(got.report.conflicts_removed, want.conflicts_removed);
    ASSERT_EQ(got.report.duplicates_removed, want.duplicates_removed);
    ASSERT_EQ(got.report.numeric_removed, want.numeric_removed);
    ASSERT_EQ(got.report.allowlisted_kept, want.allowlisted_kept);
  }
}

TEST(CleanseProperty, PlantedCorpusCounts) {
  const auto planted = testing::planted_cleanse_corpus(7);
  ASSERT_EQ(planted.records.size(), 10000u);
  CleanseOptions o;
  o.allowlist = {planted.allowlist.begin(), planted.allowlist.end()};
  const auto r = cleanse(planted.records, o);
  EXPECT_EQ(r.report.conflicts_removed, planted.conflicts);
  EXPECT_EQ(r.report.duplicates_removed, planted.duplicates);
  EXPECT_EQ(r.report.numeric_removed, planted.numeric_removed);
  EXPECT_EQ(r.report.allowlisted_kept, planted.allowlisted);
  EXPECT_EQ(r.report.kept, planted.kept);
}

TEST(LanguageStats, CountsAndCsv) {
  std::vector<QCRecord> rs = {rec("a", "X", P), rec("b", "X", N), rec("c", "X", P)};
  rs[1].language = Language::kJa;
  const LabelStats s = language_stats(rs);
  EXPECT_EQ(s.of(Language::kEn), (LabelCounts{2, 0}));
  EXPECT_EQ(s.of(Language::kJa), (LabelCounts{0, 1}));
  EXPECT_EQ(s.of(Language::kFr), (LabelCounts{0, 0}));
  EXPECT_EQ(s.totals(), (LabelCounts{2, 1}));
  EXPECT_EQ(s.to_csv(), "language,positives,negatives,total\nen,2,0,2\nja,0,1,1\n");
  EXPECT_EQ(s.to_json().dump(),
            R"({"languages":{"en":{"negatives":0,"positives":2,"total":2},"ja":{"negatives":1,"positives":0,)"
            R"("total":1}},"totals":{"negatives":1,"positives":2,"total":3}})");
}

TEST(LanguageStats, EmptyInput) {
  const LabelStats s = language_stats(std::vector<QCRecord>{});
  EXPECT_TRUE(s.per_language().empty());
  EXPECT_EQ(s.totals(), (LabelCounts{0, 0}));
}

TEST(LanguageStats, PublishedTotals) {
  const auto qc = testing::qc_fixture(testing::qc_published_counts(), 1);
  const auto qcs = language_stats(qc);
  EXPECT_EQ(qcs.totals(), (LabelCounts{206852, 93148}));
  EXPECT_EQ(qcs.totals().total(), 300000u);
  const auto qi = testing::qi_fixture(testing::qi_published_counts(), 1);
  const auto qis = language_stats(qi);
  EXPECT_EQ(qis.totals(), (LabelCounts{212199, 127801}));
  EXPECT_EQ(qis.totals().total(), 340000u);
}

TEST(LanguageStatsProperty, PermutationInvariantAndShardAdditive) {
  testing::Rng rng = make_rng(43, 0);
  for (int trial = 0; trial < 100; ++trial) {
    auto rs = testing::random_qc_corpus(rng, testing::pick(rng, 500));
    const LabelStats whole = language_stats(rs);
    std::vector<QCRecord> shuffled = rs;
    for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[testing::pick(rng, i)]);
    ASSERT_EQ(language_stats(shuffled), whole);
    const std::size_t shards = 1 + testing::pick(rng, 6);
    std::vector<std::vector<QCRecord>> parts(shards);
    for (const auto& r : rs) parts[testing::pick(rng, shards)].push_back(r);
    LabelStats sum;
    for (const auto& p : parts) sum += language_stats(p);
    ASSERT_EQ(sum, whole);
  }
}

}  // namespace
}  // namespace relmine
