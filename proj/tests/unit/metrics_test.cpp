#include <gtest/gtest.h>

#include <fstream>

#include "generators.hpp"
#include "relmine/distribution.hpp"
#include "relmine/errors.hpp"
#include "relmine/metrics.hpp"
#include "relmine/random.hpp"
#include "relmine/record_io.hpp"

namespace relmine {
namespace {

ConfusionCounts counts_of(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn, std::uint64_t tn) {
  std::vector<int> gold;
  std::vector<int> pred;
  const auto add = [&](std::uint64_t n, int g, int p) {
    for (std::uint64_t i = 0; i < n; ++i) {
      gold.push_back(g);
      pred.push_back(p);
    }
  };
  add(tp, 1, 1);
  add(fp, 0, 1);
  add(fn, 1, 0);
  add(tn, 0, 0);
  return confusion_counts(std::span<const int>(gold), std::span<const int>(pred));
}

TEST(Confusion, HandCases) {
  const auto c = counts_of(2, 1, 1, 3);
  EXPECT_EQ(c, (ConfusionCounts{2, 1, 1, 3}));
  const auto s = score_positive(c);
  EXPECT_DOUBLE_EQ(s.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.recall, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.f1, 2.0 / 3.0);

  EXPECT_DOUBLE_EQ(f1_positive(counts_of(5, 0, 0, 5)), 1.0);
  EXPECT_DOUBLE_EQ(f1_positive(counts_of(0, 3, 2, 1)), 0.0);
  EXPECT_DOUBLE_EQ(f1_positive(counts_of(0, 0, 0, 4)), 0.0);
  EXPECT_DOUBLE_EQ(f1_positive(ConfusionCounts{}), 0.0);

  const auto half = score_positive(ConfusionCounts{1, 0, 1, 0});
  EXPECT_DOUBLE_EQ(half.precision, 1.0);
  EXPECT_DOUBLE_EQ(half.recall, 0.5);
  EXPECT_DOUBLE_EQ(half.f1, 2.0 / 3.0);
}

TEST(Confusion, RejectsBadInput) {
  const std::vector<int> g{1, 0};
  const std::vector<int> p{1};
  EXPECT_THROW(confusion_counts(std::span<const int>(g), std::span<const int>(p)), ValidationError);
  const std::vector<int> bad{1, 2};
  EXPECT_THROW(confusion_counts(std::span<const int>(g), std::span<const int>(bad)), ValidationError);
}

TEST(AverageF1, Values) {
  const std::vector<double> tasks{0.8930, 0.8779};
  EXPECT_NEAR(average_f1(tasks), 0.88545, 1e-12);
  EXPECT_EQ(average_f1({}), 0.0);
}

TEST(EvaluateTask, PerLanguageMicroMacro) {
  const std::vector<Language> langs{Language::kEn, Language::kEn, Language::kFr, Language::kFr};
  const std::vector<Label> gold{Label::kPositive, Label::kNegative, Label::kPositive, Label::kPositive};
  const std::vector<Label> pred{Label::kPositive, Label::kNegative, Label::kNegative, Label::kNegative};
  const auto r = evaluate_task(Task::kQC, langs, gold, pred);
  EXPECT_DOUBLE_EQ(r.per_language.at(Language::kEn).scores.f1, 1.0);
  EXPECT_DOUBLE_EQ(r.per_language.at(Language::kFr).scores.f1, 0.0);
  EXPECT_DOUBLE_EQ(r.macro.f1, 0.5);
  EXPECT_EQ(r.micro.counts, (ConfusionCounts{1, 0, 2, 1}));
  EXPECT_DOUBLE_EQ(r.micro.scores.f1, 0.5);

  const auto j = r.to_json();
  EXPECT_EQ(j.at("task"), "qc");
  EXPECT_EQ(j.at("per_language").at("fr").at("fn"), 2u);
  const auto table = r.table();
  EXPECT_NE(table.find("micro"), std::string::npos);
  EXPECT_NE(table.find("macro"), std::string::npos);
  EXPECT_NE(table.find("fr"), std::string::npos);

  EXPECT_THROW(evaluate_task(Task::kQC, langs, gold, std::span<const Label>(pred).first(3)), ValidationError);
}

TEST(EvaluateTask, SingleLanguageEqualsTask) {
  const std::vector<QIRecord> gold{{"a", Language::kTh, "1", "t", Label::kPositive},
                                   {"b", Language::kTh, "2", "t", Label::kNegative},
                                   {"c", Language::kTh, "3", "t", Label::kPositive}};
  const std::vector<Label> pred{Label::kPositive, Label::kPositive, Label::kNegative};
  const auto r = evaluate_task(std::span<const QIRecord>(gold), pred);
  EXPECT_EQ(r.task, Task::kQI);
  EXPECT_DOUBLE_EQ(r.per_language.at(Language::kTh).scores.f1, r.micro.scores.f1);
  EXPECT_DOUBLE_EQ(r.macro.f1, r.micro.scores.f1);
}

TEST(MetricsProperty, PermutationInvariantAndShardAdditive) {
  testing::Rng rng = make_rng(303, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + testing::pick(rng, 500);
    std::vector<Label> gold(n);
    std::vector<Label> pred(n);
    std::vector<Language> langs(n);
    for (std::size_t i = 0; i < n; ++i) {
      gold[i] = testing::pick(rng, 2) ? Label::kPositive : Label::kNegative;
      pred[i] = testing::pick(rng, 2) ? Label::kPositive : Label::kNegative;
      langs[i] = kAllLanguages[testing::pick(rng, 4)];
    }
    const auto whole = confusion_counts(gold, pred);
    ASSERT_EQ(whole.total(), n);

    std::vector<Label> g2 = gold;
    std::vector<Label> p2 = pred;
    for (std::size_t i = n; i > 1; --i) {
      const std::size_t j = testing::pick(rng, i);
      std::swap(g2[i - 1], g2[j]);
      std::swap(p2[i - 1], p2[j]);
    }
    ASSERT_EQ(confusion_counts(g2, p2), whole);

    const std::size_t shards = 1 + testing::pick(rng, 7);
    std::vector<std::vector<Label>> sg(shards);
    std::vector<std::vector<Label>> sp(shards);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t s = testing::pick(rng, shards);
      sg[s].push_back(gold[i]);
      sp[s].push_back(pred[i]);
    }
    ConfusionCounts summed;
    for (std::size_t s = 0; s < shards; ++s) summed += confusion_counts(sg[s], sp[s]);
    ASSERT_EQ(summed, whole);
    ASSERT_DOUBLE_EQ(f1_positive(summed), f1_positive(whole));

    const auto report = evaluate_task(Task::kQC, langs, gold, pred);
    ASSERT_EQ(report.micro.counts, whole);
    for (const auto& [lang, m] : report.per_language) {
      ASSERT_GE(m.scores.f1, 0.0);
      ASSERT_LE(m.scores.f1, 1.0);
    }
  }
}

TEST(Predictions, ReadWriteAndErrors) {
  testing::TempDir dir;
  const std::vector<Label> labels{Label::kPositive, Label::kNegative, Label::kPositive};
  write_predictions(dir / "p.tsv", labels);
  EXPECT_EQ(read_predictions(dir / "p.tsv", 3), labels);

  write_text_file(dir / "shuffled.tsv", "index\tlabel\n2\t1\n0\t1\n1\t0\n");
  EXPECT_EQ(read_predictions(dir / "shuffled.tsv", 3), labels);

  write_text_file(dir / "nohdr.tsv", "0\t1\n");
  EXPECT_THROW(read_predictions(dir / "nohdr.tsv", 1), FormatError);
  write_text_file(dir / "dup.tsv", "index\tlabel\n0\t1\n0\t0\n");
  EXPECT_THROW(read_predictions(dir / "dup.tsv", 2), ValidationError);
  write_text_file(dir / "range.tsv", "index\tlabel\n5\t1\n");
  EXPECT_THROW(read_predictions(dir / "range.tsv", 1), ValidationError);
  write_text_file(dir / "label.tsv", "index\tlabel\n0\t2\n");
  EXPECT_THROW(read_predictions(dir / "label.tsv", 1), FormatError);
  EXPECT_THROW(read_predictions(dir / "p.tsv", 4), ValidationError);
  EXPECT_THROW(read_predictions(dir / "missing.tsv", 1), IoError);
}

TEST(Predictions, EvaluateFiles) {
  testing::TempDir dir;
  const std::vector<QCRecord> gold{{"a", Language::kEn, CategoryPath::parse("A"), Label::kPositive},
                                   {"b", Language::kFr, CategoryPath::parse("A"), Label::kNegative}};
  write_qc_file(dir / "gold.tsv", gold);
  write_predictions(dir / "pred.tsv", std::vector<Label>{Label::kPositive, Label::kPositive});
  const auto r = evaluate_files(Task::kQC, dir / "gold.tsv", dir / "pred.tsv");
  EXPECT_EQ(r.micro.counts, (ConfusionCounts{1, 1, 0, 0}));

  write_text_file(dir / "badgold.tsv", read_text_file(dir / "gold.tsv") + "x\ten\tA\t7\n");
  EXPECT_THROW(evaluate_files(Task::kQC, dir / "badgold.tsv", dir / "pred.tsv"), ValidationError);
}

TEST(Distribution, ReportAndSvg) {
  const auto empty = distribution_report(std::span<const QCRecord>{});
  EXPECT_EQ(empty.stats.totals().total(), 0u);
  EXPECT_NE(empty.svg.find("<svg"), std::string::npos);

  const auto fixture = testing::qc_fixture(testing::qc_published_counts(), 1);
  const auto report = distribution_report(std::span<const QCRecord>(fixture), "QC <before>");
  EXPECT_EQ(report.stats.totals().positives, 206852u);
  EXPECT_EQ(report.stats.totals().negatives, 93148u);
  EXPECT_NE(report.svg.find("QC &lt;before&gt;"), std::string::npos);
  EXPECT_NE(report.svg.find("class=\"positive\" data-language=\"pt\" data-count=\"25852\""), std::string::npos);
  EXPECT_NE(report.svg.find("class=\"negative\" data-language=\"pt\" data-count=\"12148\""), std::string::npos);
  EXPECT_EQ(report.svg, render_distribution_svg(report.stats, "QC <before>"));

  const auto qi = testing::qi_fixture(testing::qi_published_counts(), 2);
  const auto qi_report = distribution_report(std::span<const QIRecord>(qi));
  EXPECT_EQ(qi_report.stats.totals().positives, 212199u);
  EXPECT_EQ(qi_report.stats.totals().negatives, 127801u);
  EXPECT_EQ(qi_report.stats.totals().total(), 340000u);
}

}  // namespace
}  // namespace relmine
