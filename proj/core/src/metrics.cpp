#include "relmine/metrics.hpp"

#include <cstdio>
#include <sstream>

#include "relmine/errors.hpp"
#include "relmine/record_io.hpp"

namespace relmine {
namespace {

double ratio(std::uint64_t num, std::uint64_t den) noexcept {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

nlohmann::json scores_json(const Scores& s) {
  return {{"f1", s.f1}, {"precision", s.precision}, {"recall", s.recall}};
}

nlohmann::json metrics_json(const LanguageMetrics& m) {
  nlohmann::json j = scores_json(m.scores);
  j["fn"] = m.counts.fn;
  j["fp"] = m.counts.fp;
  j["tn"] = m.counts.tn;
  j["tp"] = m.counts.tp;
  j["n"] = m.counts.total();
  return j;
}

template <typename Record>
MetricsReport evaluate_records(Task task, std::span<const Record> gold, std::span<const Label> predicted) {
  std::vector<Language> languages;
  std::vector<Label> labels;
  languages.reserve(gold.size());
  labels.reserve(gold.size());
  for (const auto& r : gold) {
    languages.push_back(r.language);
    labels.push_back(r.label);
  }
  return evaluate_task(task, languages, labels, predicted);
}

}  // namespace

ConfusionCounts confusion_counts(std::span<const Label> gold, std::span<const Label> predicted) {
  if (gold.size() != predicted.size()) {
    throw ValidationError("gold has " + std::to_string(gold.size()) + " labels, predictions " +
                          std::to_string(predicted.size()));
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool g = gold[i] == Label::kPositive;
    const bool p = predicted[i] == Label::kPositive;
    if (g && p) ++c.tp;
    else if (!g && p) ++c.fp;
    else if (g && !p) ++c.fn;
    else ++c.tn;
  }
  return c;
}

ConfusionCounts confusion_counts(std::span<const int> gold, std::span<const int> predicted) {
  const auto convert = [](std::span<const int> in, const char* what) {
    std::vector<Label> out;
    out.reserve(in.size());
    for (int v : in) {
      if (v != 0 && v != 1) throw ValidationError(std::string("invalid ") + what + " label " + std::to_string(v));
      out.push_back(static_cast<Label>(v));
    }
    return out;
  };
  return confusion_counts(convert(gold, "gold"), convert(predicted, "predicted"));
}

Scores score_positive(const ConfusionCounts& c) noexcept {
  Scores s;
  s.precision = ratio(c.tp, c.tp + c.fp);
  s.recall = ratio(c.tp, c.tp + c.fn);
  const double sum = s.precision + s.recall;
  s.f1 = sum == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / sum;
  return s;
}

MetricsReport evaluate_task(Task task, std::span<const Language> languages, std::span<const Label> gold,
                            std::span<const Label> predicted) {
  if (languages.size() != gold.size()) throw ValidationError("language and gold label counts differ");
  if (gold.size() != predicted.size()) {
    throw ValidationError("gold has " + std::to_string(gold.size()) + " records, predictions " +
                          std::to_string(predicted.size()));
  }
  MetricsReport report;
  report.task = task;
  std::map<Language, std::pair<std::vector<Label>, std::vector<Label>>> by_language;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto& [g, p] = by_language[languages[i]];
    g.push_back(gold[i]);
    p.push_back(predicted[i]);
  }
  for (const auto& [lang, pairs] : by_language) {
    LanguageMetrics m;
    m.counts = confusion_counts(pairs.first, pairs.second);
    m.scores = score_positive(m.counts);
    report.micro.counts += m.counts;
    report.per_language.emplace(lang, m);
  }
  report.micro.scores = score_positive(report.micro.counts);
  if (!report.per_language.empty()) {
    for (const auto& [lang, m] : report.per_language) {
      report.macro.precision += m.scores.precision;
      report.macro.recall += m.scores.recall;
      report.macro.f1 += m.scores.f1;
    }
    const auto n = static_cast<double>(report.per_language.size());
    report.macro.precision /= n;
    report.macro.recall /= n;
    report.macro.f1 /= n;
  }
  return report;
}

MetricsReport evaluate_task(std::span<const QCRecord> gold, std::span<const Label> predicted) {
  return evaluate_records(Task::kQC, gold, predicted);
}

MetricsReport evaluate_task(std::span<const QIRecord> gold, std::span<const Label> predicted) {
  return evaluate_records(Task::kQI, gold, predicted);
}

nlohmann::json MetricsReport::to_json() const {
  nlohmann::json languages = nlohmann::json::object();
  for (const auto& [lang, m] : per_language) languages[std::string(code(lang))] = metrics_json(m);
  return {{"task", std::string(task_name(task))},
          {"micro", metrics_json(micro)},
          {"macro", scores_json(macro)},
          {"per_language", languages}};
}

std::string MetricsReport::table() const {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof line, "%-8s %8s %10s %10s %10s\n", "language", "n", "precision", "recall", "f1");
  out << line;
  const auto row = [&](const std::string& name, std::uint64_t n, const Scores& s) {
    std::snprintf(line, sizeof line, "%-8s %8llu %10.4f %10.4f %10.4f\n", name.c_str(),
                  static_cast<unsigned long long>(n), s.precision, s.recall, s.f1);
    out << line;
  };
  for (const auto& [lang, m] : per_language) row(std::string(code(lang)), m.counts.total(), m.scores);
  row("micro", micro.counts.total(), micro.scores);
  row("macro", micro.counts.total(), macro);
  return out.str();
}

std::vector<Label> read_predictions(const std::filesystem::path& path, std::size_t expected) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line) || line != "index\tlabel") {
    throw FormatError("prediction file '" + path.string() + "' must start with the header \"index\\tlabel\"");
  }
  std::vector<int> labels(expected, -1);
  std::size_t number = 1;
  std::size_t seen = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto where = [&] { return path.string() + ":" + std::to_string(number) + ": "; };
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) throw FormatError(where() + "expected two tab-separated fields");
    const std::string index_text = line.substr(0, tab);
    const std::string label_text = line.substr(tab + 1);
    if (index_text.empty() || index_text.find_first_not_of("0123456789") != std::string::npos) {
      throw FormatError(where() + "invalid index '" + index_text + "'");
    }
    if (label_text != "0" && label_text != "1") throw FormatError(where() + "invalid label '" + label_text + "'");
    const std::size_t index = std::stoull(index_text);
    if (index >= expected) {
      throw ValidationError(where() + "index " + index_text + " has no gold record (gold has " +
                            std::to_string(expected) + ")");
    }
    if (labels[index] != -1) throw ValidationError(where() + "duplicate index " + index_text);
    labels[index] = label_text == "1" ? 1 : 0;
    ++seen;
  }
  if (seen != expected) {
    throw ValidationError("prediction file has " + std::to_string(seen) + " rows for " + std::to_string(expected) +
                          " gold records");
  }
  std::vector<Label> out;
  out.reserve(expected);
  for (int v : labels) out.push_back(static_cast<Label>(v));
  return out;
}

void write_predictions(const std::filesystem::path& path, std::span<const Label> labels) {
  std::ostringstream out;
  out << "index\tlabel\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << '\t' << to_int(labels[i]) << '\n';
  write_text_file(path, out.str());
}

MetricsReport evaluate_files(Task task, const std::filesystem::path& gold, const std::filesystem::path& predictions) {
  const auto check = [&](const auto& parsed) {
    if (!parsed.diagnostics.empty()) {
      throw ValidationError("gold file '" + gold.string() + "' line " +
                            std::to_string(parsed.diagnostics.front().position) + ": " +
                            parsed.diagnostics.front().reason);
    }
  };
  if (task == Task::kQC) {
    const auto parsed = parse_qc_file(gold);
    check(parsed);
    return evaluate_task(std::span<const QCRecord>(parsed.records),
                         read_predictions(predictions, parsed.records.size()));
  }
  const auto parsed = parse_qi_file(gold);
  check(parsed);
  return evaluate_task(std::span<const QIRecord>(parsed.records), read_predictions(predictions, parsed.records.size()));
}

double average_f1(std::span<const double> scores) noexcept {
  if (scores.empty()) return 0.0;
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

}  // namespace relmine
