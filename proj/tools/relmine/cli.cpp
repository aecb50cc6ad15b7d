#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "relmine/augment.hpp"
#include "relmine/cleanse.hpp"
#include "relmine/distribution.hpp"
#include "relmine/embeddings.hpp"
#include "relmine/errors.hpp"
#include "relmine/metrics.hpp"
#include "relmine/mining.hpp"
#include "relmine/query_generator.hpp"
#include "relmine/record_io.hpp"
#include "relmine/split.hpp"
#include "relmine/taxonomy.hpp"
#include "relmine/translator.hpp"

namespace relmine::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::size_t kMaxEchoedDiagnostics = 20;

std::string fixed(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

class Command {
 public:
  Command(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) : cfg_(cfg), out_(out), err_(err) {}

  int dispatch(const std::string& name) {
    if (name == "ingest") return ingest();
    if (name == "clean") return clean();
    if (name == "stats") return stats();
    if (name == "taxonomy") return taxonomy();
    if (name == "gen-negatives") return gen_negatives();
    if (name == "mine") return mine();
    if (name == "augment-plan") return augment_plan();
    if (name == "augment-run") return augment_run();
    if (name == "split") return split();
    if (name == "evaluate") return evaluate();
    if (name == "report") return report();
    throw ValidationError("unknown subcommand '" + name + "'");
  }

 private:
  Task task() const {
    auto t = parse_task(cfg_.task);
    if (!t) throw ValidationError("--task must be qc or qi, got '" + cfg_.task + "'");
    return *t;
  }

  Task require_task(Task wanted, std::string_view command) const {
    if (task() != wanted) {
      throw ValidationError(std::string(command) + " works on " + std::string(task_name(wanted)) + " data only");
    }
    return wanted;
  }

  PathSeparator separator() const {
    if (cfg_.path_separator == "angle") return PathSeparator::kAngle;
    if (cfg_.path_separator == "comma") return PathSeparator::kComma;
    throw ValidationError("--path-sep must be angle or comma, got '" + cfg_.path_separator + "'");
  }

  static const std::string& require_file(const std::string& path, std::string_view flag) {
    if (path.empty()) throw ValidationError(std::string(flag) + " is required");
    if (!fs::is_regular_file(path)) throw ValidationError(std::string(flag) + ": no such file: " + path);
    return path;
  }

  static const std::string& require_value(const std::string& value, std::string_view flag) {
    if (value.empty()) throw ValidationError(std::string(flag) + " is required");
    return value;
  }

  template <typename Record>
  std::vector<Record> load(const std::string& path) {
    ParseOptions options;
    options.separator = separator();
    ParseResult<Record> parsed;
    if constexpr (std::is_same_v<Record, QCRecord>) {
      parsed = parse_qc_file(path, options);
    } else {
      parsed = parse_qi_file(path, options);
    }
    echo_diagnostics(path, parsed.diagnostics);
    return std::move(parsed.records);
  }

  template <typename Record>
  void save(const std::string& path, std::span<const Record> records) {
    if constexpr (std::is_same_v<Record, QCRecord>) {
      write_qc_file(path, records);
    } else {
      write_qi_file(path, records);
    }
  }

  void echo_diagnostics(const std::string& source, const std::vector<Diagnostic>& diagnostics) {
    for (std::size_t i = 0; i < diagnostics.size() && i < kMaxEchoedDiagnostics; ++i) {
      err_ << source << ':' << diagnostics[i].position << ": " << diagnostics[i].reason << '\n';
    }
    if (diagnostics.size() > kMaxEchoedDiagnostics) {
      err_ << source << ": " << diagnostics.size() - kMaxEchoedDiagnostics << " more diagnostics\n";
    }
  }

  // Position/reason TSV, written only when --diagnostics is set.
  void save_diagnostics(const std::vector<Diagnostic>& diagnostics) {
    if (cfg_.diagnostics.empty()) return;
    std::string body = "position\treason\n";
    for (const auto& d : diagnostics) body += std::to_string(d.position) + '\t' + d.reason + '\n';
    write_text_file(cfg_.diagnostics, body);
  }

  template <typename Record>
  std::vector<Record> with_input(const std::vector<Record>& input, std::vector<Record> added) const {
    if (!cfg_.combined) return added;
    std::vector<Record> all = input;
    all.insert(all.end(), std::make_move_iterator(added.begin()), std::make_move_iterator(added.end()));
    return all;
  }

  unsigned threads() const { return resolve_threads(cfg_.threads); }

  // ---------------------------------------------------------------- ingest

  int ingest() {
    const auto& in = require_file(cfg_.input, "--in");
    const auto& out = require_value(cfg_.output, "--out");
    std::size_t records = 0;
    std::size_t diagnostics = 0;
    auto run_one = [&]<typename Record>(std::vector<Record>* /*tag*/) {
      ParseOptions options;
      options.separator = separator();
      ParseResult<Record> parsed;
      if constexpr (std::is_same_v<Record, QCRecord>) {
        parsed = parse_qc_file(in, options);
      } else {
        parsed = parse_qi_file(in, options);
      }
      echo_diagnostics(in, parsed.diagnostics);
      save_diagnostics(parsed.diagnostics);
      save<Record>(out, parsed.records);
      records = parsed.records.size();
      diagnostics = parsed.diagnostics.size();
    };
    if (task() == Task::kQC) {
      run_one(static_cast<std::vector<QCRecord>*>(nullptr));
    } else {
      run_one(static_cast<std::vector<QIRecord>*>(nullptr));
    }
    out_ << "ingest: " << records << " records, " << diagnostics << " diagnostics -> " << out << '\n';
    return 0;
  }

  // ----------------------------------------------------------------- clean

  template <typename Record>
  CleanseReport clean_as(const std::string& in, const std::string& out, const CleanseOptions& options) {
    const auto records = load<Record>(in);
    auto result = cleanse(std::span<const Record>(records), options);
    save<Record>(out, result.records);
    return result.report;
  }

  int clean() {
    const auto& in = require_file(cfg_.input, "--in");
    const auto& out = require_value(cfg_.output, "--out");
    CleanseOptions options;
    options.remove_conflicts = cfg_.clean.conflicts;
    options.dedup = cfg_.clean.dedup;
    options.filter_numeric = cfg_.clean.numeric;
    if (cfg_.clean.numeric_rule == "lenient") {
      options.numeric_rule = text::NumericRule::kLenient;
    } else if (cfg_.clean.numeric_rule == "strict") {
      options.numeric_rule = text::NumericRule::kStrict;
    } else {
      throw ValidationError("--numeric-rule must be lenient or strict, got '" + cfg_.clean.numeric_rule + "'");
    }
    if (!cfg_.clean.allowlist.empty()) {
      options.allowlist = load_allowlist(require_file(cfg_.clean.allowlist, "--allowlist"));
    }
    const CleanseReport report =
        task() == Task::kQC ? clean_as<QCRecord>(in, out, options) : clean_as<QIRecord>(in, out, options);
    const std::string body = report.to_json().dump();
    if (!cfg_.clean.report.empty()) write_text_file(cfg_.clean.report, body + '\n');
    out_ << body << '\n';
    return 0;
  }

  // ----------------------------------------------------------------- stats

  int stats() {
    const auto& in = require_file(cfg_.input, "--in");
    LabelStats s;
    if (task() == Task::kQC) {
      s = language_stats(std::span<const QCRecord>(load<QCRecord>(in)));
    } else {
      s = language_stats(std::span<const QIRecord>(load<QIRecord>(in)));
    }
    if (!cfg_.report.json.empty()) write_text_file(cfg_.report.json, s.to_json().dump(2) + '\n');
    if (!cfg_.report.csv.empty()) write_text_file(cfg_.report.csv, s.to_csv());
    const LabelCounts t = s.totals();
    out_ << "stats: " << t.total() << " records (" << t.positives << " positive, " << t.negatives << " negative) in "
         << s.per_language().size() << " languages\n";
    return 0;
  }

  // -------------------------------------------------------------- taxonomy

  int taxonomy() {
    require_task(Task::kQC, "taxonomy");
    const auto& in = require_file(cfg_.input, "--in");
    const auto records = load<QCRecord>(in);
    std::vector<CategoryPath> paths;
    paths.reserve(records.size());
    for (const auto& r : records) paths.push_back(r.path);
    const TaxonomyTree tree = TaxonomyTree::build(paths);
    if (!cfg_.output.empty()) write_text_file(cfg_.output, tree.to_json().dump(2) + '\n');
    out_ << "taxonomy: " << tree.roots().size() << " roots, " << tree.size() << " nodes, "
         << tree.observed_leaves().size() << " observed leaves\n";
    return 0;
  }

  // --------------------------------------------------------- gen-negatives

  static std::vector<std::string> split_words(const std::string& command) {
    std::istringstream in(command);
    std::vector<std::string> words;
    for (std::string w; in >> w;) words.push_back(w);
    return words;
  }

  int gen_negatives() {
    require_task(Task::kQC, "gen-negatives");
    const auto& in = require_file(cfg_.input, "--in");
    const auto& out = require_value(cfg_.output, "--out");
    NegativeGenConfig config;
    auto strategy = parse_strategy(cfg_.negatives.strategy);
    if (!strategy) throw ValidationError("unknown --strategy '" + cfg_.negatives.strategy + "'");
    config.strategy = *strategy;
    config.seed = cfg_.negatives.seed;
    config.max_resamples = cfg_.negatives.max_resamples;

    const auto corpus = load<QCRecord>(in);
    std::unique_ptr<QueryGenerator> generator;
    if (config.strategy == NegativeStrategy::kSyntheticQuery) {
      if (cfg_.negatives.generator_command.empty()) {
        generator = std::make_unique<StubQueryGenerator>();
      } else {
        generator = std::make_unique<ProcessQueryGenerator>(split_words(cfg_.negatives.generator_command));
      }
    }
    NegativeBatch batch = generate_negatives(corpus, config, generator.get(), threads());
    const std::size_t produced = batch.negatives.size();
    save<QCRecord>(out, with_input(corpus, std::move(batch.negatives)));
    save_diagnostics(batch.diagnostics);
    const auto positives =
        std::count_if(corpus.begin(), corpus.end(), [](const QCRecord& r) { return r.label == Label::kPositive; });
    out_ << "gen-negatives: strategy=" << strategy_name(config.strategy) << " seed=" << config.seed << ": "
         << positives << " positives, " << produced << " negatives, " << batch.diagnostics.size()
         << " diagnostics -> " << out << '\n';
    return 0;
  }

  // ------------------------------------------------------------------ mine

  int mine() {
    require_task(Task::kQI, "mine");
    const auto& in = require_file(cfg_.input, "--in");
    const auto& emb = require_file(cfg_.mining.embeddings, "--embeddings");
    const auto& out = require_value(cfg_.output, "--out");
    MiningConfig config;
    auto mode = parse_mining_mode(cfg_.mining.mode);
    if (!mode) throw ValidationError("unknown --mode '" + cfg_.mining.mode + "'");
    config.mode = *mode;
    config.hard_threshold = cfg_.mining.tau;
    config.seed = cfg_.mining.seed;
    config.validate();

    const auto corpus = load<QIRecord>(in);
    EmbeddingLoad loaded = load_embeddings(emb);
    echo_diagnostics(emb, loaded.diagnostics);
    std::vector<QIRecord> positives;
    for (const auto& r : corpus) {
      if (r.label == Label::kPositive) positives.push_back(r);
    }
    const ItemTitles titles = item_titles(corpus);
    MinedBatch batch = batch_mine(positives, loaded.store, config, threads(), &titles);
    const std::size_t produced = batch.negatives.size();
    save<QIRecord>(out, with_input(corpus, std::move(batch.negatives)));
    save_diagnostics(batch.diagnostics);
    out_ << "mine: mode=" << mining_mode_name(config.mode) << " tau=" << config.hard_threshold << ": "
         << positives.size() << " positives, " << produced << " negatives, " << batch.diagnostics.size()
         << " diagnostics -> " << out << '\n';
    return 0;
  }

  // ---------------------------------------------------------- augment-plan

  std::vector<Language> targets() const {
    std::vector<Language> out;
    if (cfg_.augment.targets.empty()) {
      if (task() == Task::kQC) return {kDefaultQcTargets.begin(), kDefaultQcTargets.end()};
      return {kDefaultQiTargets.begin(), kDefaultQiTargets.end()};
    }
    for (const auto& code : cfg_.augment.targets) {
      auto lang = parse_language(code);
      if (!lang) throw ValidationError("unknown target language '" + code + "'");
      out.push_back(*lang);
    }
    return out;
  }

  std::set<CategoryPath> dev_paths() {
    std::set<CategoryPath> paths;
    if (!cfg_.augment.dev.empty()) {
      for (const auto& r : load<QCRecord>(require_file(cfg_.augment.dev, "--dev"))) paths.insert(r.path);
      return paths;
    }
    const auto& file = require_file(cfg_.augment.dev_paths, "--dev or --dev-paths");
    std::istringstream lines(read_text_file(file));
    for (std::string line; std::getline(lines, line);) {
      if (text::trim(line).empty()) continue;
      paths.insert(CategoryPath::parse(line, separator()));
    }
    return paths;
  }

  int augment_plan() {
    const auto& in = require_file(cfg_.input, "--in");
    const auto& out = require_value(cfg_.output, "--out");
    const auto langs = targets();
    const std::uint64_t seed = cfg_.augment.seed;
    TranslationPlan plan;
    if (task() == Task::kQC) {
      const std::size_t quota = cfg_.augment.quota ? cfg_.augment.quota : kDefaultQcQuota;
      const auto dev = dev_paths();
      const auto train = load<QCRecord>(in);
      plan = plan_qc_augmentation(train, dev, langs, quota, seed);
    } else {
      const std::size_t quota = cfg_.augment.quota ? cfg_.augment.quota : kDefaultQiQuota;
      const auto train = load<QIRecord>(in);
      plan = plan_qi_augmentation(train, langs, quota, seed);
    }
    write_text_file(out, plan.to_json().dump(2) + '\n');
    out_ << "augment-plan: " << task_name(plan.task) << " seed=" << plan.seed << ": " << plan.size()
         << " translations into " << plan.targets.size() << " languages -> " << out << '\n';
    return 0;
  }

  // ----------------------------------------------------------- augment-run

  std::unique_ptr<Translator> translator() const {
    const std::string& t = cfg_.augment.translator;
    if (t == "stub") return std::make_unique<StubTranslator>();
    if (t.starts_with("http://") || t.starts_with("https://")) return std::make_unique<HttpTranslator>(t);
    throw ValidationError("--translator must be 'stub' or an http(s) base URL, got '" + t + "'");
  }

  template <typename Record>
  std::pair<std::size_t, std::size_t> run_plan(const TranslationPlan& plan, const std::string& in,
                                                const std::string& out, Translator& tr,
                                                const ExecuteOptions& options) {
    const auto train = load<Record>(in);
    if (train.size() != plan.source_count) {
      throw ValidationError("plan was made from " + std::to_string(plan.source_count) + " records but " + in +
                            " has " + std::to_string(train.size()));
    }
    AugmentResult<Record> result = execute_plan(plan, std::span<const Record>(train), tr, options);
    const std::size_t produced = result.records.size();
    save<Record>(out, with_input(train, std::move(result.records)));
    save_diagnostics(result.diagnostics);
    return {produced, result.diagnostics.size()};
  }

  int augment_run() {
    const auto& in = require_file(cfg_.input, "--in");
    const auto& plan_path = require_file(cfg_.augment.plan, "--plan");
    const auto& out = require_value(cfg_.output, "--out");
    json doc;
    try {
      doc = json::parse(read_text_file(plan_path));
    } catch (const json::parse_error& e) {
      throw FormatError(plan_path + ": " + e.what());
    }
    const TranslationPlan plan = TranslationPlan::from_json(doc);
    if (plan.task != task()) {
      throw ValidationError("plan is for task " + std::string(task_name(plan.task)) + ", --task is " + cfg_.task);
    }
    ExecuteOptions options;
    options.batch_size = cfg_.augment.batch_size;
    options.retries = cfg_.augment.retries;
    options.max_in_flight = cfg_.augment.max_in_flight;
    auto tr = translator();
    const auto [produced, failed] = plan.task == Task::kQC ? run_plan<QCRecord>(plan, in, out, *tr, options)
                                                           : run_plan<QIRecord>(plan, in, out, *tr, options);
    out_ << "augment-run: " << produced << " of " << plan.size() << " translated, " << failed << " diagnostics -> "
         << out << '\n';
    return 0;
  }

  // ----------------------------------------------------------------- split

  template <typename Record>
  SplitManifest split_as(const std::string& in, const fs::path& dir, SplitMode mode, const SplitRatios& ratios) {
    const auto records = load<Record>(in);
    SplitManifest m = mode == SplitMode::kStratified ? split_stratified(std::span<const Record>(records), ratios,
                                                                        cfg_.split.seed)
                                                     : split_query_disjoint(std::span<const Record>(records), ratios,
                                                                            cfg_.split.seed);
    std::array<std::vector<Record>, 3> parts;
    for (std::size_t i = 0; i < records.size(); ++i) {
      parts[static_cast<std::size_t>(m.assignments[i])].push_back(records[i]);
    }
    for (std::size_t p = 0; p < 3; ++p) {
      const auto name = split_part_name(static_cast<SplitPart>(p));
      save<Record>((dir / (std::string(name) + ".tsv")).string(), parts[p]);
    }
    write_text_file(dir / "manifest.json", m.to_json().dump(1) + '\n');
    return m;
  }

  int split() {
    const auto& in = require_file(cfg_.input, "--in");
    auto mode = parse_split_mode(cfg_.split.mode);
    if (!mode) throw ValidationError("--mode must be stratified or query-disjoint, got '" + cfg_.split.mode + "'");
    if (cfg_.split.ratios.size() != 3) throw ValidationError("--ratios takes three values: train,validation,test");
    SplitRatios ratios{cfg_.split.ratios[0], cfg_.split.ratios[1], cfg_.split.ratios[2]};
    ratios.validate();
    const fs::path dir = cfg_.split.out_dir.empty() ? fs::path(".") : fs::path(cfg_.split.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    const SplitManifest m = task() == Task::kQC ? split_as<QCRecord>(in, dir, *mode, ratios)
                                                : split_as<QIRecord>(in, dir, *mode, ratios);
    const auto counts = m.counts();
    out_ << "split: " << split_mode_name(m.mode) << " seed=" << m.seed << ": train " << counts[0] << ", validation "
         << counts[1] << ", test " << counts[2] << " (max deviation " << fixed(m.max_deviation()) << ") -> "
         << dir.string() << '\n';
    return 0;
  }

  // -------------------------------------------------------------- evaluate

  int evaluate() {
    const auto& gold = cfg_.evaluate.gold;
    const auto& pred = cfg_.evaluate.predictions;
    if (gold.empty()) throw ValidationError("--gold is required");
    if (gold.size() != pred.size()) throw ValidationError("every --gold needs a matching --pred");
    std::vector<Task> tasks;
    if (cfg_.evaluate.tasks.empty()) {
      tasks.assign(gold.size(), task());
    } else {
      if (cfg_.evaluate.tasks.size() != gold.size()) throw ValidationError("--tasks needs one entry per --gold");
      for (const auto& name : cfg_.evaluate.tasks) {
        auto t = parse_task(name);
        if (!t) throw ValidationError("--tasks entries must be qc or qi, got '" + name + "'");
        tasks.push_back(*t);
      }
    }
    for (std::size_t i = 0; i < gold.size(); ++i) {
      require_file(gold[i], "--gold");
      require_file(pred[i], "--pred");
    }

    json doc = {{"tasks", json::array()}};
    std::vector<double> micro;
    std::ostringstream summary;
    summary << "evaluate:";
    for (std::size_t i = 0; i < gold.size(); ++i) {
      const MetricsReport report = evaluate_files(tasks[i], gold[i], pred[i]);
      doc["tasks"].push_back(report.to_json());
      micro.push_back(report.micro.scores.f1);
      if (table_) out_ << report.table();
      summary << (i ? ";" : "") << ' ' << task_name(tasks[i]) << " F1 " << fixed(report.micro.scores.f1)
              << " (macro " << fixed(report.macro.f1) << ')';
    }
    if (micro.size() > 1) {
      const double avg = average_f1(micro);
      doc["average_f1"] = avg;
      summary << "; average F1 " << fixed(avg, 5);
    }
    if (!cfg_.output.empty()) write_text_file(cfg_.output, doc.dump(2) + '\n');
    out_ << summary.str() << '\n';
    return 0;
  }

  // ---------------------------------------------------------------- report

  int report() {
    const auto& in = require_file(cfg_.input, "--in");
    const auto& r = cfg_.report;
    if (r.json.empty() && r.csv.empty() && r.svg.empty()) {
      throw ValidationError("report needs at least one of --json, --csv, --svg");
    }
    DistributionReport dist = task() == Task::kQC ? distribution_report(load<QCRecord>(in), r.title)
                                                  : distribution_report(load<QIRecord>(in), r.title);
    if (!r.json.empty()) write_text_file(r.json, dist.stats.to_json().dump(2) + '\n');
    if (!r.csv.empty()) write_text_file(r.csv, dist.stats.to_csv());
    if (!r.svg.empty()) write_text_file(r.svg, dist.svg);
    const LabelCounts t = dist.stats.totals();
    out_ << "report: " << dist.stats.per_language().size() << " languages, " << t.total() << " records\n";
    return 0;
  }

 public:
  bool table_ = false;

 private:
  const PipelineConfig& cfg_;
  std::ostream& out_;
  std::ostream& err_;
};

// --config has to be applied before the other flags so they can override it.
std::optional<std::string> find_config(std::span<const std::string> args) {
  std::optional<std::string> found;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--") break;
    if (args[i] == "--config" && i + 1 < args.size()) {
      found = args[++i];
    } else if (args[i].starts_with("--config=")) {
      found = args[i].substr(9);
    }
  }
  return found;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg;
  bool table = false;
  std::string config_path;

  CLI::App app{"Dataset curation for multilingual query-category and query-item relevance data.", "relmine"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");
  app.add_option("--config", config_path, "JSON pipeline config; flags override its values");
  app.add_option("--task", cfg.task, "Record kind: qc or qi")->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads (default: RELMINE_THREADS, else all cores)");
  app.add_option("--path-sep", cfg.path_separator, "Category path separator in inputs: angle (' > ') or comma")
      ->capture_default_str();

  auto io = [&](CLI::App* sub, bool output) {
    sub->fallthrough();
    sub->add_option("--in", cfg.input, "Input record TSV");
    if (output) sub->add_option("--out", cfg.output, "Output file");
  };
  auto diagnostics = [&](CLI::App* sub) {
    sub->add_option("--diagnostics", cfg.diagnostics, "Write per-record diagnostics TSV here");
  };
  auto combined = [&](CLI::App* sub) {
    sub->add_flag("--combined", cfg.combined, "Write the input records followed by the new ones");
  };

  auto* ingest = app.add_subcommand("ingest", "Parse a record file and write it in canonical form");
  io(ingest, true);
  diagnostics(ingest);

  auto* clean = app.add_subcommand("clean", "Drop label conflicts, duplicates and numeric queries");
  io(clean, true);
  clean->add_option("--allowlist", cfg.clean.allowlist, "Numeric queries to keep, one per line");
  clean->add_flag("--conflicts,!--no-conflicts", cfg.clean.conflicts, "Remove label conflicts");
  clean->add_flag("--dedup,!--no-dedup", cfg.clean.dedup, "Remove duplicates");
  clean->add_flag("--numeric,!--no-numeric", cfg.clean.numeric, "Remove purely numeric queries");
  clean->add_option("--numeric-rule", cfg.clean.numeric_rule, "lenient or strict")->capture_default_str();
  clean->add_option("--report", cfg.clean.report, "Also write the report JSON here");

  auto* stats = app.add_subcommand("stats", "Per-language label counts");
  io(stats, false);
  stats->add_option("--json", cfg.report.json, "Write counts as JSON");
  stats->add_option("--csv", cfg.report.csv, "Write counts as CSV");

  auto* taxonomy = app.add_subcommand("taxonomy", "Build the category tree of a QC corpus");
  io(taxonomy, true);

  auto* gen = app.add_subcommand("gen-negatives", "Generate QC negatives by taxonomy perturbation");
  io(gen, true);
  diagnostics(gen);
  combined(gen);
  gen->add_option("--strategy", cfg.negatives.strategy, "same-l1 | sibling-leaf | cross-root | synthetic-query")
      ->capture_default_str();
  gen->add_option("--seed", cfg.negatives.seed, "Random seed")->capture_default_str();
  gen->add_option("--max-resamples", cfg.negatives.max_resamples, "Draws per record before giving up")
      ->capture_default_str();
  gen->add_option("--generator-cmd", cfg.negatives.generator_command,
                  "Query generator command for synthetic-query (default: built-in stub)");

  auto* mine = app.add_subcommand("mine", "Mine QI negatives from item embeddings");
  io(mine, true);
  diagnostics(mine);
  combined(mine);
  mine->add_option("--embeddings", cfg.mining.embeddings, "EMBV1 item embedding file");
  mine->add_option("--mode", cfg.mining.mode, "easy | hard | hard-random")->capture_default_str();
  mine->add_option("--tau", cfg.mining.tau, "Hard-negative similarity ceiling (exclusive)")->capture_default_str();
  mine->add_option("--seed", cfg.mining.seed, "Random seed for hard-random")->capture_default_str();

  auto* plan = app.add_subcommand("augment-plan", "Choose training records to translate");
  io(plan, true);
  plan->add_option("--targets", cfg.augment.targets, "Target language codes")->delimiter(',');
  plan->add_option("--quota", cfg.augment.quota, "Records per target (default: 42000 qc, 50000 qi)");
  plan->add_option("--seed", cfg.augment.seed, "Random seed")->capture_default_str();
  plan->add_option("--dev", cfg.augment.dev, "QC dev set whose category paths qualify sources");
  plan->add_option("--dev-paths", cfg.augment.dev_paths, "Qualifying category paths, one per line");

  auto* arun = app.add_subcommand("augment-run", "Translate the records named by a plan");
  io(arun, true);
  diagnostics(arun);
  combined(arun);
  arun->add_option("--plan", cfg.augment.plan, "Plan JSON from augment-plan");
  arun->add_option("--translator", cfg.augment.translator, "'stub' or the base URL of a /translate service")
      ->capture_default_str();
  arun->add_option("--batch-size", cfg.augment.batch_size, "Texts per request")->capture_default_str();
  arun->add_option("--retries", cfg.augment.retries, "Retries per failed batch")->capture_default_str();
  arun->add_option("--max-in-flight", cfg.augment.max_in_flight, "Concurrent requests")->capture_default_str();

  auto* split = app.add_subcommand("split", "Write train/validation/test files and a manifest");
  io(split, false);
  split->add_option("--mode", cfg.split.mode, "stratified | query-disjoint")->capture_default_str();
  split->add_option("--ratios", cfg.split.ratios, "train,validation,test")->delimiter(',')->expected(3);
  split->add_option("--seed", cfg.split.seed, "Random seed")->capture_default_str();
  split->add_option("--out-dir", cfg.split.out_dir, "Directory for the split files")->capture_default_str();

  auto* evaluate = app.add_subcommand("evaluate", "Positive-class F1 per language and overall");
  evaluate->fallthrough();
  evaluate->add_option("--gold", cfg.evaluate.gold, "Gold record TSV (repeatable)");
  evaluate->add_option("--pred", cfg.evaluate.predictions, "Predictions TSV with index and label (repeatable)");
  evaluate->add_option("--tasks", cfg.evaluate.tasks, "Task of each --gold, when they differ")->delimiter(',');
  evaluate->add_option("--out", cfg.output, "Write metrics JSON here");
  evaluate->add_flag("--table", table, "Print per-language tables");

  auto* report = app.add_subcommand("report", "Language distribution as JSON, CSV and SVG");
  io(report, false);
  report->add_option("--json", cfg.report.json, "JSON output");
  report->add_option("--csv", cfg.report.csv, "CSV output");
  report->add_option("--svg", cfg.report.svg, "SVG bar chart output");
  report->add_option("--title", cfg.report.title, "Chart title");

  try {
    if (auto path = find_config(args)) cfg = load_config(*path);

    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back("relmine");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return 0;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::ParseError& e) {
      err << "relmine: " << e.what() << "\n\n" << app.help();
      return 1;
    }

    Command command(cfg, out, err);
    command.table_ = table;
    return command.dispatch(app.get_subcommands().front()->get_name());
  } catch (const ValidationError& e) {
    err << "relmine: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "relmine: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace relmine::cli
