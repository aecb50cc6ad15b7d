#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <set>
#include <thread>

#include "relmine/errors.hpp"
#include "relmine/record_io.hpp"

namespace relmine::cli {
namespace {

using nlohmann::json;

// Copies the keys named in `fields` from `obj` and rejects anything else, so a
// misspelt key fails loudly instead of being ignored.
class Section {
 public:
  Section(const json& obj, std::string name) : obj_(obj), name_(std::move(name)) {
    if (!obj_.is_object()) throw ValidationError("config: '" + name_ + "' must be an object");
  }

  template <typename T>
  Section& get(const char* key, T& out) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end() || it->is_null()) return *this;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw ValidationError("config: '" + name_ + "." + key + "' has the wrong type");
    }
    return *this;
  }

  Section& nested(const char* key, const std::function<void(Section&)>& fill) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end() || it->is_null()) return *this;
    Section inner(*it, name_.empty() ? key : name_ + "." + key);
    fill(inner);
    inner.finish();
    return *this;
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) {
        throw ValidationError("config: unknown key '" + (name_.empty() ? key : name_ + "." + key) + "'");
      }
    }
  }

 private:
  const json& obj_;
  std::string name_;
  std::set<std::string, std::less<>> seen_;
};

}  // namespace

PipelineConfig config_from_json(const json& j) {
  PipelineConfig c;
  Section root(j, "");
  root.get("task", c.task)
      .get("input", c.input)
      .get("output", c.output)
      .get("diagnostics", c.diagnostics)
      .get("combined", c.combined)
      .get("threads", c.threads)
      .get("path_separator", c.path_separator)
      .nested("clean",
              [&](Section& s) {
                s.get("conflicts", c.clean.conflicts)
                    .get("dedup", c.clean.dedup)
                    .get("numeric", c.clean.numeric)
                    .get("numeric_rule", c.clean.numeric_rule)
                    .get("allowlist", c.clean.allowlist)
                    .get("report", c.clean.report);
              })
      .nested("negatives",
              [&](Section& s) {
                s.get("strategy", c.negatives.strategy)
                    .get("seed", c.negatives.seed)
                    .get("max_resamples", c.negatives.max_resamples)
                    .get("generator_command", c.negatives.generator_command);
              })
      .nested("mining",
              [&](Section& s) {
                s.get("mode", c.mining.mode)
                    .get("tau", c.mining.tau)
                    .get("seed", c.mining.seed)
                    .get("embeddings", c.mining.embeddings);
              })
      .nested("augment",
              [&](Section& s) {
                s.get("targets", c.augment.targets)
                    .get("quota", c.augment.quota)
                    .get("seed", c.augment.seed)
                    .get("dev_paths", c.augment.dev_paths)
                    .get("dev", c.augment.dev)
                    .get("plan", c.augment.plan)
                    .get("translator", c.augment.translator)
                    .get("batch_size", c.augment.batch_size)
                    .get("retries", c.augment.retries)
                    .get("max_in_flight", c.augment.max_in_flight);
              })
      .nested("split",
              [&](Section& s) {
                s.get("mode", c.split.mode)
                    .get("ratios", c.split.ratios)
                    .get("seed", c.split.seed)
                    .get("out_dir", c.split.out_dir);
              })
      .nested("evaluate",
              [&](Section& s) {
                s.get("gold", c.evaluate.gold)
                    .get("predictions", c.evaluate.predictions)
                    .get("tasks", c.evaluate.tasks);
              })
      .nested("report", [&](Section& s) {
        s.get("json", c.report.json).get("csv", c.report.csv).get("svg", c.report.svg).get("title", c.report.title);
      });
  root.finish();
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ValidationError("config file not found: " + path.string());
  const std::string text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RELMINE_THREADS"); env != nullptr && *env != '\0') {
    const std::string_view s(env);
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || value == 0) {
      throw ValidationError("RELMINE_THREADS must be a positive integer, got '" + std::string(s) + "'");
    }
    return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace relmine::cli
