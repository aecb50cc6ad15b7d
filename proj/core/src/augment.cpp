#include "relmine/augment.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <thread>

#include "relmine/text.hpp"

namespace relmine {
namespace {

// Seeded uniform sample of `k` elements (partial Fisher-Yates).
std::vector<std::size_t> sample(std::vector<std::size_t> pool, std::size_t k, std::mt19937_64& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + uniform_index(rng, pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

// Proportional allocation of k over strata sizes, largest remainder first,
// ties to the lower stratum.
std::array<std::size_t, 2> allocate(std::size_t k, const std::array<std::size_t, 2>& sizes) {
  const std::uint64_t total = sizes[0] + sizes[1];
  std::array<std::size_t, 2> out{};
  std::array<std::uint64_t, 2> remainder{};
  std::size_t assigned = 0;
  for (int s = 0; s < 2; ++s) {
    out[s] = static_cast<std::size_t>(k * sizes[s] / total);
    remainder[s] = k * sizes[s] % total;
    assigned += out[s];
  }
  while (assigned < k) {
    const int s = remainder[1] > remainder[0] ? 1 : 0;
    ++out[s];
    remainder[s] = 0;
    ++assigned;
  }
  return out;
}

template <typename Record>
TranslationPlan make_plan(Task task, std::span<const Record> train, std::span<const Language> targets,
                          std::size_t quota, std::uint64_t seed,
                          const std::function<bool(const Record&)>& eligible) {
  TranslationPlan plan;
  plan.task = task;
  plan.seed = seed;
  plan.quota = quota;
  plan.source_count = train.size();
  plan.targets.assign(targets.begin(), targets.end());

  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (eligible(train[i])) pool.push_back(i);
  }
  if (pool.empty()) throw EmptyEligiblePool("no training record is eligible as a translation source");

  for (Language target : targets) {
    if (plan.entries.count(target) > 0) throw ValidationError("duplicate target language " + std::string(code(target)));
    std::array<std::vector<std::size_t>, 2> strata;
    for (std::size_t i : pool) {
      if (train[i].language != target) strata[to_int(train[i].label)].push_back(i);
    }
    const std::size_t eligible_count = strata[0].size() + strata[1].size();
    const std::size_t k = std::min(quota, eligible_count);
    auto& chosen = plan.entries[target];
    if (k == 0) continue;
    const auto per_label = allocate(k, {strata[0].size(), strata[1].size()});
    for (int label = 0; label < 2; ++label) {
      auto rng = make_rng(seed, (static_cast<std::uint64_t>(target) << 8) | static_cast<std::uint64_t>(label));
      const auto picked = sample(strata[label], per_label[label], rng);
      chosen.insert(chosen.end(), picked.begin(), picked.end());
    }
    std::sort(chosen.begin(), chosen.end());
  }
  return plan;
}

struct Batch {
  Language source;
  Language target;
  std::vector<std::size_t> slots;  // positions in the flattened plan
};

template <typename Record>
AugmentResult<Record> execute(const TranslationPlan& plan, std::span<const Record> train, Translator& translator,
                              const ExecuteOptions& options) {
  if (plan.source_count != train.size()) {
    throw ValidationError("plan was made for " + std::to_string(plan.source_count) + " records, corpus has " +
                          std::to_string(train.size()));
  }
  if (options.batch_size == 0) throw ValidationError("batch size must be positive");

  // Flatten in plan order.
  std::vector<std::pair<std::size_t, Language>> flat;
  for (Language target : plan.targets) {
    const auto it = plan.entries.find(target);
    if (it == plan.entries.end()) continue;
    for (std::size_t source : it->second) {
      if (source >= train.size()) throw ValidationError("plan references record " + std::to_string(source));
      flat.emplace_back(source, target);
    }
  }

  std::vector<Batch> batches;
  {
    std::map<std::pair<Language, Language>, std::size_t> open;
    for (std::size_t slot = 0; slot < flat.size(); ++slot) {
      const auto [source, target] = flat[slot];
      const std::pair key{target, train[source].language};
      auto it = open.find(key);
      if (it == open.end() || batches[it->second].slots.size() == options.batch_size) {
        batches.push_back({key.second, key.first, {}});
        it = open.insert_or_assign(key, batches.size() - 1).first;
      }
      batches[it->second].slots.push_back(slot);
    }
  }

  std::vector<std::optional<std::string>> translated(flat.size());
  std::vector<std::string> failure(flat.size());
  std::vector<char> batch_failed(batches.size(), 0);

  const auto run_batch = [&](std::size_t b) {
    const Batch& batch = batches[b];
    std::vector<std::string> texts;
    for (std::size_t slot : batch.slots) texts.push_back(train[flat[slot].first].query);
    std::string last_error;
    for (unsigned attempt = 0; attempt <= options.retries; ++attempt) {
      try {
        auto out = translator.translate(texts, batch.source, batch.target);
        if (out.size() != texts.size()) throw TranslationError("translator changed the batch length");
        for (std::size_t k = 0; k < out.size(); ++k) {
          const std::size_t slot = batch.slots[k];
          if (text::trim(out[k]).empty()) {
            failure[slot] = "empty translation";
          } else if (out[k].find_first_of("\t\n\r") != std::string::npos) {
            failure[slot] = "translation contains a tab or line break";
          } else {
            translated[slot] = std::move(out[k]);
          }
        }
        return;
      } catch (const std::exception& e) {
        last_error = e.what();
      }
    }
    batch_failed[b] = 1;
    for (std::size_t slot : batch.slots) failure[slot] = "translation to " + std::string(code(batch.target)) +
                                                         " failed: " + last_error;
  };

  const unsigned threads =
      std::max(1u, std::min<unsigned>(options.max_in_flight, static_cast<unsigned>(batches.size())));
  if (threads <= 1) {
    for (std::size_t b = 0; b < batches.size(); ++b) run_batch(b);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t b = w; b < batches.size(); b += threads) run_batch(b);
      });
    }
  }

  if (!batches.empty() && std::all_of(batch_failed.begin(), batch_failed.end(), [](char f) { return f != 0; })) {
    throw TranslatorUnavailable("every translation batch failed: " + failure.front());
  }

  AugmentResult<Record> result;
  for (std::size_t slot = 0; slot < flat.size(); ++slot) {
    const auto [source, target] = flat[slot];
    if (!translated[slot]) {
      result.diagnostics.push_back({source, failure[slot]});
      continue;
    }
    Record r = train[source];
    r.query = std::move(*translated[slot]);
    r.language = target;
    r.origin = Origin::kTranslated;
    result.records.push_back(std::move(r));
  }
  return result;
}

}  // namespace

std::size_t TranslationPlan::size() const {
  std::size_t n = 0;
  for (const auto& [target, sources] : entries) n += sources.size();
  return n;
}

nlohmann::json TranslationPlan::to_json() const {
  nlohmann::json targets_json = nlohmann::json::array();
  nlohmann::json entries_json = nlohmann::json::object();
  nlohmann::json planned = nlohmann::json::object();
  for (Language t : targets) {
    targets_json.push_back(std::string(code(t)));
    const auto it = entries.find(t);
    const auto sources = it == entries.end() ? std::vector<std::size_t>{} : it->second;
    entries_json[std::string(code(t))] = sources;
    planned[std::string(code(t))] = sources.size();
  }
  return {{"task", std::string(task_name(task))}, {"seed", seed},
          {"quota", quota},                       {"source_count", source_count},
          {"targets", targets_json},              {"entries", entries_json},
          {"planned", planned}};
}

TranslationPlan TranslationPlan::from_json(const nlohmann::json& j) {
  try {
    TranslationPlan plan;
    const auto task = parse_task(j.at("task").get<std::string>());
    if (!task) throw FormatError("plan has an unknown task");
    plan.task = *task;
    plan.seed = j.at("seed").get<std::uint64_t>();
    plan.quota = j.at("quota").get<std::size_t>();
    plan.source_count = j.at("source_count").get<std::size_t>();
    for (const auto& t : j.at("targets")) plan.targets.push_back(language_from_code(t.get<std::string>()));
    for (const auto& [lang, sources] : j.at("entries").items()) {
      plan.entries[language_from_code(lang)] = sources.get<std::vector<std::size_t>>();
    }
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed translation plan: ") + e.what());
  }
}

TranslationPlan plan_qc_augmentation(std::span<const QCRecord> train, const std::set<CategoryPath>& dev_paths,
                                     std::span<const Language> targets, std::size_t quota, std::uint64_t seed) {
  return make_plan<QCRecord>(Task::kQC, train, targets, quota, seed,
                             [&](const QCRecord& r) { return dev_paths.count(r.path) > 0; });
}

TranslationPlan plan_qi_augmentation(std::span<const QIRecord> train, std::span<const Language> targets,
                                     std::size_t quota, std::uint64_t seed) {
  return make_plan<QIRecord>(Task::kQI, train, targets, quota, seed,
                             [](const QIRecord& r) { return r.language == Language::kEn; });
}

AugmentResult<QCRecord> execute_plan(const TranslationPlan& plan, std::span<const QCRecord> train,
                                     Translator& translator, const ExecuteOptions& options) {
  if (plan.task != Task::kQC) throw ValidationError("plan is not for the qc task");
  return execute(plan, train, translator, options);
}

AugmentResult<QIRecord> execute_plan(const TranslationPlan& plan, std::span<const QIRecord> train,
                                     Translator& translator, const ExecuteOptions& options) {
  if (plan.task != Task::kQI) throw ValidationError("plan is not for the qi task");
  return execute(plan, train, translator, options);
}

}  // namespace relmine
