#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "relmine/category_path.hpp"
#include "relmine/errors.hpp"
#include "relmine/language.hpp"

namespace relmine {

struct GenerationRequest {
  std::string query;
  Language language = Language::kEn;
  CategoryPath path;
  /// 0 for the first request about a record, incremented on every re-request.
  std::uint32_t attempt = 0;
};

/// The generator could not produce an answer (process gone, bad response).
class GeneratorUnavailable : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

/// Produces a replacement query, in the request's language, that should not
/// match the request's category path.
class QueryGenerator {
 public:
  virtual ~QueryGenerator() = default;
  virtual std::string generate(const GenerationRequest& request) = 0;
};

/// Deterministic token perturbation: the query with `suffix` appended, plus
/// "-<attempt>" on re-requests.
class StubQueryGenerator final : public QueryGenerator {
 public:
  explicit StubQueryGenerator(std::string suffix = " unrelated-token") : suffix_(std::move(suffix)) {}
  std::string generate(const GenerationRequest& request) override;

 private:
  std::string suffix_;
};

// Out-of-process wire protocol: one JSON object per line in each direction.
//   request:  {"language":"en","path":"A > B","query":"..."}
//   response: {"query":"..."}
std::string encode_generation_request(const GenerationRequest& request);
/// Throws GeneratorUnavailable on malformed JSON or a missing "query" string.
std::string decode_generation_response(std::string_view line);

/// Runs `argv` once and exchanges protocol lines over its stdin/stdout.
/// Not thread-safe; requests are strictly sequential.
class ProcessQueryGenerator final : public QueryGenerator {
 public:
  explicit ProcessQueryGenerator(std::vector<std::string> argv);
  ~ProcessQueryGenerator() override;
  ProcessQueryGenerator(const ProcessQueryGenerator&) = delete;
  ProcessQueryGenerator& operator=(const ProcessQueryGenerator&) = delete;

  std::string generate(const GenerationRequest& request) override;

 private:
  struct Process;
  std::unique_ptr<Process> process_;
};

}  // namespace relmine
