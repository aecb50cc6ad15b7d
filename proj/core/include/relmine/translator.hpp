#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relmine/errors.hpp"
#include "relmine/language.hpp"

namespace relmine {

/// One batch could not be translated (service down, non-200, bad body).
class TranslationError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

/// Every batch of a plan failed.
class TranslatorUnavailable : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

/// Batch text translation. Returns exactly one output per input, in order,
/// or throws TranslationError. Implementations used with more than one batch
/// in flight must tolerate concurrent calls.
class Translator {
 public:
  virtual ~Translator() = default;
  virtual std::vector<std::string> translate(std::span<const std::string> texts, Language source,
                                             Language target) = 0;
};

/// Prefixes "[<target code>] " to each text.
class StubTranslator final : public Translator {
 public:
  std::vector<std::string> translate(std::span<const std::string> texts, Language source, Language target) override;
};

// HTTP contract: POST <base>/translate with
//   {"source_lang":"en","target_lang":"de","texts":[...]}
// answered by 200 and {"texts":[...]} of the same length. Anything else is a
// failed batch.
std::string encode_translate_request(std::span<const std::string> texts, Language source, Language target);
/// Throws TranslationError on malformed JSON or a length mismatch.
std::vector<std::string> decode_translate_response(std::string_view body, std::size_t expected);

class HttpTranslator final : public Translator {
 public:
  /// `base_url` like "http://127.0.0.1:8080".
  explicit HttpTranslator(std::string base_url, int timeout_seconds = 60);
  std::vector<std::string> translate(std::span<const std::string> texts, Language source, Language target) override;

 private:
  std::string base_url_;
  int timeout_seconds_;
};

}  // namespace relmine
