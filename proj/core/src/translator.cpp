#include "relmine/translator.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace relmine {

std::vector<std::string> StubTranslator::translate(std::span<const std::string> texts, Language, Language target) {
  const std::string prefix = "[" + std::string(code(target)) + "] ";
  std::vector<std::string> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(prefix + t);
  return out;
}

std::string encode_translate_request(std::span<const std::string> texts, Language source, Language target) {
  const nlohmann::json j = {{"source_lang", std::string(code(source))},
                            {"target_lang", std::string(code(target))},
                            {"texts", std::vector<std::string>(texts.begin(), texts.end())}};
  return j.dump();
}

std::vector<std::string> decode_translate_response(std::string_view body, std::size_t expected) {
  const auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw TranslationError("translator returned malformed JSON");
  const auto it = j.find("texts");
  if (it == j.end() || !it->is_array()) throw TranslationError("translator response lacks a \"texts\" array");
  std::vector<std::string> out;
  for (const auto& t : *it) {
    if (!t.is_string()) throw TranslationError("translator returned a non-string text");
    out.push_back(t.get<std::string>());
  }
  if (out.size() != expected) {
    throw TranslationError("translator returned " + std::to_string(out.size()) + " texts for " +
                           std::to_string(expected));
  }
  return out;
}

HttpTranslator::HttpTranslator(std::string base_url, int timeout_seconds)
    : base_url_(std::move(base_url)), timeout_seconds_(timeout_seconds) {}

std::vector<std::string> HttpTranslator::translate(std::span<const std::string> texts, Language source,
                                                   Language target) {
  httplib::Client client(base_url_);
  client.set_connection_timeout(timeout_seconds_);
  client.set_read_timeout(timeout_seconds_);
  const auto response =
      client.Post("/translate", encode_translate_request(texts, source, target), "application/json");
  if (!response) throw TranslationError("translator unreachable: " + httplib::to_string(response.error()));
  if (response->status != 200) {
    throw TranslationError("translator answered HTTP " + std::to_string(response->status));
  }
  return decode_translate_response(response->body, texts.size());
}

}  // namespace relmine
