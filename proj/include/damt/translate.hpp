#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace damt {

// Behavioral interface over the external translation service.  The returned
// map covers the forms that translated; anything absent is a per-form
// failure the caller skips and reports.  Transport-level problems throw.
class TranslationClient {
 public:
  virtual ~TranslationClient() = default;
  virtual std::map<std::string, std::string> translate(
      const std::vector<std::string>& forms, const std::string& source_lang,
      const std::string& target_lang) = 0;
  virtual std::string name() const = 0;
};

// Deterministic file-backed client for tests and offline runs: TSV
// "source<TAB>translation"; unlisted forms fail per-form.
std::unique_ptr<TranslationClient> make_stub_client(const std::string& path);

struct RemoteClientConfig {
  std::string endpoint_url;  // e.g. http://host:port/translate
  std::string api_key_env;   // env var holding the bearer token; "" = none
  std::size_t batch_size = 128;
};

// POSTs {"source_lang", "target_lang", "texts": [...]} as JSON and expects
// {"translations": [...]} aligned by index; an empty translation is a
// per-form failure, any non-200 response a transport failure.
std::unique_ptr<TranslationClient> make_http_client(
    const RemoteClientConfig& config);

}  // namespace damt
