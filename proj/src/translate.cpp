#include "damt/translate.hpp"

#include <cstdlib>
#include <fstream>

#include <httplib.h>
#include <json.hpp>

#include "damt/errors.hpp"
#include "damt/strconv.hpp"

namespace damt {

namespace {

class StubTranslationClient final : public TranslationClient {
 public:
  explicit StubTranslationClient(std::map<std::string, std::string> table)
      : table_(std::move(table)) {}

  std::map<std::string, std::string> translate(
      const std::vector<std::string>& forms, const std::string&,
      const std::string&) override {
    std::map<std::string, std::string> out;
    for (const auto& form : forms) {
      auto it = table_.find(form);
      if (it != table_.end()) out.emplace(form, it->second);
    }
    return out;
  }

  std::string name() const override { return "stub"; }

 private:
  std::map<std::string, std::string> table_;
};

struct ParsedUrl {
  std::string base;  // scheme://host[:port]
  std::string path;  // starts with '/'
};

ParsedUrl parse_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigError("endpoint_url needs a scheme: " + url);
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http")
    throw ConfigError("unsupported endpoint scheme '" + scheme +
                      "' (only http)");
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class HttpTranslationClient final : public TranslationClient {
 public:
  explicit HttpTranslationClient(RemoteClientConfig config)
      : config_(std::move(config)), url_(parse_url(config_.endpoint_url)) {
    if (config_.batch_size == 0)
      throw ConfigError("translation batch_size must be >= 1");
  }

  std::map<std::string, std::string> translate(
      const std::vector<std::string>& forms, const std::string& source_lang,
      const std::string& target_lang) override {
    httplib::Client client(url_.base);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);

    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
      const char* key = std::getenv(config_.api_key_env.c_str());
      if (key == nullptr || *key == '\0')
        throw ConfigError("environment variable " + config_.api_key_env +
                          " is not set");
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    std::map<std::string, std::string> out;
    for (std::size_t start = 0; start < forms.size();
         start += config_.batch_size) {
      const std::size_t end =
          std::min(start + config_.batch_size, forms.size());
      nlohmann::json body;
      body["source_lang"] = source_lang;
      body["target_lang"] = target_lang;
      body["texts"] = nlohmann::json::array();
      for (std::size_t i = start; i < end; ++i)
        body["texts"].push_back(forms[i]);

      auto res = client.Post(url_.path, headers, body.dump(),
                             "application/json");
      if (!res || res->status != 200) {
        throw DataError("translation request failed after " +
                        std::to_string(start) + " of " +
                        std::to_string(forms.size()) + " forms (" +
                        (res ? "HTTP " + std::to_string(res->status)
                             : "no response") +
                        ")");
      }
      nlohmann::json reply;
      try {
        reply = nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad translation response: ") + e.what());
      }
      if (!reply.contains("translations") || !reply["translations"].is_array() ||
          reply["translations"].size() != end - start) {
        throw DataError("translation response does not match the request: "
                        "expected " + std::to_string(end - start) +
                        " translations");
      }
      for (std::size_t i = start; i < end; ++i) {
        const auto& t = reply["translations"][i - start];
        if (!t.is_string()) continue;  // per-form failure
        auto s = t.get<std::string>();
        if (!s.empty()) out.emplace(forms[i], std::move(s));
      }
    }
    return out;
  }

  std::string name() const override { return "http"; }

 private:
  RemoteClientConfig config_;
  ParsedUrl url_;
};

}  // namespace

std::unique_ptr<TranslationClient> make_stub_client(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  std::map<std::string, std::string> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_tab(line);
    if (fields.size() != 2)
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected 2 tab-separated fields");
    table.emplace(std::string(fields[0]), std::string(fields[1]));
  }
  return std::make_unique<StubTranslationClient>(std::move(table));
}

std::unique_ptr<TranslationClient> make_http_client(
    const RemoteClientConfig& config) {
  return std::make_unique<HttpTranslationClient>(config);
}

}  // namespace damt
