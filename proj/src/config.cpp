#include "damt/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include "damt/errors.hpp"

namespace fs = std::filesystem;

namespace damt {

namespace {

using nlohmann::json;

[[noreturn]] void bad_key(const std::string& key, const std::string& what) {
  throw ConfigError("config: " + key + ": " + what);
}

void reject_unknown(const json& obj, const std::string& scope,
                    const std::set<std::string>& allowed) {
  for (const auto& [key, unused] : obj.items()) {
    if (!allowed.count(key)) {
      bad_key(scope.empty() ? key : scope + "." + key, "unknown key");
    }
  }
}

std::string require_string(const json& obj, const std::string& key) {
  if (!obj.contains(key)) bad_key(key, "missing required key");
  if (!obj.at(key).is_string()) bad_key(key, "expected a string");
  std::string value = obj.at(key).get<std::string>();
  if (value.empty()) bad_key(key, "must be non-empty");
  return value;
}

std::string optional_string(const json& obj, const std::string& key,
                            const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) bad_key(key, "expected a string");
  return obj.at(key).get<std::string>();
}

double number_or(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) bad_key(key, "expected a number");
  return obj.at(key).get<double>();
}

std::int64_t integer_or(const json& obj, const std::string& key,
                        std::int64_t fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number_integer()) bad_key(key, "expected an integer");
  return obj.at(key).get<std::int64_t>();
}

std::size_t count_or(const json& obj, const std::string& key,
                     std::size_t fallback, const std::string& scope) {
  if (!obj.contains(key)) return fallback;
  std::string full = scope.empty() ? key : scope + "." + key;
  if (!obj.at(key).is_number_integer() || obj.at(key).get<std::int64_t>() < 0) {
    bad_key(full, "expected a non-negative integer");
  }
  return obj.at(key).get<std::size_t>();
}

bool flag_or(const json& obj, const std::string& key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) bad_key(key, "expected a boolean");
  return obj.at(key).get<bool>();
}

std::string resolve_path(const fs::path& base, const std::string& p) {
  fs::path path(p);
  if (!path.is_absolute()) path = base / path;
  return path.lexically_normal().string();
}

std::string resolve_existing(const fs::path& base, const std::string& key,
                             const std::string& p) {
  std::string resolved = resolve_path(base, p);
  if (!fs::is_regular_file(resolved)) {
    bad_key(key, "file not found: " + resolved);
  }
  return resolved;
}

}  // namespace

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open " + path);
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config: invalid JSON in " + path + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config: top level must be a JSON object");
  }
  reject_unknown(doc, "",
                 {"seed", "threads", "tokenizer", "out_dir", "source_lang",
                  "target_lang", "bible_source", "bible_target", "domain_source",
                  "domain_target", "hypothesis", "lemma_table", "split", "align",
                  "corruption", "lexicon", "translation", "batch_size"});

  const fs::path base = fs::absolute(fs::path(path)).parent_path();
  PipelineConfig cfg;

  cfg.seed = integer_or(doc, "seed", cfg.seed);
  cfg.threads = count_or(doc, "threads", cfg.threads, "");
  if (cfg.threads == 0) bad_key("threads", "must be at least 1");
  cfg.tokenizer = optional_string(doc, "tokenizer", cfg.tokenizer);
  if (cfg.tokenizer != "whitespace" && cfg.tokenizer != "chars") {
    bad_key("tokenizer", "must be \"whitespace\" or \"chars\"");
  }
  cfg.out_dir = resolve_path(base, optional_string(doc, "out_dir", cfg.out_dir));

  cfg.source_lang = require_string(doc, "source_lang");
  cfg.target_lang = require_string(doc, "target_lang");
  cfg.bible_source = resolve_existing(base, "bible_source", require_string(doc, "bible_source"));
  cfg.bible_target = resolve_existing(base, "bible_target", require_string(doc, "bible_target"));
  cfg.domain_source = resolve_existing(base, "domain_source", require_string(doc, "domain_source"));
  cfg.domain_target = resolve_existing(base, "domain_target", require_string(doc, "domain_target"));

  std::string hyp = optional_string(doc, "hypothesis", "");
  if (!hyp.empty()) cfg.hypothesis = resolve_existing(base, "hypothesis", hyp);
  std::string lemmas = optional_string(doc, "lemma_table", "");
  if (!lemmas.empty()) cfg.lemma_table = resolve_existing(base, "lemma_table", lemmas);

  if (doc.contains("split")) {
    const json& s = doc.at("split");
    if (!s.is_object()) bad_key("split", "expected an object");
    reject_unknown(s, "split", {"validation_fraction", "test_count", "train_cap"});
    cfg.split.validation_fraction =
        number_or(s, "validation_fraction", cfg.split.validation_fraction);
    if (cfg.split.validation_fraction <= 0.0 || cfg.split.validation_fraction >= 1.0) {
      bad_key("split.validation_fraction", "must lie in (0, 1)");
    }
    cfg.split.test_count = count_or(s, "test_count", cfg.split.test_count, "split");
    cfg.split.train_cap = count_or(s, "train_cap", cfg.split.train_cap, "split");
    if (cfg.split.train_cap == 0) bad_key("split.train_cap", "must be positive");
  }

  if (doc.contains("align")) {
    const json& a = doc.at("align");
    if (!a.is_object()) bad_key("align", "expected an object");
    reject_unknown(a, "align",
                   {"em_iterations", "diagonal", "min_pair_count", "tension", "null_prob"});
    cfg.align.em_iterations =
        static_cast<int>(integer_or(a, "em_iterations", cfg.align.em_iterations));
    if (cfg.align.em_iterations < 1) bad_key("align.em_iterations", "must be at least 1");
    cfg.align.diagonal = flag_or(a, "diagonal", cfg.align.diagonal);
    cfg.align.min_pair_count =
        static_cast<int>(integer_or(a, "min_pair_count", cfg.align.min_pair_count));
    if (cfg.align.min_pair_count < 1) bad_key("align.min_pair_count", "must be at least 1");
    cfg.align.params.tension = number_or(a, "tension", cfg.align.params.tension);
    if (cfg.align.params.tension <= 0.0) bad_key("align.tension", "must be positive");
    cfg.align.params.null_prob = number_or(a, "null_prob", cfg.align.params.null_prob);
    if (cfg.align.params.null_prob <= 0.0 || cfg.align.params.null_prob >= 1.0) {
      bad_key("align.null_prob", "must lie in (0, 1)");
    }
  }

  if (doc.contains("corruption")) {
    const json& c = doc.at("corruption");
    if (!c.is_object()) bad_key("corruption", "expected an object");
    reject_unknown(c, "corruption",
                   {"mask_ratio", "span_lambda", "dict_replace_prob", "mask_token"});
    cfg.corruption.mask_ratio = number_or(c, "mask_ratio", cfg.corruption.mask_ratio);
    if (cfg.corruption.mask_ratio < 0.0 || cfg.corruption.mask_ratio >= 1.0) {
      bad_key("corruption.mask_ratio", "must lie in [0, 1)");
    }
    cfg.corruption.span_lambda = number_or(c, "span_lambda", cfg.corruption.span_lambda);
    if (cfg.corruption.span_lambda <= 0.0) bad_key("corruption.span_lambda", "must be positive");
    cfg.corruption.dict_replace_prob =
        number_or(c, "dict_replace_prob", cfg.corruption.dict_replace_prob);
    if (cfg.corruption.dict_replace_prob < 0.0 || cfg.corruption.dict_replace_prob > 1.0) {
      bad_key("corruption.dict_replace_prob", "must lie in [0, 1]");
    }
    cfg.corruption.mask_token = optional_string(c, "mask_token", cfg.corruption.mask_token);
    if (cfg.corruption.mask_token.empty()) bad_key("corruption.mask_token", "must be non-empty");
  }

  if (doc.contains("lexicon")) {
    const json& l = doc.at("lexicon");
    if (!l.is_object()) bad_key("lexicon", "expected an object");
    reject_unknown(l, "lexicon", {"n_lemmas", "oov_policy", "max_suggestions", "separator"});
    cfg.lexicon.n_lemmas = count_or(l, "n_lemmas", cfg.lexicon.n_lemmas, "lexicon");
    if (cfg.lexicon.n_lemmas == 0) bad_key("lexicon.n_lemmas", "must be positive");
    cfg.lexicon.oov_policy = optional_string(l, "oov_policy", cfg.lexicon.oov_policy);
    if (cfg.lexicon.oov_policy != "copy" && cfg.lexicon.oov_policy != "drop") {
      bad_key("lexicon.oov_policy", "must be \"copy\" or \"drop\"");
    }
    cfg.lexicon.max_suggestions =
        count_or(l, "max_suggestions", cfg.lexicon.max_suggestions, "lexicon");
    cfg.lexicon.separator = optional_string(l, "separator", cfg.lexicon.separator);
    if (cfg.lexicon.separator.empty()) bad_key("lexicon.separator", "must be non-empty");
  }

  if (doc.contains("translation")) {
    const json& t = doc.at("translation");
    if (!t.is_object()) bad_key("translation", "expected an object");
    reject_unknown(t, "translation",
                   {"mode", "stub_path", "endpoint_url", "api_key_env", "batch_size"});
    cfg.translation.mode = optional_string(t, "mode", cfg.translation.mode);
    if (cfg.translation.mode == "stub") {
      cfg.translation.stub_path =
          resolve_existing(base, "translation.stub_path", require_string(t, "stub_path"));
    } else if (cfg.translation.mode == "http") {
      cfg.translation.remote.endpoint_url = require_string(t, "endpoint_url");
      cfg.translation.remote.api_key_env = optional_string(t, "api_key_env", "");
      cfg.translation.remote.batch_size =
          count_or(t, "batch_size", cfg.translation.remote.batch_size, "translation");
      if (cfg.translation.remote.batch_size == 0) {
        bad_key("translation.batch_size", "must be positive");
      }
    } else {
      bad_key("translation.mode", "must be \"stub\" or \"http\"");
    }
  } else {
    bad_key("translation", "missing required key");
  }

  if (doc.contains("batch_size")) {
    cfg.batch_size = count_or(doc, "batch_size", cfg.batch_size, "");
  }
  if (cfg.batch_size < 2 || cfg.batch_size % 2 != 0) {
    bad_key("batch_size", "must be an even integer >= 2");
  }

  finalize_config(cfg);
  return cfg;
}

void finalize_config(PipelineConfig& config) {
  config.split.seed = config.seed;
  config.align.seed = config.seed;
  config.align.threads = config.threads;
  config.corruption.seed = config.seed;
}

nlohmann::json config_snapshot(const PipelineConfig& c) {
  nlohmann::json j;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["tokenizer"] = c.tokenizer;
  j["out_dir"] = c.out_dir;
  j["source_lang"] = c.source_lang;
  j["target_lang"] = c.target_lang;
  j["bible_source"] = c.bible_source;
  j["bible_target"] = c.bible_target;
  j["domain_source"] = c.domain_source;
  j["domain_target"] = c.domain_target;
  j["hypothesis"] = c.hypothesis;
  j["lemma_table"] = c.lemma_table;
  j["split"] = {{"validation_fraction", c.split.validation_fraction},
                {"test_count", c.split.test_count},
                {"train_cap", c.split.train_cap}};
  j["align"] = {{"em_iterations", c.align.em_iterations},
                {"diagonal", c.align.diagonal},
                {"min_pair_count", c.align.min_pair_count},
                {"tension", c.align.params.tension},
                {"null_prob", c.align.params.null_prob}};
  j["corruption"] = {{"mask_ratio", c.corruption.mask_ratio},
                     {"span_lambda", c.corruption.span_lambda},
                     {"dict_replace_prob", c.corruption.dict_replace_prob},
                     {"mask_token", c.corruption.mask_token}};
  j["lexicon"] = {{"n_lemmas", c.lexicon.n_lemmas},
                  {"oov_policy", c.lexicon.oov_policy},
                  {"max_suggestions", c.lexicon.max_suggestions},
                  {"separator", c.lexicon.separator}};
  nlohmann::json t;
  t["mode"] = c.translation.mode;
  if (c.translation.mode == "stub") {
    t["stub_path"] = c.translation.stub_path;
  } else {
    t["endpoint_url"] = c.translation.remote.endpoint_url;
    t["api_key_env"] = c.translation.remote.api_key_env;
    t["batch_size"] = c.translation.remote.batch_size;
  }
  j["translation"] = std::move(t);
  j["batch_size"] = c.batch_size;
  return j;
}

}  // namespace damt
