#pragma once

#include <cstdint>
#include <string>

#include "damt/align.hpp"
#include "damt/augment.hpp"
#include "damt/text.hpp"
#include "damt/translate.hpp"
#include "json.hpp"

namespace damt {

struct LexiconSettings {
  std::size_t n_lemmas = 5000;
  std::string oov_policy = "copy";  // copy | drop
  std::size_t max_suggestions = 10;
  std::string separator = "<sep>";
};

struct TranslationSettings {
  std::string mode = "stub";  // stub | http
  std::string stub_path;
  RemoteClientConfig remote;
};

// The single JSON document driving every stage. Relative paths are resolved
// against the config file's directory; all referenced files must exist when
// the config is loaded. One top-level seed feeds every stage through labeled
// stream derivation.
struct PipelineConfig {
  std::int64_t seed = 42;
  std::size_t threads = 1;
  std::string tokenizer = "whitespace";
  std::string out_dir = "out";

  std::string source_lang;
  std::string target_lang;
  std::string bible_source;
  std::string bible_target;
  std::string domain_source;
  std::string domain_target;
  std::string hypothesis;   // optional; "" when unset
  std::string lemma_table;  // optional; "" = identity lemmatizer

  SplitSpec split;
  AlignConfig align;
  CorruptionSpec corruption;
  LexiconSettings lexicon;
  TranslationSettings translation;
  std::size_t batch_size = 32;
};

PipelineConfig load_config(const std::string& path);

// Propagates the top-level seed and thread cap into the per-stage configs.
// Called after any flag overrides, before running stages.
void finalize_config(PipelineConfig& config);

// Effective config as JSON (resolved paths, all knobs) for manifests.
nlohmann::json config_snapshot(const PipelineConfig& config);

}  // namespace damt
