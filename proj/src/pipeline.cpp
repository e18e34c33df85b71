#include "damt/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "damt/augment.hpp"
#include "damt/batching.hpp"
#include "damt/corpus_io.hpp"
#include "damt/errors.hpp"
#include "damt/lexicon.hpp"
#include "damt/metrics.hpp"
#include "damt/sampling.hpp"
#include "damt/sha256.hpp"
#include "damt/version.hpp"

namespace fs = std::filesystem;

namespace damt {

namespace {

using nlohmann::json;

std::string iso_utc_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json entry_to_json(const ManifestEntry& e) {
  json j;
  j["operation"] = e.operation;
  j["config"] = e.config;
  j["inputs"] = e.inputs;
  j["outputs"] = e.outputs;
  j["started_at"] = e.started_at;
  j["finished_at"] = e.finished_at;
  j["tool_version"] = e.tool_version;
  j["details"] = e.details;
  return j;
}

ManifestEntry entry_from_json(const json& j) {
  ManifestEntry e;
  e.operation = j.at("operation").get<std::string>();
  e.config = j.at("config");
  e.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
  e.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
  e.started_at = j.at("started_at").get<std::string>();
  e.finished_at = j.at("finished_at").get<std::string>();
  e.tool_version = j.at("tool_version").get<std::string>();
  e.details = j.value("details", json::object());
  return e;
}

std::vector<Sentence> corpus_sentences(const std::string& path,
                                       const std::string& language_tag,
                                       const std::string& domain_tag) {
  return load_monolingual(path, language_tag, domain_tag).corpus.sentences;
}

}  // namespace

Manifest Manifest::load(const std::string& path) {
  Manifest m;
  std::ifstream in(path);
  if (!in) return m;
  json doc;
  try {
    in >> doc;
    for (const auto& [name, entry] : doc.at("entries").items()) {
      m.entries[name] = entry_from_json(entry);
    }
  } catch (const json::exception& e) {
    throw DataError("malformed manifest " + path + ": " + e.what());
  }
  return m;
}

void Manifest::save(const std::string& path) const {
  json doc;
  doc["tool_version"] = kToolVersion;
  json entries = json::object();
  for (const auto& [name, entry] : this->entries) {
    entries[name] = entry_to_json(entry);
  }
  doc["entries"] = std::move(entries);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot open manifest for writing: " + path);
  }
  out << doc.dump(2) << '\n';
  if (!out) {
    throw DataError("failed writing manifest: " + path);
  }
}

struct PipelineRunner::StageIo {
  std::string name;
  json config;
  std::map<std::string, std::string> inputs;
  std::vector<std::string> outputs;
  json details = json::object();
  std::string started_at;
};

PipelineRunner::PipelineRunner(PipelineConfig config, bool force)
    : config_(std::move(config)), force_(force) {
  finalize_config(config_);
  fs::create_directories(config_.out_dir);
  manifest_ = Manifest::load(manifest_path());
}

const std::vector<std::string>& PipelineRunner::stage_names() {
  static const std::vector<std::string> names = {
      "prepare", "align-train", "harvest",      "build-dict",
      "merge-dict", "dali",     "leca",         "cpt",
      "plan-batches", "evaluate", "length-curve", "stats"};
  return names;
}

std::string PipelineRunner::out_path(const std::string& rel) const {
  return (fs::path(config_.out_dir) / rel).string();
}

std::string PipelineRunner::manifest_path() const {
  return out_path("manifest.json");
}

bool PipelineRunner::up_to_date(
    const std::string& name, const json& stage_config,
    const std::map<std::string, std::string>& input_hashes,
    const std::vector<std::string>& outputs) const {
  auto it = manifest_.entries.find(name);
  if (it == manifest_.entries.end()) return false;
  const ManifestEntry& e = it->second;
  if (e.config != stage_config) return false;
  if (e.inputs != input_hashes) return false;
  if (e.outputs.size() != outputs.size()) return false;
  for (const std::string& rel : outputs) {
    auto out = e.outputs.find(rel);
    if (out == e.outputs.end()) return false;
    std::string path = out_path(rel);
    if (!fs::is_regular_file(path)) return false;
    if (sha256_file_hex(path) != out->second) return false;
  }
  return true;
}

StageResult PipelineRunner::finish_stage(StageIo io) {
  ManifestEntry entry;
  entry.operation = io.name;
  entry.config = std::move(io.config);
  entry.inputs = std::move(io.inputs);
  for (const std::string& rel : io.outputs) {
    entry.outputs[rel] = sha256_file_hex(out_path(rel));
  }
  entry.started_at = std::move(io.started_at);
  entry.finished_at = iso_utc_now();
  entry.tool_version = kToolVersion;
  entry.details = std::move(io.details);
  manifest_.entries[io.name] = std::move(entry);
  manifest_.save(manifest_path());
  StageResult result;
  result.name = io.name;
  result.outputs = std::move(io.outputs);
  return result;
}

// Records `key` -> hash of `path` as a stage input; a missing file is a data
// error naming the stage (usually a prerequisite stage that has not run).
void PipelineRunner::add_input(StageIo& io, const std::string& key,
                               const std::string& path) const {
  if (!fs::is_regular_file(path)) {
    throw DataError(io.name + ": missing input " + path);
  }
  io.inputs[key] = sha256_file_hex(path);
}

StageResult PipelineRunner::run_stage(const std::string& name) {
  if (name == "prepare") return stage_prepare();
  if (name == "align-train") return stage_align_train();
  if (name == "harvest") return stage_harvest();
  if (name == "build-dict") return stage_build_dict();
  if (name == "merge-dict") return stage_merge_dict();
  if (name == "dali") return stage_dali();
  if (name == "leca") return stage_leca();
  if (name == "cpt") return stage_cpt();
  if (name == "plan-batches") return stage_plan_batches();
  if (name == "evaluate") return stage_evaluate();
  if (name == "length-curve") return stage_length_curve();
  if (name == "stats") return stage_stats();
  throw ConfigError("unknown stage: " + name);
}

std::vector<StageResult> PipelineRunner::run_all() {
  std::vector<StageResult> results;
  for (const std::string& name : stage_names()) {
    if (config_.hypothesis.empty() &&
        (name == "evaluate" || name == "length-curve")) {
      continue;
    }
    results.push_back(run_stage(name));
  }
  return results;
}

StageResult PipelineRunner::stage_prepare() {
  StageIo io;
  io.name = "prepare";
  io.config = {{"seed", config_.seed},
               {"validation_fraction", config_.split.validation_fraction},
               {"test_count", config_.split.test_count},
               {"train_cap", config_.split.train_cap}};
  add_input(io, config_.bible_source, config_.bible_source);
  add_input(io, config_.bible_target, config_.bible_target);
  add_input(io, config_.domain_source, config_.domain_source);
  add_input(io, config_.domain_target, config_.domain_target);
  io.outputs = {"bible_train.src",  "bible_train.tgt", "bible_valid.src",
                "bible_valid.tgt",  "domain_train.src", "domain_train.tgt",
                "domain_test.src",  "domain_test.tgt"};
  if (!force_ && up_to_date(io.name, io.config, io.inputs, io.outputs)) {
    return {io.name, true, io.outputs};
  }
  io.started_at = iso_utc_now();

  ParallelCorpus bible = load_parallel(config_.bible_source, config_.bible_target,
                                       config_.source_lang, config_.target_lang);
  auto [bible_train, bible_valid] = split_validation(bible, config_.split);
  write_parallel(out_path("bible_train.src"), out_path("bible_train.tgt"), bible_train);
  write_parallel(out_path("bible_valid.src"), out_path("bible_valid.tgt"), bible_valid);

  ParallelCorpus domain = load_parallel(config_.domain_source, config_.domain_target,
                                        config_.source_lang, config_.target_lang);
  auto [rest, domain_test] = hold_out_test(domain, config_.split);
  ParallelCorpus domain_train = sample_cap(rest, config_.split.train_cap, config_.seed);
  write_parallel(out_path("domain_train.src"), out_path("domain_train.tgt"), domain_train);
  write_parallel(out_path("domain_test.src"), out_path("domain_test.tgt"), domain_test);

  io.details = {{"bible_pairs", bible.size()},
                {"bible_train", bible_train.size()},
                {"bible_valid", bible_valid.size()},
                {"domain_pairs", domain.size()},
                {"domain_train", domain_train.size()},
                {"domain_test", domain_test.size()}};
  return finish_stage(std::move(io));
}

StageResult PipelineRunner::stage_align_train() {
  StageIo io;
  io.name = "align-train";
  io.config = {{"seed", config_.seed},
               {"em_iterations", config_.align.em_iterations},
               {"diagonal", config_.align.diagonal},
               {"tension", config_.align.params.tension},
               {"null_prob", config_.align.params.null_prob}};
  add_input(io, "bible_train.src", out_path("bible_train.src"));
  add_input(io, "bible_train.tgt", out_path("bible_train.tgt"));
  io.outputs = {"align_model.tsv"};
  if (!force_ && up_to_date(io.name, io.config, io.inputs, io.outputs)) {
    return {io.name, true, io.outputs};
  }
  io.started_at = iso_utc_now();

  ParallelCorpus corpus =
      load_parallel(out_path("bible_train.src"), out_path("bible_train.tgt"),
                    config_.source_lang, config_.target_lang);
  AlignmentModel model = train_aligner(corpus, config_.align);
  save_model_tsv(model, out_path("align_model.tsv"));

  io.details = {{"pairs", corpus.size()},
                {"log_likelihood", model.iteration_log_likelihood}};
  return finish_stage(std::move(io));
}

StageResult PipelineRunner::stage_harvest() {
  StageIo io;
  io.name = "harvest";
  io.config = {{"min_pair_count", config_.align.min_pair_count}};
  add_input(io, "align_model.tsv", out_path("align_model.tsv"));
  add_input(io, "bible_train.src", out_path("bible_train.src"));
  add_input(io, "bible_train.tgt", out_path("bible_train.tgt"));
  io.outputs = {"harvest.tsv"};
  if (!force_ && up_to_date(io.name, io.config, io.inputs, io.outputs)) {
    return {io.name, true, io.outputs};
  }
  io.started_at = iso_utc_now();

  AlignmentModel model = load_model_tsv(out_path("align_model.tsv"));
  ParallelCorpus corpus =
      load_parallel(out_path("bible_train.src"), out_path("bible_train.tgt"),
                    config_.source_lang, config_.target_lang);
  std::vector<HarvestedPair> pairs =
      harvest_pairs(model, corpus, config_.align.min_pair_count);
  save_harvest_tsv(pairs, out_path("harvest.tsv"));

  io.details = {{"pairs", pairs.size()}};
  return finish_stage(std::move(io));
}

StageResult PipelineRunner::stage_build_dict() {
  StageIo io;
  io.name = "build-dict";
  json translation = {{"mode", config_.translation.mode}};
  if (config_.translation.mode == "stub") {
    translation["stub_path"] = config_.translation.stub_path;
  } else {
    translation["endpoint_url"] = config_.translation.remote.endpoint_url;
    translation["api_key_env"] = config_.translation.remote.api_key_env;
    translation["batch_size"] = config_.translation.remote.batch_size;
  }
  io.config = {{"n_lemmas", config_.lexicon.n_lemmas},
               {"source_lang", config_.source_lang},
               {"target_lang", config_.target_lang},
               {"lemmatizer", config_.lemma_table.empty() ? "identity" : "table"},
               {"translation", translation}};
  add_input(io, "domain_train.src", out_path("domain_train.src"));
  if (config_.translation.mode == "stub") {
    add_input(io, config_.translation.stub_path, config_.translation.stub_path);
  }
  if (!config_.lemma_table.empty()) {
    add_input(io, config_.lemma_table, config_.lemma_table);
  }
  io.outputs = {"domain_dict.tsv"};
  if (!force_ && up_to_date(io.name, io.config, io.inputs, io.outputs)) {
    return {io.name, true, io.outputs};
  }
  io.started_at = iso_utc_now();

  Corpus mono = load_monolingual(out_path("domain_train.src"), config_.source_lang,
                                 "domain")
                    .corpus;
  std::unique_ptr<Lemmatizer> lemmatizer;
  if (config_.lemma_table.empty()) {
    lemmatizer = std::make_unique<IdentityLemmatizer>();
  } else {
    lemmatizer = load_lemma_table(config_.lemma_table);
  }
  FrequentExtraction extraction =
      extract_frequent(mono, *lemmatizer, config_.lexicon.n_lemmas);

  std::unique_ptr<TranslationClient> client;
  if (config_.translation.mode == "stub") {
    client = make_stub_client(config_.translation.stub_path);
  } else {
    client = make_http_client(config_.translation.remote);
  }
  DomainLexiconBuild build = build_domain_lexicon(
      extraction, *client, config_.source_lang, config_.target_lang);
  save_lexicon_tsv(build.lexicon, out_path("domain_dict.tsv"));

  io.details = {{"lemmas", extraction.lemmas.size()},
                {"boundary_ties_included", extraction.boundary_ties_included},
                {"entries", build.lexicon.size()},
                {"skipped_forms", build.skipped_forms}};
  return finish_stage(std::move(io));
}

StageResult PipelineRunner::stage_merge_dict() {
  StageIo io;
  io.name = "merge-dict";
  io.config = json::object();
  add_input(io, "domain_dict.tsv", out_path("domain_dict.tsv"));
  add_input(io, "harvest.tsv", out_path("harvest.tsv"));
  io.outputs = {"dict.tsv"};
  if (!force_ && up_to_date(io.name, io.config, io.inputs, io.outputs)) {
    return {io.name, true, io.outputs};
  }
  io.started_at = iso_utc_now();

  Lexicon domain = load_lexicon_tsv(out_path("domain_dict.tsv"));
  std::vector<HarvestedPair> harvested = load_harvest_tsv(out_path("harvest.tsv"));
  Lexicon merged = merge_bible(domain, harvested);
  save_lexicon_tsv(merged, out_path("dict.tsv"));

  io.details = {{"domain_entries", domain.size()},
                {"harvested_pairs", harvested.size()},
                {"bible_added", merged.size() - domain.size()},
                {"final_entries", merged.size()}};
  return finish_stage(std::move(io));
}

StageResult PipelineRunner::stage_dali() {
  StageIo io;
  io.name = "dali";
  io.config = {{"oov_policy", config_.lexicon.oov_policy}};
  add_input(io, "domain_train.src", out_path("domain_train.src"));
  add_input(io, "dict.tsv", out_path("dict.tsv"));
  io.outputs = {"dali.src", "dali.tgt"};
  if (!force_ && up_to_date(io.name, io.config, io.inputs, io.outputs)) {
    return {io.name, true, io.outputs};
  }
  io.started_at = iso_utc_now();

  Corpus mono = load_monolingual(out_path("domain_train.src"), config_.source_lang,
                                 "domain")
                    .corpus;
  Lexicon lexicon = load_lexicon_tsv(out_path("dict.tsv"));
  OovPolicy policy = config_.lexicon.oov_policy == "drop" ? OovPolicy::drop
                                                          : OovPolicy::copy;
  std::vector<PseudoPair> pairs = dali_synthesize(mono, lexicon, policy);

  std::vector<Sentence> sources, targets;
  std::array<std::size_t, 10> histogram{};
  double fraction_sum = 0.0;
  for (const PseudoPair& p : pairs) {
    sources.push_back(p.source);
    targets.push_back(p.pseudo_target);
    fraction_sum += p.replaced_fraction;
    auto bucket = static_cast<std::size_t>(p.replaced_fraction * 10.0);
    histogram[std::min<std::size_t>(bucket, 9)] += 1;
  }
  write_sentences(out_path("dali.src"), sources);
  write_sentences(out_path("dali.tgt"), targets);

  io.details = {{"pairs", pairs.size()},
                {"replaced_fraction_histogram", histogram},
                {"replaced_fraction_mean",
                 pairs.empty() ? 0.0 : fraction_sum / static_cast<double>(pairs.size())}};
  return finish_stage(std::move(io));
}

StageResult PipelineRunner::stage_leca() {
  StageIo io;
  io.name = "leca";
  io.config = {{"max_suggestions", config_.lexicon.max_suggestions},
               {"separator", config_.lexicon.separator}};
  add_input(io, "bible_train.src", out_path("bible_train.src"));
  add_input(io, "domain_test.src", out_path("domain_test.src"));
  add_input(io, "dict.tsv", out_path("dict.tsv"));
  io.outputs = {"leca_train.src", "leca_test.src"};
  if (!force_ && up_to_date(io.name, io.config, io.inputs, io.outputs)) {
    return {io.name, true, io.outputs};
  }
  io.started_at = iso_utc_now();

  Lexicon lexicon = load_lexicon_tsv(out_path("dict.tsv"));
  auto annotate_file = [&](const std::string& in_rel, const std::string& out_rel,
                           const std::string& domain_tag, std::size_t& with_hits) {
    Corpus corpus =
        load_monolingual(out_path(in_rel), config_.source_lang, domain_tag).corpus;
    std::vector<AnnotatedSentence> annotated =
        leca_annotate_corpus(corpus, lexicon, config_.lexicon.max_suggestions,
                             config_.lexicon.separator);
    std::vector<Sentence> rendered;
    with_hits = 0;
    for (const AnnotatedSentence& a : annotated) {
      if (!a.suggestions.empty()) ++with_hits;
      rendered.push_back(a.rendered);
    }
    write_sentences(out_path(out_rel), rendered);
    return annotated.size();
  };

  std::size_t train_hits = 0, test_hits = 0;
  std::size_t train_n = annotate_file("bible_train.src", "leca_train.src", "bible", train_hits);
  std::size_t test_n = annotate_file("domain_test.src", "leca_test.src", "domain", test_hits);

  io.details = {{"train_sentences", train_n},
                {"train_with_suggestions", train_hits},
                {"test_sentences", test_n},
                {"test_with_suggestions", test_hits}};
  return finish_stage(std::move(io));
}

StageResult PipelineRunner::stage_cpt() {
  StageIo io;
  io.name = "cpt";
  io.config = {{"seed", config_.seed},
               {"mask_ratio", config_.corruption.mask_ratio},
               {"span_lambda", config_.corruption.span_lambda},
               {"dict_replace_prob", config_.corruption.dict_replace_prob},
               {"mask_token", config_.corruption.mask_token},
               {"replace_length", config_.corruption.replace_length}};
  add_input(io, "domain_train.src", out_path("domain_train.src"));
  add_input(io, "dict.tsv", out_path("dict.tsv"));
  io.outputs = {"cpt_corrupted.txt", "cpt_original.txt"};
  if (!force_ && up_to_date(io.name, io.config, io.inputs, io.outputs)) {
    return {io.name, true, io.outputs};
  }
  io.started_at = iso_utc_now();

  Corpus mono = load_monolingual(out_path("domain_train.src"), config_.source_lang,
                                 "domain")
                    .corpus;
  Lexicon lexicon = load_lexicon_tsv(out_path("dict.tsv"));
  std::vector<CorruptionPair> pairs =
      cpt_corrupt_corpus(mono, lexicon, config_.corruption);

  std::vector<Sentence> corrupted, original;
  double fraction_sum = 0.0;
  double span_sum = 0.0;
  std::size_t span_draws = 0;
  for (const CorruptionPair& p : pairs) {
    corrupted.push_back(p.corrupted);
    original.push_back(p.original);
    std::size_t covered = 0;
    for (std::size_t len : p.span_lengths) covered += len;
    std::size_t stage1_len =
        p.corrupted.size() + covered - p.span_lengths.size();
    if (stage1_len > 0) {
      fraction_sum += static_cast<double>(p.masked_token_count) /
                      static_cast<double>(stage1_len);
    }
    for (std::size_t len : p.sampled_span_lengths) span_sum += static_cast<double>(len);
    span_draws += p.sampled_span_lengths.size();
  }
  write_sentences(out_path("cpt_corrupted.txt"), corrupted);
  write_sentences(out_path("cpt_original.txt"), original);

  io.details = {{"sentences", pairs.size()},
                {"mean_masked_fraction",
                 pairs.empty() ? 0.0 : fraction_sum / static_cast<double>(pairs.size())},
                {"mean_sampled_span_length",
                 span_draws == 0 ? 0.0 : span_sum / static_cast<double>(span_draws)}};
  return finish_stage(std::move(io));
}

StageResult PipelineRunner::stage_plan_batches() {
  StageIo io;
  io.name = "plan-batches";
  io.config = {{"seed", config_.seed}, {"batch_size", config_.batch_size}};
  add_input(io, "dali.src", out_path("dali.src"));
  add_input(io, "bible_train.src", out_path("bible_train.src"));
  io.outputs = {"batch_plan.json"};
  if (!force_ && up_to_date(io.name, io.config, io.inputs, io.outputs)) {
    return {io.name, true, io.outputs};
  }
  io.started_at = iso_utc_now();

  std::size_t pseudo_size =
      corpus_sentences(out_path("dali.src"), config_.source_lang, "domain").size();
  std::size_t parallel_size =
      corpus_sentences(out_path("bible_train.src"), config_.source_lang, "bible")
          .size();
  BatchPlan plan = plan_batches(pseudo_size, parallel_size, config_.batch_size,
                                static_cast<std::uint64_t>(config_.seed));
  save_plan_json(out_path("batch_plan.json"), plan);

  io.details = {{"batches", plan.batches.size()},
                {"pseudo_size", pseudo_size},
                {"parallel_size", parallel_size}};
  return finish_stage(std::move(io));
}

StageResult PipelineRunner::stage_evaluate() {
  if (config_.hypothesis.empty()) {
    throw ConfigError("config: hypothesis: required for evaluate");
  }
  StageIo io;
  io.name = "evaluate";
  io.config = {{"signature", kScoringSignature}};
  add_input(io, config_.hypothesis, config_.hypothesis);
  add_input(io, "domain_test.tgt", out_path("domain_test.tgt"));
  io.outputs = {"eval.json"};
  if (!force_ && up_to_date(io.name, io.config, io.inputs, io.outputs)) {
    return {io.name, true, io.outputs};
  }
  io.started_at = iso_utc_now();

  std::vector<Sentence> hyps =
      corpus_sentences(config_.hypothesis, config_.target_lang, "hypothesis");
  std::vector<Sentence> refs =
      corpus_sentences(out_path("domain_test.tgt"), config_.target_lang, "reference");

  SystemEvaluation ev;
  ev.name = "hypothesis";
  ev.bleu = corpus_bleu(hyps, refs);
  ev.chrf = corpus_chrf(hyps, refs);
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    ev.sentence_bleu.push_back(sentence_bleu(hyps[i], refs[i]).score);
    ev.sentence_chrf.push_back(sentence_chrf(hyps[i], refs[i]).score);
  }
  save_eval_report_json(out_path("eval.json"), {ev});

  io.details = {{"sentences", hyps.size()},
                {"bleu", ev.bleu.score},
                {"chrf", ev.chrf.score}};
  return finish_stage(std::move(io));
}

StageResult PipelineRunner::stage_length_curve() {
  if (config_.hypothesis.empty()) {
    throw ConfigError("config: hypothesis: required for length-curve");
  }
  StageIo io;
  io.name = "length-curve";
  io.config = {{"signature", kScoringSignature}};
  add_input(io, config_.hypothesis, config_.hypothesis);
  add_input(io, "domain_test.tgt", out_path("domain_test.tgt"));
  io.outputs = {"length_curve.csv"};
  if (!force_ && up_to_date(io.name, io.config, io.inputs, io.outputs)) {
    return {io.name, true, io.outputs};
  }
  io.started_at = iso_utc_now();

  std::vector<Sentence> hyps =
      corpus_sentences(config_.hypothesis, config_.target_lang, "hypothesis");
  std::vector<Sentence> refs =
      corpus_sentences(out_path("domain_test.tgt"), config_.target_lang, "reference");
  if (hyps.size() != refs.size()) {
    throw DataError("length-curve: hypothesis/reference count mismatch: " +
                    std::to_string(hyps.size()) + " vs " + std::to_string(refs.size()));
  }
  std::vector<LengthRecord> records;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    records.push_back({refs[i].size(), sentence_bleu(hyps[i], refs[i]).score,
                       sentence_chrf(hyps[i], refs[i]).score});
  }
  save_length_curve_csv(out_path("length_curve.csv"), length_curve(records));

  io.details = {{"sentences", records.size()}};
  return finish_stage(std::move(io));
}

StageResult PipelineRunner::stage_stats() {
  StageIo io;
  io.name = "stats";
  io.config = {{"tokenizer", config_.tokenizer}};
  std::vector<std::pair<std::string, std::string>> files = {
      {"domain_test_target", out_path("domain_test.tgt")},
      {"dali_pseudo_target", out_path("dali.tgt")},
      {"cpt_corrupted", out_path("cpt_corrupted.txt")}};
  if (!config_.hypothesis.empty()) {
    files.emplace_back("hypothesis", config_.hypothesis);
  }
  for (const auto& [name, path] : files) {
    add_input(io, name == "hypothesis" ? path : fs::path(path).filename().string(),
              path);
  }
  io.outputs = {"stats.json"};
  if (!force_ && up_to_date(io.name, io.config, io.inputs, io.outputs)) {
    return {io.name, true, io.outputs};
  }
  io.started_at = iso_utc_now();

  std::unique_ptr<Tokenizer> tokenizer = make_tokenizer(config_.tokenizer);
  json report;
  for (const auto& [name, path] : files) {
    std::vector<Sentence> sentences =
        corpus_sentences(path, config_.target_lang, name);
    CorpusStats stats = corpus_stats(sentences, *tokenizer);
    report[name] = {{"avg_words", stats.avg_words},
                    {"avg_tokens", stats.avg_tokens},
                    {"avg_chars", stats.avg_chars},
                    {"count", stats.count},
                    {"tokenizer", tokenizer->name()}};
  }
  {
    std::ofstream out(out_path("stats.json"), std::ios::binary);
    if (!out) {
      throw DataError("cannot open stats report for writing: " +
                      out_path("stats.json"));
    }
    out << report.dump(2) << '\n';
    out.close();
    if (!out) {
      throw DataError("failed writing stats report: " + out_path("stats.json"));
    }
  }

  io.details = {{"corpora", files.size()}};
  return finish_stage(std::move(io));
}

}  // namespace damt
