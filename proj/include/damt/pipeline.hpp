#pragma once

#include <map>
#include <string>
#include <vector>

#include "damt/config.hpp"
#include "json.hpp"

namespace damt {

// Per-stage provenance record. Input keys are absolute paths for external
// files and out_dir-relative names for artifacts of earlier stages; output
// keys are always out_dir-relative. Hashes are SHA-256 hex of file bytes.
struct ManifestEntry {
  std::string operation;
  nlohmann::json config;
  std::map<std::string, std::string> inputs;
  std::map<std::string, std::string> outputs;
  std::string started_at;   // ISO-8601 UTC
  std::string finished_at;  // ISO-8601 UTC
  std::string tool_version;
  nlohmann::json details;  // stage observability (sizes, histograms, ...)
};

struct Manifest {
  std::map<std::string, ManifestEntry> entries;

  static Manifest load(const std::string& path);  // missing file -> empty
  void save(const std::string& path) const;
};

struct StageResult {
  std::string name;
  bool skipped = false;  // inputs, config, and outputs all matched the manifest
  std::vector<std::string> outputs;  // out_dir-relative
};

// Executes stages against one output directory, persisting the manifest after
// every stage so a failure leaves the completed prefix recorded. A stage is
// skipped when its manifest entry matches the current config, every input
// hash, and every output hash; --force disables the check.
class PipelineRunner {
 public:
  PipelineRunner(PipelineConfig config, bool force);

  // prepare, align-train, harvest, build-dict, merge-dict, dali, leca, cpt,
  // plan-batches, evaluate, length-curve, stats.
  static const std::vector<std::string>& stage_names();

  StageResult run_stage(const std::string& name);

  // All stages in dependency order; evaluate and length-curve are left out
  // when no hypothesis file is configured.
  std::vector<StageResult> run_all();

  const Manifest& manifest() const { return manifest_; }
  const PipelineConfig& config() const { return config_; }

 private:
  struct StageIo;

  std::string out_path(const std::string& rel) const;
  std::string manifest_path() const;
  void add_input(StageIo& io, const std::string& key,
                 const std::string& path) const;
  bool up_to_date(const std::string& name, const nlohmann::json& stage_config,
                  const std::map<std::string, std::string>& input_hashes,
                  const std::vector<std::string>& outputs) const;
  StageResult finish_stage(StageIo io);

  StageResult stage_prepare();
  StageResult stage_align_train();
  StageResult stage_harvest();
  StageResult stage_build_dict();
  StageResult stage_merge_dict();
  StageResult stage_dali();
  StageResult stage_leca();
  StageResult stage_cpt();
  StageResult stage_plan_batches();
  StageResult stage_evaluate();
  StageResult stage_length_curve();
  StageResult stage_stats();

  PipelineConfig config_;
  bool force_ = false;
  Manifest manifest_;
};

}  // namespace damt
