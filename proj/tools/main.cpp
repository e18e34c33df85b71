#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "damt/config.hpp"
#include "damt/errors.hpp"
#include "damt/pipeline.hpp"
#include "damt/version.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"corpus engineering toolkit for dictionary-driven domain adaptation"};
  app.set_version_flag("--version", damt::kToolVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir_override;
  std::int64_t seed_override = 0;
  std::size_t threads_override = 0;
  bool force = false;

  app.add_option("--config", config_path, "pipeline configuration (JSON)")
      ->required();
  auto* out_dir_opt = app.add_option("--out-dir", out_dir_override,
                                     "output directory (overrides config)");
  auto* seed_opt =
      app.add_option("--seed", seed_override, "top-level seed (overrides config)");
  auto* threads_opt = app.add_option("--threads", threads_override,
                                     "intra-stage thread cap (overrides config)");
  app.add_flag("--force", force, "re-run stages even when the manifest is current");

  // Options live on the app; fallthrough lets them appear after the stage name.
  for (const std::string& name : damt::PipelineRunner::stage_names()) {
    app.add_subcommand(name, "run the " + name + " stage")->fallthrough();
  }
  app.add_subcommand("pipeline", "run every stage in dependency order")
      ->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return 1;     // command-line problems are configuration errors
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();

  try {
    damt::PipelineConfig config = damt::load_config(config_path);
    if (out_dir_opt->count() > 0) {
      config.out_dir = fs::absolute(out_dir_override).lexically_normal().string();
    }
    if (seed_opt->count() > 0) {
      config.seed = seed_override;
    }
    if (threads_opt->count() > 0) {
      if (threads_override == 0) {
        throw damt::ConfigError("config: threads: must be at least 1");
      }
      config.threads = threads_override;
    }
    damt::finalize_config(config);

    damt::PipelineRunner runner(std::move(config), force);
    std::vector<damt::StageResult> results;
    if (subcommand == "pipeline") {
      results = runner.run_all();
    } else {
      results.push_back(runner.run_stage(subcommand));
    }
    for (const damt::StageResult& r : results) {
      if (r.skipped) {
        std::printf("%s: up to date\n", r.name.c_str());
      } else {
        std::printf("%s: wrote %zu artifact(s)\n", r.name.c_str(), r.outputs.size());
      }
    }
    return 0;
  } catch (const damt::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const damt::DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
}
