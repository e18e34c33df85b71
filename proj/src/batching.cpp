#include "damt/batching.hpp"

#include <fstream>

#include "damt/errors.hpp"
#include "damt/rng.hpp"
#include "json.hpp"

namespace damt {

BatchPlan plan_batches(std::size_t pseudo_size, std::size_t parallel_size,
                       std::size_t batch_size, std::uint64_t seed) {
  if (batch_size < 2 || batch_size % 2 != 0) {
    throw ConfigError("plan_batches: batch_size must be an even integer >= 2, got " +
                      std::to_string(batch_size));
  }
  if (pseudo_size == 0) {
    throw DataError("plan_batches: pseudo corpus is empty");
  }
  if (parallel_size == 0) {
    throw DataError("plan_batches: parallel corpus is empty");
  }

  BatchPlan plan;
  plan.batch_size = batch_size;
  plan.seed = seed;
  plan.pseudo_size = pseudo_size;
  plan.parallel_size = parallel_size;

  RngStream perm_stream = derive_stream(seed, "batch_pseudo");
  std::vector<std::size_t> perm = random_permutation(pseudo_size, perm_stream);

  const std::size_t half = batch_size / 2;
  std::size_t consumed = 0;
  std::size_t batch_index = 0;
  while (consumed < pseudo_size) {
    std::size_t take = std::min(half, pseudo_size - consumed);
    Batch batch;
    batch.pseudo_indices.assign(perm.begin() + static_cast<std::ptrdiff_t>(consumed),
                                perm.begin() + static_cast<std::ptrdiff_t>(consumed + take));
    RngStream par_stream = derive_stream(seed, "batch_parallel", batch_index);
    batch.parallel_indices.reserve(take);
    for (std::size_t k = 0; k < take; ++k) {
      batch.parallel_indices.push_back(
          static_cast<std::size_t>(par_stream.next_below(parallel_size)));
    }
    plan.batches.push_back(std::move(batch));
    consumed += take;
    ++batch_index;
  }
  plan.pseudo_epoch_complete = true;
  return plan;
}

void save_plan_json(const std::string& path, const BatchPlan& plan) {
  nlohmann::json doc;
  doc["batch_size"] = plan.batch_size;
  doc["seed"] = plan.seed;
  doc["pseudo_size"] = plan.pseudo_size;
  doc["parallel_size"] = plan.parallel_size;
  doc["pseudo_epoch_complete"] = plan.pseudo_epoch_complete;
  nlohmann::json batches = nlohmann::json::array();
  for (const Batch& batch : plan.batches) {
    nlohmann::json entry;
    entry["pseudo"] = batch.pseudo_indices;
    entry["parallel"] = batch.parallel_indices;
    batches.push_back(std::move(entry));
  }
  doc["batches"] = std::move(batches);

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot open batch plan for writing: " + path);
  }
  out << doc.dump(2) << '\n';
  if (!out) {
    throw DataError("failed writing batch plan: " + path);
  }
}

BatchPlan load_plan_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open batch plan: " + path);
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed batch plan " + path + ": " + e.what());
  }
  BatchPlan plan;
  try {
    plan.batch_size = doc.at("batch_size").get<std::size_t>();
    plan.seed = doc.at("seed").get<std::uint64_t>();
    plan.pseudo_size = doc.at("pseudo_size").get<std::size_t>();
    plan.parallel_size = doc.at("parallel_size").get<std::size_t>();
    plan.pseudo_epoch_complete = doc.at("pseudo_epoch_complete").get<bool>();
    for (const nlohmann::json& entry : doc.at("batches")) {
      Batch batch;
      batch.pseudo_indices = entry.at("pseudo").get<std::vector<std::size_t>>();
      batch.parallel_indices = entry.at("parallel").get<std::vector<std::size_t>>();
      plan.batches.push_back(std::move(batch));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed batch plan " + path + ": " + e.what());
  }
  return plan;
}

}  // namespace damt
