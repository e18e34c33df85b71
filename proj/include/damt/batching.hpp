#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace damt {

// One mixed training batch: pseudo-parallel items are referenced by index into
// the pseudo corpus, parallel items by index into the out-of-domain corpus.
struct Batch {
  std::vector<std::size_t> pseudo_indices;
  std::vector<std::size_t> parallel_indices;
};

// A full one-epoch schedule over the pseudo corpus. Pseudo indices are
// globally disjoint across batches; parallel indices may repeat freely.
struct BatchPlan {
  std::vector<Batch> batches;
  std::size_t batch_size = 0;
  std::uint64_t seed = 0;
  std::size_t pseudo_size = 0;
  std::size_t parallel_size = 0;
  bool pseudo_epoch_complete = false;
};

// Builds the 50/50 plan: a seeded permutation of the pseudo corpus is consumed
// batch_size/2 at a time without replacement, and each batch draws the same
// number of parallel indices uniformly with replacement. The final batch may
// be smaller but keeps the even split.
BatchPlan plan_batches(std::size_t pseudo_size, std::size_t parallel_size,
                       std::size_t batch_size, std::uint64_t seed);

void save_plan_json(const std::string& path, const BatchPlan& plan);
BatchPlan load_plan_json(const std::string& path);

}  // namespace damt
