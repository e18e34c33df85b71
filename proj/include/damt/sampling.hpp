#pragma once

#include <utility>

#include "damt/text.hpp"

namespace damt {

// Seeded random split into (train, valid); |valid| = round(fraction * N).
// Both halves preserve the original relative order.
std::pair<ParallelCorpus, ParallelCorpus> split_validation(
    const ParallelCorpus& corpus, const SplitSpec& spec);

// Uniform sample of at most `cap` items without replacement, original order
// preserved; identity when the corpus is already within the cap.
Corpus sample_cap(const Corpus& corpus, std::size_t cap, std::int64_t seed);
ParallelCorpus sample_cap(const ParallelCorpus& corpus, std::size_t cap,
                          std::int64_t seed);

// Seeded hold-out of spec.test_count pairs; returns (rest, test).
std::pair<ParallelCorpus, ParallelCorpus> hold_out_test(
    const ParallelCorpus& corpus, const SplitSpec& spec);

}  // namespace damt
