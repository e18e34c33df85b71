#include "damt/sampling.hpp"

#include <cmath>

#include "damt/errors.hpp"
#include "damt/rng.hpp"

namespace damt {

namespace {

// Splits `pairs` into (complement, selected) by the strictly increasing
// index list; both sides keep input order.
std::pair<std::vector<SentencePair>, std::vector<SentencePair>> partition_pairs(
    const std::vector<SentencePair>& pairs,
    const std::vector<std::size_t>& selected) {
  std::vector<SentencePair> rest, picked;
  rest.reserve(pairs.size() - selected.size());
  picked.reserve(selected.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (next < selected.size() && selected[next] == i) {
      picked.push_back(pairs[i]);
      ++next;
    } else {
      rest.push_back(pairs[i]);
    }
  }
  return {std::move(rest), std::move(picked)};
}

}  // namespace

std::pair<ParallelCorpus, ParallelCorpus> split_validation(
    const ParallelCorpus& corpus, const SplitSpec& spec) {
  if (corpus.pairs.empty()) throw DataError("split_validation: empty corpus");
  const std::size_t n = corpus.pairs.size();
  const std::size_t n_valid = static_cast<std::size_t>(
      std::llround(spec.validation_fraction * static_cast<double>(n)));
  if (n_valid >= n) {
    throw DataError("split_validation: fraction " +
                    std::to_string(spec.validation_fraction) +
                    " leaves no training data for " + std::to_string(n) +
                    " pairs");
  }
  auto stream = derive_stream(static_cast<std::uint64_t>(spec.seed),
                              "split_validation");
  const auto valid_idx = sample_indices_ordered(n, n_valid, stream);
  auto [train_pairs, valid_pairs] = partition_pairs(corpus.pairs, valid_idx);
  ParallelCorpus train{std::move(train_pairs), corpus.source_tag,
                       corpus.target_tag};
  ParallelCorpus valid{std::move(valid_pairs), corpus.source_tag,
                       corpus.target_tag};
  return {std::move(train), std::move(valid)};
}

namespace {

std::vector<std::size_t> cap_indices(std::size_t n, std::size_t cap,
                                     std::int64_t seed) {
  auto stream = derive_stream(static_cast<std::uint64_t>(seed), "sample_cap");
  return sample_indices_ordered(n, cap, stream);
}

}  // namespace

Corpus sample_cap(const Corpus& corpus, std::size_t cap, std::int64_t seed) {
  if (cap == 0) throw DataError("sample_cap: cap must be >= 1");
  if (corpus.sentences.size() <= cap) return corpus;
  const auto keep = cap_indices(corpus.sentences.size(), cap, seed);
  Corpus out;
  out.language_tag = corpus.language_tag;
  out.domain_tag = corpus.domain_tag;
  out.sentences.reserve(cap);
  for (std::size_t i : keep) out.sentences.push_back(corpus.sentences[i]);
  return out;
}

ParallelCorpus sample_cap(const ParallelCorpus& corpus, std::size_t cap,
                          std::int64_t seed) {
  if (cap == 0) throw DataError("sample_cap: cap must be >= 1");
  if (corpus.pairs.size() <= cap) return corpus;
  const auto keep = cap_indices(corpus.pairs.size(), cap, seed);
  ParallelCorpus out;
  out.source_tag = corpus.source_tag;
  out.target_tag = corpus.target_tag;
  out.pairs.reserve(cap);
  for (std::size_t i : keep) out.pairs.push_back(corpus.pairs[i]);
  return out;
}

std::pair<ParallelCorpus, ParallelCorpus> hold_out_test(
    const ParallelCorpus& corpus, const SplitSpec& spec) {
  const std::size_t n = corpus.pairs.size();
  if (spec.test_count > 0 && n <= spec.test_count) {
    throw DataError("hold_out_test: corpus of " + std::to_string(n) +
                    " pairs cannot hold out " + std::to_string(spec.test_count));
  }
  auto stream =
      derive_stream(static_cast<std::uint64_t>(spec.seed), "hold_out_test");
  const auto test_idx = sample_indices_ordered(n, spec.test_count, stream);
  auto [rest_pairs, test_pairs] = partition_pairs(corpus.pairs, test_idx);
  ParallelCorpus rest{std::move(rest_pairs), corpus.source_tag,
                      corpus.target_tag};
  ParallelCorpus test{std::move(test_pairs), corpus.source_tag,
                      corpus.target_tag};
  return {std::move(rest), std::move(test)};
}

}  // namespace damt
