#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "damt/lexicon.hpp"
#include "damt/rng.hpp"
#include "damt/text.hpp"

namespace damt {

enum class OovPolicy { copy, drop };

struct PseudoPair {
  Sentence source;
  Sentence pseudo_target;          // word-for-word rendering
  double replaced_fraction = 0.0;  // replaced tokens / source tokens
};

struct AnnotatedSentence {
  Sentence base;
  std::vector<std::string> suggestions;  // target forms, first-occurrence order
  Sentence rendered;                     // base ++ [sep, s1, sep, s2, ...]
};

struct CorruptionSpec {
  double mask_ratio = 0.35;
  double span_lambda = 3.5;
  int replace_length = 1;  // each span becomes exactly one mask token
  double dict_replace_prob = 0.3;
  std::string mask_token = "<mask>";
  std::int64_t seed = 42;
};

struct ReplacedTerm {
  std::size_t position = 0;  // token index in the original sentence
  std::string source_form;
  std::string target_form;
};

struct CorruptionPair {
  Sentence corrupted;
  Sentence original;  // byte-identical to the input
  std::size_t masked_token_count = 0;  // stage-1 tokens covered by spans
  std::vector<ReplacedTerm> replaced_terms;
  std::vector<std::size_t> span_lengths;  // placed spans; sums to the count
  // Every clamped Poisson draw in order, kept also when its placement was
  // rejected; the span-length statistic is defined over these.
  std::vector<std::size_t> sampled_span_lengths;
};

// Word-for-word dictionary translation; multi-word targets are inserted
// token-split in place of their source token, OOV tokens follow the policy.
// Pairs come back in corpus order.
std::vector<PseudoPair> dali_synthesize(const Corpus& corpus,
                                        const Lexicon& lexicon,
                                        OovPolicy oov_policy = OovPolicy::copy);

// Left-to-right scan; every dictionary hit contributes its translation once
// (deduplicated by target form, first occurrence wins), truncated to
// max_suggestions; rendered appends separator + token-split suggestion.
AnnotatedSentence leca_annotate(const Sentence& sentence,
                                const Lexicon& lexicon,
                                std::size_t max_suggestions = 10,
                                const std::string& separator = "<sep>");

std::vector<AnnotatedSentence> leca_annotate_corpus(
    const Corpus& corpus, const Lexicon& lexicon,
    std::size_t max_suggestions = 10, const std::string& separator = "<sep>");

// Two-stage corruption.  Stage 1 draws once per lexicon hit in token order
// and swaps in the (token-split) translation with probability
// dict_replace_prob.  Stage 2 repeatedly samples a span length from
// Poisson(span_lambda) clamped to >= 1 and a uniform start over the stage-1
// sequence, rejecting overlaps, until coverage reaches mask_ratio (the last
// span may overshoot) or 100 placements have been rejected; each accepted
// span collapses to exactly one mask token.  All draws come from `stream`,
// stage 1 first.
CorruptionPair cpt_corrupt(const Sentence& sentence, const Lexicon& lexicon,
                           const CorruptionSpec& spec, RngStream& stream);

// Per-sentence streams derived from (spec.seed, "cpt", index), so sentence
// i's corruption never depends on batch or thread order.
std::vector<CorruptionPair> cpt_corrupt_corpus(const Corpus& corpus,
                                               const Lexicon& lexicon,
                                               const CorruptionSpec& spec);

}  // namespace damt
