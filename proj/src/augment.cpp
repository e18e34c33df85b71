#include "damt/augment.hpp"

#include <algorithm>
#include <set>

#include "damt/errors.hpp"

namespace damt {

namespace {

void append_token_split(std::vector<std::string>& out,
                        const std::string& target_form) {
  std::size_t start = 0;
  for (std::size_t i = 0; i <= target_form.size(); ++i) {
    if (i == target_form.size() || target_form[i] == ' ') {
      if (i > start) out.push_back(target_form.substr(start, i - start));
      start = i + 1;
    }
  }
}

void validate(const CorruptionSpec& spec) {
  // 0 is admitted as the exact no-op limit (no span is ever placed).
  if (!(spec.mask_ratio >= 0.0 && spec.mask_ratio < 1.0))
    throw ConfigError("cpt: mask_ratio must lie in [0, 1)");
  if (!(spec.span_lambda > 0.0))
    throw ConfigError("cpt: span_lambda must be positive");
  if (spec.replace_length != 1)
    throw ConfigError("cpt: replace_length is fixed at 1");
  if (!(spec.dict_replace_prob >= 0.0 && spec.dict_replace_prob <= 1.0))
    throw ConfigError("cpt: dict_replace_prob must lie in [0, 1]");
  if (spec.mask_token.empty())
    throw ConfigError("cpt: mask_token must be non-empty");
}

}  // namespace

std::vector<PseudoPair> dali_synthesize(const Corpus& corpus,
                                        const Lexicon& lexicon,
                                        OovPolicy oov_policy) {
  std::vector<PseudoPair> out;
  out.reserve(corpus.sentences.size());
  for (const auto& sentence : corpus.sentences) {
    PseudoPair pair;
    pair.source = sentence;
    std::vector<std::string> target;
    std::size_t replaced = 0;
    for (const auto& token : sentence.tokens) {
      auto hit = lexicon.lookup(token);
      if (hit) {
        append_token_split(target, *hit);
        ++replaced;
      } else if (oov_policy == OovPolicy::copy) {
        target.push_back(token);
      }  // drop: OOV token omitted
    }
    pair.pseudo_target = sentence_from_tokens(std::move(target));
    pair.replaced_fraction =
        sentence.tokens.empty()
            ? 0.0
            : static_cast<double>(replaced) /
                  static_cast<double>(sentence.tokens.size());
    out.push_back(std::move(pair));
  }
  return out;
}

AnnotatedSentence leca_annotate(const Sentence& sentence,
                                const Lexicon& lexicon,
                                std::size_t max_suggestions,
                                const std::string& separator) {
  AnnotatedSentence out;
  out.base = sentence;
  std::set<std::string> seen;
  for (const auto& token : sentence.tokens) {
    if (out.suggestions.size() >= max_suggestions) break;
    auto hit = lexicon.lookup(token);
    if (!hit) continue;
    if (!seen.insert(*hit).second) continue;  // dedup by target form
    out.suggestions.push_back(*hit);
  }
  std::vector<std::string> rendered = sentence.tokens;
  for (const auto& suggestion : out.suggestions) {
    rendered.push_back(separator);
    append_token_split(rendered, suggestion);
  }
  out.rendered = sentence_from_tokens(std::move(rendered));
  return out;
}

std::vector<AnnotatedSentence> leca_annotate_corpus(
    const Corpus& corpus, const Lexicon& lexicon, std::size_t max_suggestions,
    const std::string& separator) {
  std::vector<AnnotatedSentence> out;
  out.reserve(corpus.sentences.size());
  for (const auto& sentence : corpus.sentences)
    out.push_back(leca_annotate(sentence, lexicon, max_suggestions, separator));
  return out;
}

CorruptionPair cpt_corrupt(const Sentence& sentence, const Lexicon& lexicon,
                           const CorruptionSpec& spec, RngStream& stream) {
  validate(spec);
  if (sentence.empty()) throw DataError("cpt_corrupt: empty sentence");

  CorruptionPair pair;
  pair.original = sentence;

  // Stage 1: mixed-language replacement.  One uniform draw per lexicon hit,
  // in token order — the fixed draw discipline keeps corruption reproducible
  // from (seed, sentence index) alone.
  std::vector<std::string> stage1;
  stage1.reserve(sentence.tokens.size());
  for (std::size_t pos = 0; pos < sentence.tokens.size(); ++pos) {
    const auto& token = sentence.tokens[pos];
    auto hit = lexicon.lookup(token);
    if (hit && stream.next_double() < spec.dict_replace_prob) {
      pair.replaced_terms.push_back({pos, token, *hit});
      append_token_split(stage1, *hit);
    } else {
      stage1.push_back(token);
    }
  }

  // Stage 2: span masking over the stage-1 sequence.
  const std::size_t n = stage1.size();
  const double target = spec.mask_ratio * static_cast<double>(n);
  std::vector<std::pair<std::size_t, std::size_t>> spans;  // (start, len)
  std::size_t covered = 0;
  int rejections = 0;
  while (static_cast<double>(covered) < target && rejections < 100) {
    std::size_t len = stream.next_poisson(spec.span_lambda);
    if (len == 0) len = 1;
    pair.sampled_span_lengths.push_back(len);
    if (len > n) {
      ++rejections;
      continue;
    }
    const std::size_t start = stream.next_below(n - len + 1);
    bool overlaps = false;
    for (const auto& [s, l] : spans) {
      if (start < s + l && s < start + len) {
        overlaps = true;
        break;
      }
    }
    if (overlaps) {
      ++rejections;
      continue;
    }
    spans.emplace_back(start, len);
    pair.span_lengths.push_back(len);
    covered += len;
  }
  pair.masked_token_count = covered;

  std::sort(spans.begin(), spans.end());
  std::vector<std::string> corrupted;
  corrupted.reserve(n);
  std::size_t next_span = 0;
  for (std::size_t i = 0; i < n;) {
    if (next_span < spans.size() && spans[next_span].first == i) {
      corrupted.push_back(spec.mask_token);
      i += spans[next_span].second;
      ++next_span;
    } else {
      corrupted.push_back(stage1[i]);
      ++i;
    }
  }
  pair.corrupted = sentence_from_tokens(std::move(corrupted));
  return pair;
}

std::vector<CorruptionPair> cpt_corrupt_corpus(const Corpus& corpus,
                                               const Lexicon& lexicon,
                                               const CorruptionSpec& spec) {
  std::vector<CorruptionPair> out;
  out.reserve(corpus.sentences.size());
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    auto stream = derive_stream(static_cast<std::uint64_t>(spec.seed), "cpt",
                                static_cast<std::uint64_t>(i));
    out.push_back(cpt_corrupt(corpus.sentences[i], lexicon, spec, stream));
  }
  return out;
}

}  // namespace damt
