#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace damt {

// A sentence is the lowercased whitespace segmentation of one input line.
// `raw` keeps the original line text for character statistics.
struct Sentence {
  std::vector<std::string> tokens;
  std::string raw;

  bool empty() const { return tokens.empty(); }
  std::size_t size() const { return tokens.size(); }
  std::string joined() const;
};

// Lowercase + Unicode-whitespace split.  Applying it to its own output is a
// no-op (normalization idempotence).
Sentence normalize_line(std::string_view line);

// Sentence synthesized from already-normalized tokens; raw is their join.
Sentence sentence_from_tokens(std::vector<std::string> tokens);

struct Corpus {
  std::vector<Sentence> sentences;
  std::string language_tag;
  std::string domain_tag;

  std::size_t size() const { return sentences.size(); }
};

struct SentencePair {
  Sentence source;
  Sentence target;
};

struct ParallelCorpus {
  std::vector<SentencePair> pairs;
  std::string source_tag;
  std::string target_tag;

  std::size_t size() const { return pairs.size(); }
};

struct SplitSpec {
  double validation_fraction = 0.08;
  std::size_t test_count = 1500;
  std::size_t train_cap = 200000;
  std::int64_t seed = 42;
};

struct CorpusStats {
  double avg_words = 0.0;
  double avg_tokens = 0.0;
  double avg_chars = 0.0;
  std::size_t count = 0;
};

class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<std::string> tokenize(const Sentence& s) const = 0;
  virtual std::string name() const = 0;
};

// Default: the sentence's own whitespace tokens.
class WhitespaceTokenizer final : public Tokenizer {
 public:
  std::vector<std::string> tokenize(const Sentence& s) const override {
    return s.tokens;
  }
  std::string name() const override { return "whitespace"; }
};

// Splits every token into single codepoints; stands in for subword schemes.
class CharacterTokenizer final : public Tokenizer {
 public:
  std::vector<std::string> tokenize(const Sentence& s) const override;
  std::string name() const override { return "chars"; }
};

std::unique_ptr<Tokenizer> make_tokenizer(const std::string& name);

// avg_words: whitespace tokens; avg_tokens: supplied tokenizer; avg_chars:
// codepoints of the raw text.  Empty input gives all zeros.
CorpusStats corpus_stats(const std::vector<Sentence>& sentences,
                         const Tokenizer& tokenizer);

}  // namespace damt
