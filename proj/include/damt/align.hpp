#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "damt/text.hpp"

namespace damt {

// IBM Model 2 with the log-linear diagonal reparameterization: the posterior
// for target position i (lengths: source n, target m) over source position j
// is proportional to t(f_i|e_j) * delta(j|i,m,n), where over real positions
// delta shares mass (1 - p0) proportionally to exp(-lambda * |(i+1)/m -
// (j+1)/n|) and the NULL word holds fixed mass p0.  lambda and p0 stay fixed
// throughout EM, which keeps the log-likelihood non-decreasing.

struct DiagonalParams {
  double tension = 4.0;    // lambda > 0
  double null_prob = 0.08; // p0 in (0, 1)
};

struct AlignConfig {
  int em_iterations = 5;
  bool diagonal = true;
  int min_pair_count = 2;
  std::int64_t seed = 42;
  std::size_t threads = 1;
  DiagonalParams params;
};

class Vocab {
 public:
  std::uint32_t intern(std::string_view w);
  std::optional<std::uint32_t> lookup(std::string_view w) const;
  const std::string& word(std::uint32_t id) const { return words_[id]; }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> words_;
};

// Sparse conditional table t(f|e) in CSR form; row order is source-vocab
// interning order, entries within a row are sorted by target id.  Source id 0
// is the NULL word.
struct TranslationTable {
  static constexpr std::uint32_t kNullId = 0;
  // The uppercase marker cannot collide with corpus tokens: normalization
  // lowercases A-Z, so no normalized token contains an uppercase ASCII letter.
  static constexpr const char* kNullWord = "<NULL>";

  Vocab source;
  Vocab target;
  std::vector<std::size_t> row_offset;     // size() == source.size() + 1
  std::vector<std::uint32_t> entry_target;
  std::vector<double> entry_prob;

  // Index into the entry arrays, or -1 when (e, f) is outside the support.
  std::ptrdiff_t entry_index(std::uint32_t e, std::uint32_t f) const;
  double prob_id(std::uint32_t e, std::uint32_t f) const;
  // String-keyed lookup; 0 for anything outside the support.
  double prob(std::string_view e, std::string_view f) const;

  std::size_t entry_count() const { return entry_target.size(); }
};

struct AlignmentModel {
  TranslationTable table;
  DiagonalParams params;
  bool diagonal = true;
  int em_iterations = 0;
  std::vector<double> iteration_log_likelihood;  // one value per iteration
  bool trained = false;
};

// One Viterbi link; source_index is std::nullopt for NULL alignments.
struct AlignmentLink {
  std::uint32_t target_index = 0;
  std::optional<std::uint32_t> source_index;
};

struct HarvestedPair {
  std::string source;
  std::string target;
  std::uint64_t count = 0;
};

// Runs EM for config.em_iterations.  t is initialized uniform over the
// target words co-occurring with each source word; iteration k's reported
// log-likelihood is that of the model entering the iteration.
AlignmentModel train_aligner(const ParallelCorpus& corpus,
                             const AlignConfig& config);

// Links every target position to argmax_j t(f_i|e_j) * delta(j|i,m,n); ties
// take the smallest source index, and NULL only wins strictly.
std::vector<AlignmentLink> viterbi_align(const AlignmentModel& model,
                                         const SentencePair& pair);

// Viterbi-aligns the corpus, counts non-NULL links, keeps the most frequent
// target per source word (lexicographically smaller on ties), drops counts
// below min_pair_count, and sorts by count descending then lexicographically.
std::vector<HarvestedPair> harvest_pairs(const AlignmentModel& model,
                                         const ParallelCorpus& corpus,
                                         int min_pair_count);

// TSV with one header record ("#damt-align", lambda, p0, iterations) followed
// by "e<TAB>f<TAB>t(f|e)" rows; NULL serializes as kNullWord.
void save_model_tsv(const AlignmentModel& model, const std::string& path);
AlignmentModel load_model_tsv(const std::string& path);

// TSV "source<TAB>target<TAB>count".
void save_harvest_tsv(const std::vector<HarvestedPair>& pairs,
                      const std::string& path);
std::vector<HarvestedPair> load_harvest_tsv(const std::string& path);

}  // namespace damt
