#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "damt/text.hpp"

namespace damt {

// Corpus-level BLEU never smooths: any zero modified precision yields score 0.
// Sentence-level BLEU replaces the k-th zero-numerator precision (in order of
// increasing n) with (1/2^k) / max(denominator, 1).
struct BleuScore {
  double score = 0.0;
  std::array<double, 4> precisions{};  // fractions in [0, 1]
  double brevity_penalty = 1.0;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
};

struct ChrfScore {
  double score = 0.0;
  int char_order = 6;
  double beta = 2.0;
};

BleuScore corpus_bleu(const std::vector<Sentence>& hypotheses,
                      const std::vector<Sentence>& references);
BleuScore sentence_bleu(const Sentence& hypothesis, const Sentence& reference);

// Character n-grams (n = 1..6) over codepoints with whitespace removed;
// statistics are aggregated over the corpus, then F_beta per order is averaged
// over the orders where both sides have n-grams (a participating order with
// zero clipped matches contributes 0).
ChrfScore corpus_chrf(const std::vector<Sentence>& hypotheses,
                      const std::vector<Sentence>& references,
                      bool remove_whitespace = true);
ChrfScore sentence_chrf(const Sentence& hypothesis, const Sentence& reference,
                        bool remove_whitespace = true);

struct LengthRecord {
  std::size_t ref_len = 0;
  double bleu = 0.0;
  double chrf = 0.0;
};

struct LengthCurvePoint {
  double mean_bleu = 0.0;
  double mean_chrf = 0.0;
  std::size_t count = 0;
};

struct LengthCurve {
  std::map<std::size_t, LengthCurvePoint> points;
};

LengthCurve length_curve(const std::vector<LengthRecord>& records);

// Columns: ref_len, mean_bleu, mean_chrf, count.
void save_length_curve_csv(const std::string& path, const LengthCurve& curve);

// Delegates to corpus_stats over the hypothesis sentences.
CorpusStats output_stats(const std::vector<Sentence>& hypotheses,
                         const Tokenizer& tokenizer);

// Scores are computed on the toolkit's lowercased whitespace tokens; reports
// carry this tag so downstream comparisons know the segmentation.
inline constexpr const char* kScoringSignature =
    "lowercase|whitespace-tokens|bleu4|chrf6:2";

struct SystemEvaluation {
  std::string name;
  BleuScore bleu;
  ChrfScore chrf;
  std::vector<double> sentence_bleu;
  std::vector<double> sentence_chrf;
};

void save_eval_report_json(const std::string& path,
                           const std::vector<SystemEvaluation>& systems);

}  // namespace damt
