#include "damt/metrics.hpp"

#include <cmath>
#include <fstream>
#include <unordered_map>

#include "damt/errors.hpp"
#include "damt/strconv.hpp"
#include "damt/unicode.hpp"
#include "json.hpp"

namespace damt {

namespace {

constexpr int kBleuOrder = 4;
constexpr int kChrfOrder = 6;
constexpr double kChrfBeta = 2.0;

// Token n-gram counts for one order; keys join tokens with a single space.
std::unordered_map<std::string, std::size_t> token_ngrams(
    const std::vector<std::string>& tokens, int n) {
  std::unordered_map<std::string, std::size_t> counts;
  if (tokens.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int k = 1; k < n; ++k) {
      key += ' ';
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

struct PairStats {
  std::size_t match = 0;
  std::size_t hyp_total = 0;
};

std::array<PairStats, kBleuOrder> bleu_pair_stats(const Sentence& hyp,
                                                  const Sentence& ref) {
  std::array<PairStats, kBleuOrder> stats{};
  for (int n = 1; n <= kBleuOrder; ++n) {
    auto h = token_ngrams(hyp.tokens, n);
    auto r = token_ngrams(ref.tokens, n);
    PairStats& s = stats[n - 1];
    for (const auto& [gram, count] : h) {
      s.hyp_total += count;
      auto it = r.find(gram);
      if (it != r.end()) s.match += std::min(count, it->second);
    }
  }
  return stats;
}

double brevity_penalty(std::size_t hyp_len, std::size_t ref_len) {
  if (hyp_len >= ref_len) return 1.0;
  return std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));
}

double geometric_score(const std::array<double, 4>& precisions, double bp) {
  double log_sum = 0.0;
  for (double p : precisions) {
    if (p <= 0.0) return 0.0;
    log_sum += std::log(p);
  }
  return 100.0 * bp * std::exp(log_sum / kBleuOrder);
}

void check_corpus(const char* op, std::size_t n_hyp, std::size_t n_ref) {
  if (n_hyp != n_ref) {
    throw DataError(std::string(op) + ": hypothesis/reference count mismatch: " +
                    std::to_string(n_hyp) + " vs " + std::to_string(n_ref));
  }
  if (n_hyp == 0) {
    throw DataError(std::string(op) + ": empty input");
  }
}

void check_pair(const char* op, const Sentence& hyp, const Sentence& ref) {
  if (hyp.empty() || ref.empty()) {
    throw DataError(std::string(op) + ": empty sentence");
  }
}

// Codepoints of the sentence's canonical text, optionally with every
// whitespace codepoint removed.
std::u32string chrf_text(const Sentence& s, bool remove_whitespace) {
  auto decoded = uni::decode_utf8(s.joined());
  std::u32string out;
  out.reserve(decoded.codepoints.size());
  for (char32_t cp : decoded.codepoints) {
    if (remove_whitespace && uni::is_whitespace(cp)) continue;
    out.push_back(cp);
  }
  return out;
}

struct ChrfStats {
  std::size_t match = 0;
  std::size_t hyp_total = 0;
  std::size_t ref_total = 0;
};

std::unordered_map<std::u32string, std::size_t> char_ngrams(
    const std::u32string& cps, int n) {
  std::unordered_map<std::u32string, std::size_t> counts;
  if (cps.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t i = 0; i + n <= cps.size(); ++i) {
    ++counts[cps.substr(i, n)];
  }
  return counts;
}

void accumulate_chrf(std::array<ChrfStats, kChrfOrder>& agg,
                     const std::u32string& hyp, const std::u32string& ref) {
  for (int n = 1; n <= kChrfOrder; ++n) {
    auto h = char_ngrams(hyp, n);
    auto r = char_ngrams(ref, n);
    ChrfStats& s = agg[n - 1];
    for (const auto& [gram, count] : h) {
      s.hyp_total += count;
      auto it = r.find(gram);
      if (it != r.end()) s.match += std::min(count, it->second);
    }
    for (const auto& [gram, count] : r) s.ref_total += count;
  }
}

double chrf_from_stats(const std::array<ChrfStats, kChrfOrder>& agg) {
  // Orders participate only when both sides have n-grams of that length;
  // participating orders without matches contribute F = 0. Identical texts
  // therefore score exactly 100 regardless of length.
  const double beta2 = kChrfBeta * kChrfBeta;
  double total = 0.0;
  int effective = 0;
  for (const ChrfStats& s : agg) {
    if (s.hyp_total == 0 || s.ref_total == 0) continue;
    ++effective;
    if (s.match == 0) continue;
    double p = static_cast<double>(s.match) / static_cast<double>(s.hyp_total);
    double r = static_cast<double>(s.match) / static_cast<double>(s.ref_total);
    total += (1.0 + beta2) * p * r / (beta2 * p + r);
  }
  if (effective == 0) return 0.0;
  return 100.0 * total / effective;
}

nlohmann::json bleu_json(const BleuScore& b) {
  nlohmann::json j;
  j["score"] = b.score;
  j["precisions"] = b.precisions;
  j["brevity_penalty"] = b.brevity_penalty;
  j["hyp_len"] = b.hyp_len;
  j["ref_len"] = b.ref_len;
  return j;
}

}  // namespace

BleuScore corpus_bleu(const std::vector<Sentence>& hypotheses,
                      const std::vector<Sentence>& references) {
  check_corpus("corpus_bleu", hypotheses.size(), references.size());
  std::array<PairStats, kBleuOrder> agg{};
  BleuScore out;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    check_pair("corpus_bleu", hypotheses[i], references[i]);
    out.hyp_len += hypotheses[i].size();
    out.ref_len += references[i].size();
    auto stats = bleu_pair_stats(hypotheses[i], references[i]);
    for (int n = 0; n < kBleuOrder; ++n) {
      agg[n].match += stats[n].match;
      agg[n].hyp_total += stats[n].hyp_total;
    }
  }
  for (int n = 0; n < kBleuOrder; ++n) {
    out.precisions[n] = agg[n].hyp_total == 0
                            ? 0.0
                            : static_cast<double>(agg[n].match) /
                                  static_cast<double>(agg[n].hyp_total);
  }
  out.brevity_penalty = brevity_penalty(out.hyp_len, out.ref_len);
  out.score = geometric_score(out.precisions, out.brevity_penalty);
  return out;
}

BleuScore sentence_bleu(const Sentence& hypothesis, const Sentence& reference) {
  check_pair("sentence_bleu", hypothesis, reference);
  auto stats = bleu_pair_stats(hypothesis, reference);
  BleuScore out;
  out.hyp_len = hypothesis.size();
  out.ref_len = reference.size();
  int zeros = 0;
  double log_sum = 0.0;
  for (int n = 0; n < kBleuOrder; ++n) {
    double p;
    if (stats[n].match > 0) {
      p = static_cast<double>(stats[n].match) /
          static_cast<double>(stats[n].hyp_total);
    } else {
      ++zeros;
      p = std::ldexp(1.0, -zeros) /
          static_cast<double>(std::max<std::size_t>(stats[n].hyp_total, 1));
    }
    out.precisions[n] = p;
    log_sum += std::log(p);
  }
  out.brevity_penalty = brevity_penalty(out.hyp_len, out.ref_len);
  out.score = 100.0 * out.brevity_penalty * std::exp(log_sum / kBleuOrder);
  return out;
}

ChrfScore corpus_chrf(const std::vector<Sentence>& hypotheses,
                      const std::vector<Sentence>& references,
                      bool remove_whitespace) {
  check_corpus("corpus_chrf", hypotheses.size(), references.size());
  std::array<ChrfStats, kChrfOrder> agg{};
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    check_pair("corpus_chrf", hypotheses[i], references[i]);
    accumulate_chrf(agg, chrf_text(hypotheses[i], remove_whitespace),
                    chrf_text(references[i], remove_whitespace));
  }
  ChrfScore out;
  out.score = chrf_from_stats(agg);
  return out;
}

ChrfScore sentence_chrf(const Sentence& hypothesis, const Sentence& reference,
                        bool remove_whitespace) {
  check_pair("sentence_chrf", hypothesis, reference);
  std::array<ChrfStats, kChrfOrder> agg{};
  accumulate_chrf(agg, chrf_text(hypothesis, remove_whitespace),
                  chrf_text(reference, remove_whitespace));
  ChrfScore out;
  out.score = chrf_from_stats(agg);
  return out;
}

LengthCurve length_curve(const std::vector<LengthRecord>& records) {
  struct Sums {
    double bleu = 0.0;
    double chrf = 0.0;
    std::size_t count = 0;
  };
  std::map<std::size_t, Sums> groups;
  for (const LengthRecord& r : records) {
    Sums& s = groups[r.ref_len];
    s.bleu += r.bleu;
    s.chrf += r.chrf;
    ++s.count;
  }
  LengthCurve curve;
  for (const auto& [len, s] : groups) {
    curve.points[len] = {s.bleu / static_cast<double>(s.count),
                         s.chrf / static_cast<double>(s.count), s.count};
  }
  return curve;
}

void save_length_curve_csv(const std::string& path, const LengthCurve& curve) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot open length curve for writing: " + path);
  }
  out << "ref_len,mean_bleu,mean_chrf,count\n";
  for (const auto& [len, p] : curve.points) {
    out << len << ',' << format_double(p.mean_bleu) << ','
        << format_double(p.mean_chrf) << ',' << p.count << '\n';
  }
  if (!out) {
    throw DataError("failed writing length curve: " + path);
  }
}

CorpusStats output_stats(const std::vector<Sentence>& hypotheses,
                         const Tokenizer& tokenizer) {
  return corpus_stats(hypotheses, tokenizer);
}

void save_eval_report_json(const std::string& path,
                           const std::vector<SystemEvaluation>& systems) {
  nlohmann::json doc;
  doc["signature"] = kScoringSignature;
  nlohmann::json arr = nlohmann::json::array();
  for (const SystemEvaluation& sys : systems) {
    nlohmann::json entry;
    entry["name"] = sys.name;
    entry["bleu"] = bleu_json(sys.bleu);
    entry["chrf"] = {{"score", sys.chrf.score},
                     {"char_order", sys.chrf.char_order},
                     {"beta", sys.chrf.beta}};
    entry["sentence_bleu"] = sys.sentence_bleu;
    entry["sentence_chrf"] = sys.sentence_chrf;
    arr.push_back(std::move(entry));
  }
  doc["systems"] = std::move(arr);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot open evaluation report for writing: " + path);
  }
  out << doc.dump(2) << '\n';
  if (!out) {
    throw DataError("failed writing evaluation report: " + path);
  }
}

}  // namespace damt
