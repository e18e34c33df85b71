// Acceptance gate: one line per criterion, nonzero exit on any failure.
// Each check is self-contained and runs against the checked-in fixtures or
// freshly generated synthetic data; timed criteria enforce their budgets.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../align_oracle.hpp"
#include "damt/align.hpp"
#include "damt/augment.hpp"
#include "damt/batching.hpp"
#include "damt/lexicon.hpp"
#include "damt/metrics.hpp"
#include "damt/rng.hpp"
#include "damt/sampling.hpp"
#include "damt/text.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace damt;

namespace {

const std::string kMetricsDir = std::string(DAMT_FIXTURE_DIR) + "/metrics";
const std::string kPipelineConfig =
    std::string(DAMT_FIXTURE_DIR) + "/pipeline/config.json";

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw std::runtime_error("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<Sentence> to_sentences(const std::vector<std::string>& lines) {
  std::vector<Sentence> out;
  out.reserve(lines.size());
  for (const std::string& line : lines) out.push_back(normalize_line(line));
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// ---------------------------------------------------------------------------

std::string criterion_metric_parity(double* elapsed) {
  Timer timer;
  auto hyps = to_sentences(read_lines(kMetricsDir + "/hyp.txt"));
  auto refs = to_sentences(read_lines(kMetricsDir + "/ref.txt"));
  if (hyps.size() != 50 || refs.size() != 50) return "fixture is not 50 pairs";

  nlohmann::json expected;
  std::ifstream(kMetricsDir + "/expected.json") >> expected;

  double worst = 0.0;
  std::string worst_what;
  auto track = [&](const std::string& what, double got, double want) {
    double diff = std::fabs(got - want);
    if (diff > worst) {
      worst = diff;
      worst_what = what;
    }
  };

  track("corpus bleu", corpus_bleu(hyps, refs).score,
        expected["corpus_bleu"]["score"].get<double>());
  track("corpus chrf", corpus_chrf(hyps, refs).score,
        expected["corpus_chrf"]["score"].get<double>());
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    track("sentence bleu " + std::to_string(i),
          sentence_bleu(hyps[i], refs[i]).score,
          expected["sentence_bleu"][i].get<double>());
    track("sentence chrf " + std::to_string(i),
          sentence_chrf(hyps[i], refs[i]).score,
          expected["sentence_chrf"][i].get<double>());
  }
  *elapsed = timer.seconds();
  if (worst >= 0.05)
    return worst_what + " off by " + fmt(worst) + " (limit 0.05)";
  if (*elapsed >= 1.0) return "took " + fmt(*elapsed) + "s (limit 1s)";
  return "";
}

std::string criterion_metric_identities(double*) {
  auto refs = to_sentences(read_lines(kMetricsDir + "/ref.txt"));
  if (corpus_bleu(refs, refs).score != 100.0)
    return "identical corpus BLEU is not exactly 100";
  if (corpus_chrf(refs, refs).score != 100.0)
    return "identical corpus ChrF is not exactly 100";
  if (sentence_bleu(refs[0], refs[0]).score != 100.0)
    return "identical sentence BLEU is not exactly 100";
  if (sentence_chrf(refs[0], refs[0]).score != 100.0)
    return "identical sentence ChrF is not exactly 100";

  Sentence ref = normalize_line("w1 w2 w3 w4 w5 w6 w7 w8");
  Sentence hyp = normalize_line("w1 w2 w3 w4");
  double bp = corpus_bleu({hyp}, {ref}).brevity_penalty;
  if (std::fabs(bp - std::exp(-1.0)) > 1e-9)
    return "half-length brevity penalty " + fmt(bp) + " vs exp(-1)";
  return "";
}

ParallelCorpus bijective_corpus(std::size_t vocab, std::size_t n_pairs) {
  ParallelCorpus c;
  auto stream = derive_stream(271828, "bijective-acceptance");
  std::vector<std::size_t> ids(vocab);
  for (std::size_t p = 0; p < n_pairs; ++p) {
    const std::size_t len = 3 + stream.next_below(6);  // 3..8
    for (std::size_t i = 0; i < vocab; ++i) ids[i] = i;
    shuffle(ids, stream);
    std::vector<std::string> src, tgt;
    for (std::size_t i = 0; i < len; ++i) {
      src.push_back("s" + std::to_string(ids[i]));
      tgt.push_back("t" + std::to_string(ids[i]));
    }
    c.pairs.push_back({sentence_from_tokens(src), sentence_from_tokens(tgt)});
  }
  return c;
}

std::string criterion_aligner_recovery(double* elapsed) {
  Timer timer;
  ParallelCorpus corpus = bijective_corpus(50, 1000);
  AlignConfig cfg;  // 5 EM iterations, diagonal prior
  AlignmentModel model = train_aligner(corpus, cfg);

  const auto& lls = model.iteration_log_likelihood;
  for (std::size_t i = 1; i < lls.size(); ++i) {
    if (lls[i] < lls[i - 1] - 1e-9)
      return "log-likelihood decreased at iteration " + std::to_string(i);
  }

  std::size_t total = 0, correct = 0;
  for (const SentencePair& pair : corpus.pairs) {
    for (const AlignmentLink& link : viterbi_align(model, pair)) {
      ++total;
      if (link.source_index && *link.source_index == link.target_index)
        ++correct;
    }
  }
  *elapsed = timer.seconds();
  if (correct != total)
    return fmt(100.0 * static_cast<double>(correct) /
               static_cast<double>(total)) +
           "% Viterbi accuracy (need 100%)";
  if (*elapsed >= 5.0) return "took " + fmt(*elapsed) + "s (limit 5s)";
  return "";
}

std::string criterion_aligner_oracle(double*) {
  ParallelCorpus corpus;
  corpus.pairs.push_back({normalize_line("a b"), normalize_line("x y")});
  corpus.pairs.push_back({normalize_line("a c"), normalize_line("x z")});
  corpus.pairs.push_back({normalize_line("b a"), normalize_line("y x")});

  AlignmentModel model = train_aligner(corpus, AlignConfig{});
  align_oracle::Model ref = align_oracle::train(corpus, 5, 4.0, 0.08, true);

  for (const auto& [e, row] : ref.t) {
    const std::string e_key = e.empty() ? TranslationTable::kNullWord : e;
    std::string ref_best, got_best;
    double ref_p = -1.0, got_p = -1.0;
    for (const auto& [f, p] : row) {
      double got = model.table.prob(e_key, f);
      if (std::fabs(got - p) >= 1e-6)
        return "t(" + f + "|" + e_key + ") differs by " + fmt(got - p);
      if (p > ref_p) {
        ref_p = p;
        ref_best = f;
      }
      if (got > got_p) {
        got_p = got;
        got_best = f;
      }
    }
    if (ref_best != got_best)
      return "argmax for '" + e_key + "' is '" + got_best + "', reference '" +
             ref_best + "'";
  }
  return "";
}

std::string criterion_cpt_statistics(double* elapsed) {
  Timer timer;
  Lexicon empty;
  CorruptionSpec spec;  // mask_ratio 0.35, span lambda 3.5, one mask per span
  auto lengths = derive_stream(5150, "cpt-acceptance-lengths");

  double frac_sum = 0.0;
  std::uint64_t span_sum = 0, span_n = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const std::size_t n = 80 + lengths.next_below(221);  // always >= 20
    std::vector<std::string> toks;
    toks.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      toks.push_back("w" + std::to_string(i % 17));
    Sentence s = sentence_from_tokens(std::move(toks));
    const std::string original_bytes = s.joined();

    auto stream = derive_stream(static_cast<std::uint64_t>(t), "cpt-acceptance");
    CorruptionPair pair = cpt_corrupt(s, empty, spec, stream);

    if (pair.original.joined() != original_bytes)
      return "original side altered at trial " + std::to_string(t);
    std::size_t masks = 0;
    for (const std::string& tok : pair.corrupted.tokens)
      if (tok == spec.mask_token) ++masks;
    if (masks != pair.span_lengths.size())
      return std::to_string(masks) + " mask tokens for " +
             std::to_string(pair.span_lengths.size()) + " spans at trial " +
             std::to_string(t);

    frac_sum += static_cast<double>(pair.masked_token_count) /
                static_cast<double>(n);
    for (std::size_t l : pair.sampled_span_lengths) {
      span_sum += l;
      ++span_n;
    }
  }
  const double mean_frac = frac_sum / trials;
  const double mean_span =
      static_cast<double>(span_sum) / static_cast<double>(span_n);
  *elapsed = timer.seconds();
  if (mean_frac < 0.32 || mean_frac > 0.38)
    return "mean masked fraction " + fmt(mean_frac) + " outside [0.32, 0.38]";
  if (mean_span < 3.3 || mean_span > 3.7)
    return "mean sampled span length " + fmt(mean_span) + " outside [3.3, 3.7]";
  if (*elapsed >= 10.0) return "took " + fmt(*elapsed) + "s (limit 10s)";
  return "";
}

std::string criterion_merge_accounting(double*) {
  for (int trial = 0; trial < 1000; ++trial) {
    auto stream =
        derive_stream(static_cast<std::uint64_t>(trial), "merge-acceptance");
    Lexicon domain;
    const std::size_t n_domain = 1 + stream.next_below(50);
    for (std::size_t i = 0; i < n_domain; ++i) {
      domain.insert({"w" + std::to_string(stream.next_below(80)),
                     "d" + std::to_string(i), Provenance::domain, "l"});
    }
    std::vector<HarvestedPair> harvested;
    const std::size_t n_harvest = stream.next_below(60);
    for (std::size_t i = 0; i < n_harvest; ++i) {
      harvested.push_back({"w" + std::to_string(stream.next_below(80)),
                           "b" + std::to_string(i), 1 + stream.next_below(9)});
    }

    Lexicon merged = merge_bible(domain, harvested);

    std::set<std::string> new_sources;
    for (const HarvestedPair& hp : harvested)
      if (!domain.contains(hp.source)) new_sources.insert(hp.source);
    if (merged.size() != domain.size() + new_sources.size())
      return "size accounting failed at trial " + std::to_string(trial);
    for (const auto& [key, entry] : domain.entries()) {
      const auto it = merged.entries().find(key);
      if (it == merged.entries().end())
        return "domain entry '" + key + "' lost at trial " +
               std::to_string(trial);
      if (it->second.target_form != entry.target_form ||
          it->second.provenance != entry.provenance)
        return "domain entry '" + key + "' altered at trial " +
               std::to_string(trial);
    }
  }
  return "";
}

std::string criterion_batch_plan(double*) {
  auto stream = derive_stream(9001, "batch-acceptance");
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t pseudo = 1 + stream.next_below(500);
    const std::size_t parallel = 1 + stream.next_below(300);
    const std::size_t batch = 2 * (1 + stream.next_below(16));

    BatchPlan plan = plan_batches(pseudo, parallel, batch,
                                  stream.next_u64());

    std::vector<std::size_t> all;
    for (const Batch& b : plan.batches) {
      const std::size_t p = b.pseudo_indices.size();
      const std::size_t q = b.parallel_indices.size();
      if (p == 0) return "empty pseudo half at trial " + std::to_string(trial);
      const std::size_t gap = p > q ? p - q : q - p;
      if (gap > 1)
        return "batch imbalance " + std::to_string(gap) + " at trial " +
               std::to_string(trial);
      for (std::size_t i : b.pseudo_indices) all.push_back(i);
      for (std::size_t i : b.parallel_indices) {
        if (i >= parallel)
          return "parallel index out of range at trial " + std::to_string(trial);
      }
    }
    std::sort(all.begin(), all.end());
    if (all.size() != pseudo)
      return "pseudo indices are not a partition at trial " +
             std::to_string(trial);
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (all[i] != i)
        return "pseudo index " + std::to_string(i) + " missing at trial " +
               std::to_string(trial);
    }
  }
  return "";
}

int run_cli(const std::string& args) {
  std::string cmd =
      std::string("\"") + DAMT_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::string criterion_pipeline_determinism(double* elapsed) {
  Timer timer;
  fs::path base = fs::temp_directory_path() /
                  ("damt_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(base);
  std::vector<fs::path> dirs = {base / "run1", base / "run2", base / "run3"};
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    std::string args = "pipeline --config \"" + kPipelineConfig +
                       "\" --out-dir \"" + dirs[i].string() + "\"";
    if (i == 2) args += " --threads 1";
    int rc = run_cli(args);
    if (rc != 0)
      return "run " + std::to_string(i + 1) + " exited " + std::to_string(rc);
  }

  // Timestamps make manifest.json legitimately differ; every data artifact
  // must match byte for byte.
  std::map<std::string, std::string> reference;
  for (const auto& entry : fs::directory_iterator(dirs[0])) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    if (name == "manifest.json") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    reference[name] = std::string(std::istreambuf_iterator<char>(in),
                                  std::istreambuf_iterator<char>());
  }
  if (reference.size() < 20)
    return "only " + std::to_string(reference.size()) + " artifacts produced";
  for (std::size_t i = 1; i < dirs.size(); ++i) {
    for (const auto& [name, bytes] : reference) {
      std::ifstream in(dirs[i] / name, std::ios::binary);
      if (!in.good())
        return name + " missing from run " + std::to_string(i + 1);
      std::string got((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
      if (got != bytes)
        return name + " differs between run 1 and run " + std::to_string(i + 1);
    }
  }
  fs::remove_all(base);
  *elapsed = timer.seconds();
  if (*elapsed >= 60.0) return "took " + fmt(*elapsed) + "s (limit 60s)";
  return "";
}

std::string criterion_split_cap(double*) {
  ParallelCorpus corpus;
  corpus.pairs.reserve(7924);
  for (std::size_t i = 0; i < 7924; ++i) {
    Sentence s = sentence_from_tokens({"w" + std::to_string(i)});
    corpus.pairs.push_back({s, s});
  }
  SplitSpec spec;
  spec.validation_fraction = 0.08;
  auto [train, valid] = split_validation(corpus, spec);
  if (valid.size() != 634)
    return "validation split of 7924 gave " + std::to_string(valid.size()) +
           " pairs (want 634)";
  if (train.size() != 7290)
    return "train side is " + std::to_string(train.size()) + " (want 7290)";

  Corpus big;
  big.sentences.reserve(234567);
  for (std::size_t i = 0; i < 234567; ++i)
    big.sentences.push_back(sentence_from_tokens({"s" + std::to_string(i)}));
  Corpus capped = sample_cap(big, 200000, 7);
  if (capped.size() != 200000)
    return "sample_cap gave " + std::to_string(capped.size()) +
           " items (want exactly 200000)";
  return "";
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    std::string (*run)(double*);
    bool timed;
  };
  const std::vector<Criterion> criteria = {
      {1, criterion_metric_parity, true},
      {2, criterion_metric_identities, false},
      {3, criterion_aligner_recovery, true},
      {4, criterion_aligner_oracle, false},
      {5, criterion_cpt_statistics, true},
      {6, criterion_merge_accounting, false},
      {7, criterion_batch_plan, false},
      {8, criterion_pipeline_determinism, true},
      {9, criterion_split_cap, false},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    double elapsed = 0.0;
    std::string why;
    try {
      why = c.run(&elapsed);
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    std::cout << "criterion " << c.number << ": ";
    if (why.empty()) {
      std::cout << "PASS";
      if (c.timed) std::cout << " (" << fmt(elapsed) << "s)";
    } else {
      std::cout << "FAIL — " << why;
      ++failures;
    }
    std::cout << '\n';
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
