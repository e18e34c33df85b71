#include "damt/align.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

#include "damt/errors.hpp"
#include "damt/kernels.hpp"
#include "damt/parallel.hpp"
#include "damt/strconv.hpp"

namespace damt {

std::uint32_t Vocab::intern(std::string_view w) {
  auto it = ids_.find(std::string(w));
  if (it != ids_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(words_.size());
  words_.emplace_back(w);
  ids_.emplace(words_.back(), id);
  return id;
}

std::optional<std::uint32_t> Vocab::lookup(std::string_view w) const {
  auto it = ids_.find(std::string(w));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::ptrdiff_t TranslationTable::entry_index(std::uint32_t e,
                                             std::uint32_t f) const {
  const auto* begin = entry_target.data() + row_offset[e];
  const auto* end = entry_target.data() + row_offset[e + 1];
  const auto* it = std::lower_bound(begin, end, f);
  if (it == end || *it != f) return -1;
  return it - entry_target.data();
}

double TranslationTable::prob_id(std::uint32_t e, std::uint32_t f) const {
  auto idx = entry_index(e, f);
  return idx < 0 ? 0.0 : entry_prob[static_cast<std::size_t>(idx)];
}

double TranslationTable::prob(std::string_view e, std::string_view f) const {
  auto eid = e == kNullWord ? std::optional<std::uint32_t>(kNullId)
                            : source.lookup(e);
  auto fid = target.lookup(f);
  if (!eid || !fid) return 0.0;
  return prob_id(*eid, *fid);
}

namespace {

struct IdPair {
  std::vector<std::uint32_t> src;
  std::vector<std::uint32_t> tgt;
};

// Normalized diagonal weights for one (target_len, source_len) shape: row i
// holds delta(j|i, m, n) over real source positions, each row summing to
// 1 - p0 (NULL keeps p0 separately).
struct DeltaCache {
  std::unordered_map<std::uint64_t, std::vector<double>> rows;
  double null_prob = 0.08;

  static std::uint64_t key(std::size_t m, std::size_t n) {
    return (static_cast<std::uint64_t>(m) << 32) | n;
  }

  const double* row(std::size_t m, std::size_t n, std::size_t i) const {
    return rows.at(key(m, n)).data() + i * n;
  }

  void build(std::size_t m, std::size_t n, double tension, bool diagonal) {
    auto k = key(m, n);
    if (rows.count(k)) return;
    std::vector<double> mat(m * n);
    for (std::size_t i = 0; i < m; ++i) {
      double* r = mat.data() + i * n;
      double total = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        r[j] = diagonal
                   ? std::exp(-tension *
                              std::fabs(static_cast<double>(i + 1) /
                                            static_cast<double>(m) -
                                        static_cast<double>(j + 1) /
                                            static_cast<double>(n)))
                   : 1.0;
        total += r[j];
      }
      const double scale = (1.0 - null_prob) / total;
      for (std::size_t j = 0; j < n; ++j) r[j] *= scale;
    }
    rows.emplace(k, std::move(mat));
  }
};

IdPair intern_pair(TranslationTable& table, const SentencePair& pair) {
  IdPair ids;
  ids.src.reserve(pair.source.size());
  ids.tgt.reserve(pair.target.size());
  for (const auto& w : pair.source.tokens) ids.src.push_back(table.source.intern(w));
  for (const auto& w : pair.target.tokens) ids.tgt.push_back(table.target.intern(w));
  return ids;
}

// Sparse uniform init: each source row covers exactly the target words that
// co-occur with it (NULL co-occurs with everything).
void init_table(TranslationTable& table, const std::vector<IdPair>& pairs) {
  std::vector<std::set<std::uint32_t>> row_targets(table.source.size());
  for (const auto& p : pairs) {
    for (auto f : p.tgt) {
      row_targets[TranslationTable::kNullId].insert(f);
      for (auto e : p.src) row_targets[e].insert(f);
    }
  }
  table.row_offset.assign(table.source.size() + 1, 0);
  for (std::size_t e = 0; e < row_targets.size(); ++e)
    table.row_offset[e + 1] = table.row_offset[e] + row_targets[e].size();
  table.entry_target.reserve(table.row_offset.back());
  table.entry_prob.reserve(table.row_offset.back());
  for (const auto& row : row_targets) {
    const double p = row.empty() ? 0.0 : 1.0 / static_cast<double>(row.size());
    for (auto f : row) {
      table.entry_target.push_back(f);
      table.entry_prob.push_back(p);
    }
  }
}

}  // namespace

AlignmentModel train_aligner(const ParallelCorpus& corpus,
                             const AlignConfig& config) {
  if (corpus.pairs.empty()) throw DataError("train_aligner: empty corpus");
  if (config.em_iterations < 1)
    throw ConfigError("train_aligner: em_iterations must be >= 1");
  if (!(config.params.tension > 0.0))
    throw ConfigError("train_aligner: tension must be positive");
  if (!(config.params.null_prob > 0.0 && config.params.null_prob < 1.0))
    throw ConfigError("train_aligner: null_prob must lie in (0, 1)");

  AlignmentModel model;
  model.params = config.params;
  model.diagonal = config.diagonal;
  model.table.source.intern(TranslationTable::kNullWord);

  std::vector<IdPair> pairs;
  pairs.reserve(corpus.pairs.size());
  for (const auto& p : corpus.pairs) {
    if (p.source.empty() || p.target.empty())
      throw DataError("train_aligner: empty sentence in corpus");
    pairs.push_back(intern_pair(model.table, p));
  }
  init_table(model.table, pairs);

  DeltaCache delta;
  delta.null_prob = config.params.null_prob;
  for (const auto& p : pairs)
    delta.build(p.tgt.size(), p.src.size(), config.params.tension,
                config.diagonal);

  const auto& k = kernels::active_kernels();
  const double p0 = config.params.null_prob;
  TranslationTable& table = model.table;
  const std::size_t n_chunks = chunk_count(pairs.size(), kDefaultChunk);

  for (int iter = 0; iter < config.em_iterations; ++iter) {
    // Per-chunk partials keep the reduction deterministic: entry deltas are
    // summed within a chunk in pair order and chunks merge in chunk order,
    // so neither thread count nor scheduling changes a single bit.
    std::vector<std::unordered_map<std::size_t, double>> chunk_counts(n_chunks);
    std::vector<double> chunk_ll(n_chunks, 0.0);

    for_each_chunk(pairs.size(), config.threads,
                   [&](std::size_t c, std::size_t cb, std::size_t ce) {
      auto& counts = chunk_counts[c];
      double ll = 0.0;
      std::vector<double> tvals, scores, post;
      std::vector<std::size_t> eidx;
      for (std::size_t pi = cb; pi < ce; ++pi) {
        const auto& p = pairs[pi];
        const std::size_t n = p.src.size(), m = p.tgt.size();
        tvals.resize(n); scores.resize(n); post.resize(n); eidx.resize(n);
        for (std::size_t i = 0; i < m; ++i) {
          const std::uint32_t f = p.tgt[i];
          for (std::size_t j = 0; j < n; ++j) {
            auto idx = table.entry_index(p.src[j], f);
            eidx[j] = static_cast<std::size_t>(idx);
            tvals[j] = table.entry_prob[eidx[j]];
          }
          const double* drow = delta.row(m, n, i);
          k.mul(tvals.data(), drow, scores.data(), n);
          const auto nidx = static_cast<std::size_t>(
              table.entry_index(TranslationTable::kNullId, f));
          const double null_score = p0 * table.entry_prob[nidx];
          const double z = k.block_sum(scores.data(), n) + null_score;
          ll += std::log(z);
          k.scale(scores.data(), 1.0 / z, post.data(), n);
          for (std::size_t j = 0; j < n; ++j) counts[eidx[j]] += post[j];
          counts[nidx] += null_score / z;
        }
      }
      chunk_ll[c] = ll;
    });

    double ll_total = 0.0;
    for (double v : chunk_ll) ll_total += v;
    model.iteration_log_likelihood.push_back(ll_total);

    std::vector<double> counts(table.entry_count(), 0.0);
    for (const auto& chunk : chunk_counts)
      for (const auto& [idx, v] : chunk) counts[idx] += v;

    // M-step: renormalize each row; the floor only guards against an
    // all-zero row, which EM cannot actually produce here.
    for (std::size_t e = 0; e + 1 < table.row_offset.size(); ++e) {
      const std::size_t b = table.row_offset[e], eend = table.row_offset[e + 1];
      if (b == eend) continue;
      double denom = k.block_sum(counts.data() + b, eend - b);
      if (denom < 1e-12) denom = 1e-12;
      k.scale(counts.data() + b, 1.0 / denom, table.entry_prob.data() + b,
              eend - b);
    }
  }

  model.em_iterations = config.em_iterations;
  model.trained = true;
  return model;
}

std::vector<AlignmentLink> viterbi_align(const AlignmentModel& model,
                                         const SentencePair& pair) {
  if (!model.trained) throw ConfigError("viterbi_align: untrained model");
  if (pair.source.empty() || pair.target.empty())
    throw DataError("viterbi_align: empty sentence");

  const auto& k = kernels::active_kernels();
  const auto& table = model.table;
  const std::size_t n = pair.source.size(), m = pair.target.size();
  const double p0 = model.params.null_prob;

  DeltaCache delta;
  delta.null_prob = p0;
  delta.build(m, n, model.params.tension, model.diagonal);

  std::vector<std::uint32_t> src_ids(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto id = table.source.lookup(pair.source.tokens[j]);
    src_ids[j] = id ? *id : std::numeric_limits<std::uint32_t>::max();
  }

  std::vector<AlignmentLink> links;
  links.reserve(m);
  std::vector<double> tvals(n), scores(n);
  for (std::size_t i = 0; i < m; ++i) {
    auto fid = table.target.lookup(pair.target.tokens[i]);
    for (std::size_t j = 0; j < n; ++j) {
      tvals[j] = (fid && src_ids[j] != std::numeric_limits<std::uint32_t>::max())
                     ? table.prob_id(src_ids[j], *fid)
                     : 0.0;
    }
    const double* drow = delta.row(m, n, i);
    k.mul(tvals.data(), drow, scores.data(), n);
    const std::size_t best = k.argmax(scores.data(), n);
    // A target word never seen in training falls back to a uniform NULL
    // probability, so it aligns to NULL instead of an arbitrary position.
    const double null_score =
        fid ? p0 * table.prob_id(TranslationTable::kNullId, *fid)
            : p0 / static_cast<double>(std::max<std::size_t>(
                       table.target.size(), 1));
    AlignmentLink link;
    link.target_index = static_cast<std::uint32_t>(i);
    if (null_score > scores[best]) {
      link.source_index = std::nullopt;  // NULL wins only strictly
    } else {
      link.source_index = static_cast<std::uint32_t>(best);
    }
    links.push_back(link);
  }
  return links;
}

std::vector<HarvestedPair> harvest_pairs(const AlignmentModel& model,
                                         const ParallelCorpus& corpus,
                                         int min_pair_count) {
  if (!model.trained) throw ConfigError("harvest_pairs: untrained model");
  if (min_pair_count < 1)
    throw ConfigError("harvest_pairs: min_pair_count must be >= 1");

  // source word -> target word -> link count; ordered maps give the tie rule
  // (lexicographically smallest target) and a stable scan for free.
  std::map<std::string, std::map<std::string, std::uint64_t>> counts;
  for (const auto& pair : corpus.pairs) {
    auto links = viterbi_align(model, pair);
    for (const auto& link : links) {
      if (!link.source_index) continue;
      const auto& e = pair.source.tokens[*link.source_index];
      const auto& f = pair.target.tokens[link.target_index];
      ++counts[e][f];
    }
  }

  std::vector<HarvestedPair> out;
  for (const auto& [e, targets] : counts) {
    const std::string* best_f = nullptr;
    std::uint64_t best_c = 0;
    for (const auto& [f, c] : targets) {
      if (c > best_c) {  // first lexicographic target wins ties
        best_c = c;
        best_f = &f;
      }
    }
    if (best_c >= static_cast<std::uint64_t>(min_pair_count))
      out.push_back({e, *best_f, best_c});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.source != b.source) return a.source < b.source;
    return a.target < b.target;
  });
  return out;
}

void save_model_tsv(const AlignmentModel& model, const std::string& path) {
  if (!model.trained) throw ConfigError("save_model_tsv: untrained model");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << "#damt-align\t" << format_double(model.params.tension) << '\t'
      << format_double(model.params.null_prob) << '\t'
      << model.em_iterations << '\t' << (model.diagonal ? 1 : 0) << '\n';

  const auto& table = model.table;
  // Rows ordered by source word (NULL first), entries by target word, so the
  // file is byte-stable for a given model regardless of interning order.
  std::vector<std::uint32_t> row_ids(table.source.size());
  for (std::uint32_t e = 0; e < row_ids.size(); ++e) row_ids[e] = e;
  std::sort(row_ids.begin() + 1, row_ids.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              return table.source.word(a) < table.source.word(b);
            });
  for (auto e : row_ids) {
    std::vector<std::size_t> entries;
    for (std::size_t x = table.row_offset[e]; x < table.row_offset[e + 1]; ++x)
      entries.push_back(x);
    std::sort(entries.begin(), entries.end(), [&](std::size_t a, std::size_t b) {
      return table.target.word(table.entry_target[a]) <
             table.target.word(table.entry_target[b]);
    });
    for (auto x : entries) {
      out << table.source.word(e) << '\t'
          << table.target.word(table.entry_target[x]) << '\t'
          << format_double(table.entry_prob[x]) << '\n';
    }
  }
  if (!out) throw DataError("write failed: " + path);
}

AlignmentModel load_model_tsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty model file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_tab(line);
  if (header.size() != 5 || header[0] != "#damt-align")
    throw DataError("bad model header in " + path);

  AlignmentModel model;
  model.params.tension = parse_double(header[1], "tension");
  model.params.null_prob = parse_double(header[2], "null_prob");
  model.em_iterations = static_cast<int>(parse_int(header[3], "iterations"));
  model.diagonal = parse_int(header[4], "diagonal") != 0;
  model.table.source.intern(TranslationTable::kNullWord);

  // Collect rows, then build CSR sorted by target id within each row.
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> triples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_tab(line);
    if (fields.size() != 3)
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected 3 tab-separated fields");
    auto e = model.table.source.intern(fields[0]);
    auto f = model.table.target.intern(fields[1]);
    triples.emplace_back(e, f, parse_double(fields[2], "probability"));
  }
  auto& table = model.table;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(
      table.source.size());
  for (auto& [e, f, p] : triples) rows[e].emplace_back(f, p);
  table.row_offset.assign(table.source.size() + 1, 0);
  for (std::size_t e = 0; e < rows.size(); ++e) {
    std::sort(rows[e].begin(), rows[e].end());
    table.row_offset[e + 1] = table.row_offset[e] + rows[e].size();
  }
  for (auto& row : rows) {
    for (auto& [f, p] : row) {
      table.entry_target.push_back(f);
      table.entry_prob.push_back(p);
    }
  }
  model.trained = true;
  return model;
}

void save_harvest_tsv(const std::vector<HarvestedPair>& pairs,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  for (const auto& p : pairs)
    out << p.source << '\t' << p.target << '\t' << p.count << '\n';
  if (!out) throw DataError("write failed: " + path);
}

std::vector<HarvestedPair> load_harvest_tsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  std::vector<HarvestedPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_tab(line);
    if (fields.size() != 3)
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected 3 tab-separated fields");
    HarvestedPair p;
    p.source = std::string(fields[0]);
    p.target = std::string(fields[1]);
    p.count = static_cast<std::uint64_t>(parse_int(fields[2], "count"));
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace damt
