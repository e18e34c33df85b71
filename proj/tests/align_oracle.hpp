#pragma once

// Dense brute-force reference for the diagonal-prior EM aligner.  Written
// independently of the production code on purpose: string-keyed maps, naive
// loops, no shared numeric kernels.  Agreement is checked to 1e-6, which
// absorbs the differing summation orders.

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "damt/text.hpp"

namespace align_oracle {

// e == "" plays the NULL role.
struct Model {
  std::map<std::string, std::map<std::string, double>> t;
  std::vector<double> lls;
};

inline double diag_weight(std::size_t i, std::size_t m, std::size_t j,
                          std::size_t n, double lambda) {
  return std::exp(-lambda * std::fabs(static_cast<double>(i + 1) /
                                          static_cast<double>(m) -
                                      static_cast<double>(j + 1) /
                                          static_cast<double>(n)));
}

inline Model train(const damt::ParallelCorpus& corpus, int iterations,
                   double lambda, double p0, bool diagonal) {
  Model model;
  std::map<std::string, std::set<std::string>> cooc;
  for (const auto& pair : corpus.pairs) {
    for (const auto& f : pair.target.tokens) {
      cooc[""].insert(f);
      for (const auto& e : pair.source.tokens) cooc[e].insert(f);
    }
  }
  for (const auto& [e, fs] : cooc) {
    const double p = 1.0 / static_cast<double>(fs.size());
    for (const auto& f : fs) model.t[e][f] = p;
  }

  for (int iter = 0; iter < iterations; ++iter) {
    std::map<std::string, std::map<std::string, double>> counts;
    double ll = 0.0;
    for (const auto& pair : corpus.pairs) {
      const auto& src = pair.source.tokens;
      const auto& tgt = pair.target.tokens;
      const std::size_t n = src.size(), m = tgt.size();
      for (std::size_t i = 0; i < m; ++i) {
        const auto& f = tgt[i];
        std::vector<double> w(n, 1.0);
        double wsum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (diagonal) w[j] = diag_weight(i, m, j, n, lambda);
          wsum += w[j];
        }
        std::vector<double> score(n);
        double z = p0 * model.t[""][f];
        const double null_score = z;
        for (std::size_t j = 0; j < n; ++j) {
          score[j] = model.t[src[j]][f] * (1.0 - p0) * w[j] / wsum;
          z += score[j];
        }
        ll += std::log(z);
        for (std::size_t j = 0; j < n; ++j) counts[src[j]][f] += score[j] / z;
        counts[""][f] += null_score / z;
      }
    }
    model.lls.push_back(ll);
    for (auto& [e, row] : counts) {
      double denom = 0.0;
      for (const auto& [f, c] : row) denom += c;
      if (denom < 1e-12) denom = 1e-12;
      for (const auto& [f, c] : row) model.t[e][f] = c / denom;
    }
  }
  return model;
}

// -1 encodes a NULL link; ties keep the smallest j and NULL wins only
// strictly.
inline std::vector<int> viterbi(const Model& model,
                                const std::vector<std::string>& src,
                                const std::vector<std::string>& tgt,
                                double lambda, double p0, bool diagonal) {
  const std::size_t n = src.size(), m = tgt.size();
  std::vector<int> links(m, -1);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& f = tgt[i];
    std::vector<double> w(n, 1.0);
    double wsum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (diagonal) w[j] = diag_weight(i, m, j, n, lambda);
      wsum += w[j];
    }
    double best = -1.0;
    int best_j = 0;
    for (std::size_t j = 0; j < n; ++j) {
      double te = 0.0;
      auto row = model.t.find(src[j]);
      if (row != model.t.end()) {
        auto cell = row->second.find(f);
        if (cell != row->second.end()) te = cell->second;
      }
      const double s = te * (1.0 - p0) * w[j] / wsum;
      if (s > best) {
        best = s;
        best_j = static_cast<int>(j);
      }
    }
    double tnull = 0.0;
    auto nrow = model.t.find("");
    if (nrow != model.t.end()) {
      auto cell = nrow->second.find(f);
      if (cell != nrow->second.end()) tnull = cell->second;
    }
    links[i] = (p0 * tnull > best) ? -1 : best_j;
  }
  return links;
}

inline double best_target_prob(const Model& model, const std::string& e,
                               std::string* best_f = nullptr) {
  double best = -1.0;
  auto row = model.t.find(e);
  if (row == model.t.end()) return 0.0;
  for (const auto& [f, p] : row->second) {
    if (p > best) {
      best = p;
      if (best_f) *best_f = f;
    }
  }
  return best;
}

}  // namespace align_oracle
