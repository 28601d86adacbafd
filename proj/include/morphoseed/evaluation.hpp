// Copyright 2026 The Morphoseed Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Word-similarity evaluation: cosine scoring, Spearman's rho with
// average ranks, internal/external score mixing and the mixing sweep.

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "morphoseed/embedding.hpp"
#include "morphoseed/error.hpp"
#include "morphoseed/text.hpp"

namespace morphoseed {

inline double Cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw Error("cosine: dimension mismatch");
  double uv = 0, uu = 0, vv = 0;
  for (size_t i = 0; i < u.size(); ++i) {
    uv += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0 || vv == 0) throw UndefinedError("cosine of a zero vector is undefined");
  return std::clamp(uv / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

// 1-based ranks; tied values share the mean of their positions.
inline std::vector<double> AverageRanks(std::span<const double> xs) {
  std::vector<size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

inline double Pearson(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0 || syy == 0) throw UndefinedError("correlation undefined: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

inline double Spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error("spearman: length mismatch");
  if (xs.size() < 2) throw Error("spearman: need at least two observations");
  auto rx = AverageRanks(xs);
  auto ry = AverageRanks(ys);
  return Pearson(rx, ry);
}

struct WordPair {
  std::string first;
  std::string second;
  double gold = 0.0;
};

struct WordPairDataset {
  std::string name;
  std::vector<WordPair> pairs;
};

// `word1 \t word2 \t gold` rows. Duplicate unordered pairs are rejected.
inline WordPairDataset LoadDataset(const std::string& path) {
  WordPairDataset ds;
  ds.name = std::filesystem::path(path).stem().string();
  std::vector<std::string> errs;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& line : text::ReadDataLines(path)) {
    const std::string where = path + ":" + std::to_string(line.number);
    auto f = text::Split(line.text, '\t');
    if (f.size() != 3) {
      errs.push_back(where + ": expected word1<TAB>word2<TAB>gold");
      continue;
    }
    WordPair p{std::string(text::Trim(f[0])), std::string(text::Trim(f[1])), 0.0};
    auto g = text::ParseDouble(f[2]);
    if (!g || !std::isfinite(*g)) {
      errs.push_back(where + ": gold score is not a finite number");
      continue;
    }
    p.gold = *g;
    auto key = std::minmax(p.first, p.second);
    if (!seen.emplace(key.first, key.second).second) {
      errs.push_back(where + ": duplicate pair " + p.first + " / " + p.second);
      continue;
    }
    ds.pairs.push_back(std::move(p));
  }
  if (!errs.empty()) throw ValidationError(std::move(errs));
  return ds;
}

using PairScorer = std::function<std::optional<double>(const std::string&, const std::string&)>;

// Cosine over a vector table; nullopt when either word is missing.
inline PairScorer CosineScorer(const EmbeddingModel& model) {
  return [&model](const std::string& a, const std::string& b) -> std::optional<double> {
    if (!model.Contains(a) || !model.Contains(b)) return std::nullopt;
    try {
      return Cosine(model.Vector(a), model.Vector(b));
    } catch (const UndefinedError&) {
      return std::nullopt;
    }
  };
}

struct ScoredPair {
  size_t index = 0;  // row in the dataset
  double gold = 0.0;
  double score = 0.0;
};

struct EvalResult {
  std::string label;
  double rho = 0.0;
  size_t n_scored = 0;
  size_t n_skipped = 0;
  std::vector<ScoredPair> scored;
  std::vector<size_t> skipped;
};

// Scores every pair; pairs the scorer cannot cover are skipped and
// reported. rho is computed over the scored pairs.
inline EvalResult ScoreDataset(const WordPairDataset& ds, const PairScorer& scorer,
                               std::string label = {}) {
  EvalResult r;
  r.label = std::move(label);
  for (size_t i = 0; i < ds.pairs.size(); ++i) {
    const auto& p = ds.pairs[i];
    if (auto s = scorer(p.first, p.second)) {
      r.scored.push_back({i, p.gold, *s});
    } else {
      r.skipped.push_back(i);
    }
  }
  r.n_scored = r.scored.size();
  r.n_skipped = r.skipped.size();
  if (r.n_scored < 2) throw Error("fewer than two scored pairs in " + ds.name);
  std::vector<double> gold, score;
  for (const auto& s : r.scored) {
    gold.push_back(s.gold);
    score.push_back(s.score);
  }
  r.rho = Spearman(gold, score);
  return r;
}

inline double HybridScore(double internal, double external, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error("alpha must lie in [0, 1]");
  return alpha * internal + (1.0 - alpha) * external;
}

// "a:b:step" -> a, a+step, ..., b (inclusive, endpoints snapped).
inline std::vector<double> ParseGrid(const std::string& spec) {
  auto f = text::Split(spec, ':');
  if (f.size() != 3) throw ParseError("grid must be start:stop:step");
  auto a = text::ParseDouble(f[0]), b = text::ParseDouble(f[1]), s = text::ParseDouble(f[2]);
  if (!a || !b || !s || *s <= 0 || *b < *a) throw ParseError("bad grid " + spec);
  std::vector<double> g;
  const long steps = std::lround((*b - *a) / *s);
  for (long i = 0; i <= steps; ++i) g.push_back(i == steps ? *b : *a + static_cast<double>(i) * *s);
  return g;
}

inline std::vector<double> DefaultGrid() { return ParseGrid("0:1:0.05"); }

// One row per grid point; rho is computed over the pairs both scorers
// cover.
struct SweepRow {
  double alpha = 0.0;
  double rho = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  size_t n_common = 0;
  // Raw per-pair scores on the common subset, so the mixing inputs are on
  // record next to the correlations.
  std::vector<size_t> pair_index;
  std::vector<double> gold, internal, external;

  std::string ToCsv() const {
    std::ostringstream out;
    out << "alpha,rho\n";
    char buf[64];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%.4f,%.12f\n", r.alpha, r.rho);
      out << buf;
    }
    return out.str();
  }
};

namespace detail {
inline std::vector<double> ZScores(const std::vector<double>& xs) {
  double n = static_cast<double>(xs.size());
  double m = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double v = 0;
  for (double x : xs) v += (x - m) * (x - m);
  double sd = std::sqrt(v / n);
  std::vector<double> z(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) z[i] = sd == 0 ? 0.0 : (xs[i] - m) / sd;
  return z;
}
}  // namespace detail

// With `zscore`, each scorer's outputs are standardized over the common
// subset before mixing.
inline SweepResult WeightSweep(const WordPairDataset& ds, const PairScorer& internal,
                               const PairScorer& external, const std::vector<double>& grid,
                               bool zscore = false) {
  SweepResult r;
  for (size_t i = 0; i < ds.pairs.size(); ++i) {
    const auto& p = ds.pairs[i];
    auto a = internal(p.first, p.second);
    auto b = external(p.first, p.second);
    if (!a || !b) continue;
    r.pair_index.push_back(i);
    r.gold.push_back(p.gold);
    r.internal.push_back(*a);
    r.external.push_back(*b);
  }
  r.n_common = r.gold.size();
  if (r.n_common < 2) throw Error("weight sweep: fewer than two pairs covered by both scorers");
  auto in = zscore ? detail::ZScores(r.internal) : r.internal;
  auto ex = zscore ? detail::ZScores(r.external) : r.external;
  std::vector<double> mixed(r.n_common);
  for (double alpha : grid) {
    for (size_t i = 0; i < r.n_common; ++i) mixed[i] = HybridScore(in[i], ex[i], alpha);
    r.rows.push_back({alpha, Spearman(r.gold, mixed)});
  }
  return r;
}

}  // namespace morphoseed
