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

// Intrinsic checks over a trained model: nearest MCs by cosine
// (paradigmatic), input-output affinity ranking (syntagmatic), and a
// 2-D PCA projection for plotting.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "morphoseed/embedding.hpp"
#include "morphoseed/error.hpp"
#include "morphoseed/evaluation.hpp"
#include "morphoseed/hierarchy.hpp"
#include "morphoseed/lexicon.hpp"

namespace morphoseed {

struct NeighborResult {
  std::string query;
  int k = 0;
  std::vector<ScoredMc> ranked;
};

namespace detail {

inline void RankAndTruncate(std::vector<ScoredMc>& v, int k) {
  std::sort(v.begin(), v.end(), [](const ScoredMc& a, const ScoredMc& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  if (k >= 0 && static_cast<size_t>(k) < v.size()) v.resize(k);
}

}  // namespace detail

// Top-k MCs by cosine to `query`, over lexicon MCs present in the model.
// The query itself is excluded.
inline NeighborResult NearestMcs(const EmbeddingModel& model, const Lexicon& lex,
                                 const std::string& query, int k) {
  auto q = model.Vector(query);
  NeighborResult r{query, k, {}};
  if (k <= 0) return r;
  for (const auto& mc : lex.mcs()) {
    if (mc.id == query || !model.Contains(mc.id)) continue;
    try {
      r.ranked.push_back({mc.id, Cosine(q, model.Vector(mc.id))});
    } catch (const UndefinedError&) {
    }
  }
  detail::RankAndTruncate(r.ranked, k);
  return r;
}

// Ranks MCs by dot(input(query), output(candidate)): how strongly the
// model predicts each candidate in the query's template context. The
// partition constant of the softmax is dropped since it does not change
// the order.
inline NeighborResult SyntagmaticTop(const EmbeddingModel& model, const Lexicon& lex,
                                     const std::string& query, int k) {
  if (!model.has_output()) throw Error("syntagmatic scoring needs the model's output matrix");
  auto q = model.Vector(query);
  NeighborResult r{query, k, {}};
  if (k <= 0) return r;
  for (const auto& mc : lex.mcs()) {
    if (!model.Contains(mc.id)) continue;
    r.ranked.push_back({mc.id, detail::Dot(q, model.OutputVector(mc.id))});
  }
  detail::RankAndTruncate(r.ranked, k);
  return r;
}

struct ProjectedPoint {
  std::string token;
  double x = 0.0;
  double y = 0.0;
};

struct Projection2D {
  std::vector<ProjectedPoint> points;
  // Unit principal axes in the embedding space.
  std::vector<std::vector<double>> components;
  std::vector<double> eigenvalues;
  // Share of total variance captured by each component.
  std::vector<double> explained;

  std::string ToCsv() const {
    std::ostringstream out;
    out << "token,x,y\n";
    char buf[96];
    for (const auto& p : points) {
      std::snprintf(buf, sizeof buf, ",%.9f,%.9f\n", p.x, p.y);
      out << p.token << buf;
    }
    return out.str();
  }
};

struct PowerIterationOptions {
  double tolerance = 1e-9;
  int max_iterations = 10000;
};

// Leading eigenpairs of a symmetric PSD matrix by power iteration with
// deflation. Eigenvectors are re-orthogonalized against earlier ones and
// signed so the first non-negligible entry is positive.
inline std::vector<std::pair<double, std::vector<double>>> TopEigenpairs(
    std::vector<double> a, int n, int count, const PowerIterationOptions& opt = {}) {
  std::vector<std::pair<double, std::vector<double>>> out;
  CounterRng rng(0x5EED);
  std::vector<double> v(n), w(n);
  for (int c = 0; c < count; ++c) {
    for (auto& x : v) x = rng.Uniform() + 0.5;
    auto orthonormalize = [&](std::vector<double>& x) {
      for (const auto& [lam, u] : out) {
        double d = 0;
        for (int i = 0; i < n; ++i) d += x[i] * u[i];
        for (int i = 0; i < n; ++i) x[i] -= d * u[i];
      }
      double norm = 0;
      for (double xi : x) norm += xi * xi;
      norm = std::sqrt(norm);
      if (norm == 0) return false;
      for (auto& xi : x) xi /= norm;
      return true;
    };
    orthonormalize(v);
    double lambda = 0;
    double prev_diff = 0;
    for (int it = 0; it < opt.max_iterations; ++it) {
      for (int i = 0; i < n; ++i) {
        double s = 0;
        for (int j = 0; j < n; ++j) s += a[static_cast<size_t>(i) * n + j] * v[j];
        w[i] = s;
      }
      if (!orthonormalize(w)) {
        // Remaining spectrum is zero: any orthogonal unit vector will do.
        lambda = 0;
        break;
      }
      double diff_pos = 0, diff_neg = 0;
      for (int i = 0; i < n; ++i) {
        diff_pos = std::max(diff_pos, std::abs(w[i] - v[i]));
        diff_neg = std::max(diff_neg, std::abs(w[i] + v[i]));
      }
      v.swap(w);
      // Steps shrink geometrically with ratio r, so the distance still to
      // go is about diff * r / (1 - r). Stop when that, not the last step,
      // is under tolerance; close eigenvalues would otherwise stall early.
      const double diff = std::min(diff_pos, diff_neg);
      double remaining = diff;
      if (it > 0 && prev_diff > 0) {
        const double r = diff / prev_diff;
        remaining = r < 1.0 ? diff * r / (1.0 - r) : std::numeric_limits<double>::infinity();
      }
      if (diff < opt.tolerance && remaining < opt.tolerance) break;
      prev_diff = diff;
    }
    lambda = 0;
    for (int i = 0; i < n; ++i) {
      double s = 0;
      for (int j = 0; j < n; ++j) s += a[static_cast<size_t>(i) * n + j] * v[j];
      lambda += v[i] * s;
    }
    for (int i = 0; i < n; ++i) {
      if (std::abs(v[i]) > 1e-12) {
        if (v[i] < 0) {
          for (auto& x : v) x = -x;
        }
        break;
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a[static_cast<size_t>(i) * n + j] -= lambda * v[i] * v[j];
    }
    out.emplace_back(std::max(0.0, lambda), v);
  }
  return out;
}

// Mean-centers `rows` and projects them onto their top one or two
// principal axes.
inline Projection2D PcaProjectRows(const std::vector<std::string>& tokens,
                                   const std::vector<std::vector<double>>& rows,
                                   int components = 2, const PowerIterationOptions& opt = {}) {
  const size_t n = rows.size();
  if (n < 3) throw Error("PCA needs at least three points");
  const int d = static_cast<int>(rows.front().size());
  std::vector<double> mean(d, 0.0);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != d) throw Error("PCA: ragged input");
    for (int j = 0; j < d; ++j) mean[j] += r[j];
  }
  for (auto& m : mean) m /= static_cast<double>(n);
  std::vector<double> cov(static_cast<size_t>(d) * d, 0.0);
  for (const auto& r : rows) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) cov[static_cast<size_t>(i) * d + j] += (r[i] - mean[i]) * (r[j] - mean[j]);
    }
  }
  double trace = 0;
  for (auto& c : cov) c /= static_cast<double>(n - 1);
  for (int i = 0; i < d; ++i) trace += cov[static_cast<size_t>(i) * d + i];
  if (!(trace > 0)) throw UndefinedError("PCA input has zero variance");

  auto pairs = TopEigenpairs(std::move(cov), d, std::clamp(components, 1, std::min(2, d)), opt);
  Projection2D p;
  for (auto& [lam, vec] : pairs) {
    p.eigenvalues.push_back(lam);
    p.explained.push_back(std::clamp(lam / trace, 0.0, 1.0));
    p.components.push_back(vec);
  }
  for (size_t r = 0; r < n; ++r) {
    ProjectedPoint pt{tokens[r], 0.0, 0.0};
    for (size_t c = 0; c < p.components.size(); ++c) {
      double s = 0;
      for (int j = 0; j < d; ++j) s += (rows[r][j] - mean[j]) * p.components[c][j];
      (c == 0 ? pt.x : pt.y) = s;
    }
    p.points.push_back(std::move(pt));
  }
  return p;
}

inline Projection2D PcaProject(const EmbeddingModel& model, const std::vector<std::string>& tokens,
                               int components = 2) {
  std::vector<std::vector<double>> rows;
  for (const auto& t : tokens) {
    auto v = model.Vector(t);
    rows.emplace_back(v.begin(), v.end());
  }
  return PcaProjectRows(tokens, rows, components);
}

}  // namespace morphoseed
