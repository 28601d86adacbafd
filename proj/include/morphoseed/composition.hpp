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

// Word vectors composed from MC embeddings, weighted by word-formation
// pattern: v = w1 * c(first MC) + w2 * c(second MC).

#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "morphoseed/embedding.hpp"
#include "morphoseed/error.hpp"
#include "morphoseed/lexicon.hpp"
#include "morphoseed/text.hpp"

namespace morphoseed {

struct SlotWeights {
  double first = 0.5;
  double second = 0.5;
};

class WeightTable {
 public:
  // Throws unless both weights are non-negative and sum to 1 within 1e-9.
  // Clears any fallback mark on `p`.
  void Set(Pattern p, SlotWeights w) {
    if (!(w.first >= 0 && w.second >= 0) || std::abs(w.first + w.second - 1.0) > 1e-9) {
      throw Error(std::string("weights for ") + ToString(p) + " must be non-negative and sum to 1");
    }
    weights_[p] = w;
    fallback_.erase(p);
  }

  std::optional<SlotWeights> Find(Pattern p) const {
    auto it = weights_.find(p);
    if (it == weights_.end()) return std::nullopt;
    return it->second;
  }

  SlotWeights At(Pattern p) const {
    auto w = Find(p);
    if (!w) throw Error(std::string("no weights for pattern ") + ToString(p));
    return *w;
  }

  // Patterns filled with the uninformative (0.5, 0.5) split rather than a
  // measured assignment.
  bool IsFallback(Pattern p) const { return fallback_.count(p) > 0; }
  void MarkFallback(Pattern p) { fallback_.insert(p); }

  const std::map<Pattern, SlotWeights>& entries() const { return weights_; }

 private:
  std::map<Pattern, SlotWeights> weights_;
  std::set<Pattern> fallback_;
};

// Nine patterns carry published weights; the remaining six get (0.5, 0.5)
// and are flagged as fallbacks.
inline WeightTable DefaultWeightTable() {
  WeightTable t;
  t.Set(Pattern::kSuffixation, {1.0, 0.0});
  t.Set(Pattern::kVerbComplement, {0.8, 0.2});
  t.Set(Pattern::kVerbObject, {0.6, 0.4});
  t.Set(Pattern::kParallel, {0.5, 0.5});
  t.Set(Pattern::kNoncompound, {0.5, 0.5});
  t.Set(Pattern::kModifierHead, {0.45, 0.55});
  t.Set(Pattern::kAdverbVerb, {0.45, 0.55});
  t.Set(Pattern::kSubjectPredicate, {0.4, 0.6});
  t.Set(Pattern::kPrefixation, {0.0, 1.0});
  for (Pattern p : AllPatterns()) {
    if (!t.Find(p)) {
      t.Set(p, {0.5, 0.5});
      t.MarkFallback(p);
    }
  }
  return t;
}

// `pattern \t w1 \t w2` rows override the defaults.
inline WeightTable LoadWeightTable(const std::string& path) {
  WeightTable t = DefaultWeightTable();
  std::vector<std::string> errs;
  for (const auto& line : text::ReadDataLines(path)) {
    const std::string where = path + ":" + std::to_string(line.number);
    auto f = text::Split(line.text, '\t');
    if (f.size() != 3) {
      errs.push_back(where + ": expected pattern<TAB>w1<TAB>w2");
      continue;
    }
    auto p = ParsePattern(text::Trim(f[0]));
    auto w1 = text::ParseDouble(f[1]);
    auto w2 = text::ParseDouble(f[2]);
    if (!p || !w1 || !w2) {
      errs.push_back(where + ": malformed row");
      continue;
    }
    try {
      t.Set(*p, {*w1, *w2});
    } catch (const Error& e) {
      errs.push_back(where + ": " + e.what());
    }
  }
  if (!errs.empty()) throw ValidationError(std::move(errs));
  return t;
}

struct ComposedVector {
  std::string surface;
  std::vector<double> vector;
  std::string first_mc;
  std::string second_mc;
  Pattern pattern = Pattern::kModifierHead;
  SlotWeights weights;
};

// Throws OovError when either MC is missing from the model.
inline ComposedVector ComposeWordVector(const WordEntry& w, const EmbeddingModel& model,
                                        const WeightTable& weights) {
  const SlotWeights sw = weights.At(w.pattern);
  auto c1 = model.Vector(w.first_mc);
  auto c2 = model.Vector(w.second_mc);
  ComposedVector out{w.surface, std::vector<double>(c1.size()), w.first_mc, w.second_mc,
                     w.pattern, sw};
  // A zero-weighted slot is left out entirely, so single-slot patterns
  // copy bitwise (signed zeros kept, no 0 * inf).
  for (size_t d = 0; d < c1.size(); ++d) {
    if (sw.second == 0.0) {
      out.vector[d] = sw.first * c1[d];
    } else if (sw.first == 0.0) {
      out.vector[d] = sw.second * c2[d];
    } else {
      out.vector[d] = sw.first * c1[d] + sw.second * c2[d];
    }
  }
  return out;
}

struct CompositionResult {
  std::map<std::string, ComposedVector> vectors;
  std::vector<std::string> uncovered;
  std::set<Pattern> fallback_patterns_used;
  size_t total = 0;

  double Coverage() const {
    return total == 0 ? 0.0 : static_cast<double>(vectors.size()) / static_cast<double>(total);
  }
};

// One vector per coverable word. A surface that occurs more than once in
// the lexicon keeps its first entry.
inline CompositionResult ComposeAll(const Lexicon& lex, const EmbeddingModel& model,
                                    const WeightTable& weights) {
  CompositionResult r;
  std::set<std::string> seen;
  for (const auto& w : lex.words()) {
    if (!seen.insert(w.surface).second) continue;
    ++r.total;
    if (!model.Contains(w.first_mc) || !model.Contains(w.second_mc)) {
      r.uncovered.push_back(w.surface);
      continue;
    }
    if (weights.IsFallback(w.pattern)) r.fallback_patterns_used.insert(w.pattern);
    r.vectors.emplace(w.surface, ComposeWordVector(w, model, weights));
  }
  return r;
}

}  // namespace morphoseed
