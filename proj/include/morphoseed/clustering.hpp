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

// Advisory synonym-set clustering of sense definitions. Each gloss is
// reduced to the multiset of its code-point unigrams and bigrams; pairs
// are compared with the Dice coefficient and linked greedily.

#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "morphoseed/text.hpp"

namespace morphoseed {

struct GlossEntry {
  std::string encoding;
  std::string gloss;
};

using TokenBag = std::map<std::string, int>;

inline TokenBag GlossTokens(const std::string& gloss) {
  TokenBag bag;
  auto cps = text::CodePoints(gloss);
  for (size_t i = 0; i < cps.size(); ++i) {
    ++bag[cps[i]];
    if (i + 1 < cps.size()) ++bag[cps[i] + cps[i + 1]];
  }
  return bag;
}

// 2|A ∩ B| / (|A| + |B|) over multisets; 0 when both are empty.
inline double DiceCoefficient(const TokenBag& a, const TokenBag& b) {
  long total = 0, shared = 0;
  for (const auto& [t, n] : a) total += n;
  for (const auto& [t, n] : b) total += n;
  if (total == 0) return 0.0;
  for (const auto& [t, n] : a) {
    auto it = b.find(t);
    if (it != b.end()) shared += std::min(n, it->second);
  }
  return 2.0 * static_cast<double>(shared) / static_cast<double>(total);
}

// Single-link clusters at Dice >= min_overlap. Output is a partition of
// the input encodings: each cluster sorted, clusters ordered by their
// first member. Independent of input order.
inline std::vector<std::vector<std::string>> SuggestSmsClusters(std::vector<GlossEntry> entries,
                                                                double min_overlap) {
  std::sort(entries.begin(), entries.end(),
            [](const GlossEntry& a, const GlossEntry& b) {
              return std::tie(a.encoding, a.gloss) < std::tie(b.encoding, b.gloss);
            });
  const size_t n = entries.size();
  std::vector<TokenBag> bags;
  bags.reserve(n);
  for (const auto& e : entries) bags.push_back(GlossTokens(e.gloss));

  struct Link {
    double sim;
    size_t a, b;
  };
  std::vector<Link> links;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      double d = DiceCoefficient(bags[i], bags[j]);
      if (d >= min_overlap) links.push_back({d, i, j});
    }
  }
  // Descending similarity; indices follow the sorted encodings, so ties
  // resolve lexicographically.
  std::stable_sort(links.begin(), links.end(), [](const Link& x, const Link& y) {
    if (x.sim != y.sim) return x.sim > y.sim;
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });

  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& l : links) {
    size_t ra = find(l.a), rb = find(l.b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }

  std::map<size_t, std::vector<std::string>> groups;
  for (size_t i = 0; i < n; ++i) groups[find(i)].push_back(entries[i].encoding);
  std::vector<std::vector<std::string>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

}  // namespace morphoseed
