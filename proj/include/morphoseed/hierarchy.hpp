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

// Rooted tree over morphemic concepts and the path-overlap similarity
//
//   sim(a, b) = 2 |path(a) ∩ path(b)| / (|path(a)| + |path(b)|)
//
// where path(x) is the inclusive node sequence from the root to x.

#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include "morphoseed/error.hpp"
#include "morphoseed/lexicon.hpp"
#include "morphoseed/text.hpp"

namespace morphoseed {

inline constexpr std::string_view kRootId = "ROOT";
inline constexpr std::string_view kCategoryPrefix = "cat:";

inline bool IsCategoryId(std::string_view id) {
  return id == kRootId || id.substr(0, kCategoryPrefix.size()) == kCategoryPrefix;
}

// The one formula every similarity in this module goes through, so that
// brute-force and pruned computations compare bit-for-bit.
inline double PathOverlapSimilarity(int shared, int len_a, int len_b) {
  return 2.0 * shared / static_cast<double>(len_a + len_b);
}

struct ScoredMc {
  std::string id;
  double score = 0.0;

  friend bool operator==(const ScoredMc&, const ScoredMc&) = default;
};

// MCs whose similarity to `center` is at least `threshold`, center
// included, ordered by score descending then id.
struct NeighborSet {
  std::string center;
  double threshold = 0.0;
  std::vector<ScoredMc> members;

  bool Contains(std::string_view id) const {
    return std::any_of(members.begin(), members.end(),
                       [&](const ScoredMc& m) { return m.id == id; });
  }
};

class McTree {
 public:
  struct Node {
    std::string id;
    int parent = -1;
    int depth = 0;
    bool is_mc = false;
    std::vector<int> children;
  };

  // Builds from (child, parent) edges. The root appears as a child whose
  // parent is "-". Throws ValidationError unless the edges form a tree.
  static McTree FromEdges(const std::vector<std::pair<std::string, std::string>>& edges,
                          const std::vector<SourceLocation>& src = {}) {
    McTree t;
    std::vector<std::string> errs;
    auto where = [&](size_t i) {
      return i < src.size() ? src[i].ToString() : "edge #" + std::to_string(i + 1);
    };
    std::vector<std::string> parent_of;
    for (size_t i = 0; i < edges.size(); ++i) {
      const auto& [child, parent] = edges[i];
      if (child.empty()) {
        errs.push_back(where(i) + ": empty node id");
        continue;
      }
      if (t.index_.count(child)) {
        errs.push_back(where(i) + ": node " + child + " declared more than once");
        continue;
      }
      t.index_.emplace(child, static_cast<int>(t.nodes_.size()));
      Node n;
      n.id = child;
      n.is_mc = !IsCategoryId(child);
      t.nodes_.push_back(std::move(n));
      parent_of.push_back(parent);
    }
    int roots = 0;
    for (size_t i = 0; i < t.nodes_.size(); ++i) {
      const std::string& p = parent_of[i];
      if (p == "-") {
        if (t.nodes_[i].id != kRootId) {
          errs.push_back("node " + t.nodes_[i].id + " has no parent but is not ROOT");
        }
        ++roots;
        t.root_ = static_cast<int>(i);
        continue;
      }
      auto it = t.index_.find(p);
      if (it == t.index_.end()) {
        errs.push_back("node " + t.nodes_[i].id + " has unknown parent " + p);
        continue;
      }
      t.nodes_[i].parent = it->second;
      t.nodes_[it->second].children.push_back(static_cast<int>(i));
    }
    if (roots != 1) {
      errs.push_back("hierarchy must declare exactly one root (found " + std::to_string(roots) + ")");
    }
    if (errs.empty()) {
      // Depths by traversal from the root; anything unreached sits on a cycle.
      std::vector<bool> seen(t.nodes_.size(), false);
      std::vector<int> stack = {t.root_};
      seen[t.root_] = true;
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int c : t.nodes_[u].children) {
          t.nodes_[c].depth = t.nodes_[u].depth + 1;
          seen[c] = true;
          stack.push_back(c);
        }
      }
      for (size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) errs.push_back("node " + t.nodes_[i].id + " is on a cycle or detached from ROOT");
      }
    }
    if (!errs.empty()) throw ValidationError(std::move(errs));
    for (size_t i = 0; i < t.nodes_.size(); ++i) {
      if (t.nodes_[i].is_mc) t.mc_nodes_.push_back(static_cast<int>(i));
    }
    std::sort(t.mc_nodes_.begin(), t.mc_nodes_.end(),
              [&](int a, int b) { return t.nodes_[a].id < t.nodes_[b].id; });
    return t;
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& root() const { return nodes_[root_]; }
  bool Contains(std::string_view id) const { return index_.count(std::string(id)) > 0; }

  const Node& At(std::string_view id) const { return nodes_[IndexOf(id)]; }

  int IndexOf(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) throw UnknownNodeError(std::string(id));
    return it->second;
  }

  // MC node ids in lexicographic order.
  std::vector<std::string> McIds() const {
    std::vector<std::string> out;
    out.reserve(mc_nodes_.size());
    for (int i : mc_nodes_) out.push_back(nodes_[i].id);
    return out;
  }

  int Depth(std::string_view id) const { return At(id).depth; }

  // Root first, `id` last.
  std::vector<std::string> PathToRoot(std::string_view id) const {
    int i = IndexOf(id);
    std::vector<std::string> path;
    for (; i != -1; i = nodes_[i].parent) path.push_back(nodes_[i].id);
    std::reverse(path.begin(), path.end());
    return path;
  }

  // Number of nodes shared by the two root paths: depth(lca) + 1.
  int SharedPathLength(int a, int b) const {
    while (nodes_[a].depth > nodes_[b].depth) a = nodes_[a].parent;
    while (nodes_[b].depth > nodes_[a].depth) b = nodes_[b].parent;
    while (a != b) {
      a = nodes_[a].parent;
      b = nodes_[b].parent;
    }
    return nodes_[a].depth + 1;
  }

  double Similarity(std::string_view a, std::string_view b) const {
    int ia = IndexOf(a), ib = IndexOf(b);
    return PathOverlapSimilarity(SharedPathLength(ia, ib), nodes_[ia].depth + 1,
                                 nodes_[ib].depth + 1);
  }

  // Reference scan over every MC node.
  NeighborSet Neighbors(std::string_view center, double threshold) const {
    int c = IndexOf(center);
    NeighborSet set{std::string(center), threshold, {}};
    for (int m : mc_nodes_) {
      double s = PathOverlapSimilarity(SharedPathLength(c, m), nodes_[c].depth + 1,
                                       nodes_[m].depth + 1);
      if (s >= threshold) set.members.push_back({nodes_[m].id, s});
    }
    SortMembers(set.members);
    return set;
  }

  // Neighbor sets for every MC node. Each center walks up its ancestors
  // and only descends into sibling subtrees while the depth bound can
  // still reach the threshold. Work is split across `workers` threads;
  // the result does not depend on the split.
  std::map<std::string, NeighborSet> AllNeighbors(double threshold, int workers = 1) const {
    std::vector<NeighborSet> sets(mc_nodes_.size());
    auto run = [&](size_t begin, size_t end) {
      for (size_t k = begin; k < end; ++k) sets[k] = LocalNeighbors(mc_nodes_[k], threshold);
    };
    workers = std::max(1, std::min<int>(workers, static_cast<int>(mc_nodes_.size())));
    if (workers == 1) {
      run(0, mc_nodes_.size());
    } else {
      std::vector<std::thread> pool;
      size_t chunk = (mc_nodes_.size() + workers - 1) / workers;
      for (int w = 0; w < workers; ++w) {
        size_t b = w * chunk, e = std::min(mc_nodes_.size(), b + chunk);
        if (b < e) pool.emplace_back(run, b, e);
      }
      for (auto& th : pool) th.join();
    }
    std::map<std::string, NeighborSet> out;
    for (auto& s : sets) {
      std::string key = s.center;
      out.emplace(std::move(key), std::move(s));
    }
    return out;
  }

  // Diagnostics for MC ids missing from the tree, or tree MC nodes that
  // the lexicon does not define. Empty when consistent.
  std::vector<std::string> CheckAgainst(const Lexicon& lex) const {
    std::vector<std::string> errs;
    for (const auto& mc : lex.mcs()) {
      if (!Contains(mc.id)) errs.push_back("MC " + mc.id + " is missing from the hierarchy");
    }
    for (int i : mc_nodes_) {
      if (!lex.IsMc(nodes_[i].id)) {
        errs.push_back("hierarchy node " + nodes_[i].id + " is neither a category nor a known MC");
      }
    }
    return errs;
  }

 private:
  McTree() = default;

  static void SortMembers(std::vector<ScoredMc>& m) {
    std::sort(m.begin(), m.end(), [](const ScoredMc& a, const ScoredMc& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.id < b.id;
    });
  }

  NeighborSet LocalNeighbors(int c, double threshold) const {
    NeighborSet set{nodes_[c].id, threshold, {}};
    const int len_c = nodes_[c].depth + 1;
    int prev = -1;
    for (int anc = c; anc != -1; prev = anc, anc = nodes_[anc].parent) {
      const int shared = nodes_[anc].depth + 1;
      // Every node first reached from this ancestor has a path at least
      // `shared` long, so this bounds the whole remaining search.
      if (PathOverlapSimilarity(shared, len_c, shared) < threshold) break;
      std::vector<int> stack = {anc};
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        double s = PathOverlapSimilarity(shared, len_c, nodes_[u].depth + 1);
        if (s < threshold) continue;  // deeper nodes only score lower
        if (nodes_[u].is_mc) set.members.push_back({nodes_[u].id, s});
        for (int ch : nodes_[u].children) {
          if (ch != prev) stack.push_back(ch);
        }
      }
    }
    SortMembers(set.members);
    return set;
  }

  std::vector<Node> nodes_;
  std::unordered_map<std::string, int> index_;
  std::vector<int> mc_nodes_;
  int root_ = -1;
};

// Reads `child \t parent` rows; the root row is `ROOT \t -`.
inline McTree LoadHierarchy(const std::string& path) {
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<SourceLocation> src;
  std::vector<std::string> errs;
  for (const auto& line : text::ReadDataLines(path)) {
    auto f = text::Split(line.text, '\t');
    if (f.size() != 2) {
      errs.push_back(path + ":" + std::to_string(line.number) + ": expected child<TAB>parent");
      continue;
    }
    edges.emplace_back(std::string(text::Trim(f[0])), std::string(text::Trim(f[1])));
    src.push_back({path, line.number});
  }
  if (!errs.empty()) throw ValidationError(std::move(errs));
  return McTree::FromEdges(edges, src);
}

}  // namespace morphoseed
