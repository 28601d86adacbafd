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

#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <unistd.h>
#include <utility>
#include <vector>

#include "morphoseed/hierarchy.hpp"
#include "morphoseed/lexicon.hpp"

#ifndef MORPHOSEED_FIXTURE_DIR
#error "MORPHOSEED_FIXTURE_DIR must be defined"
#endif

namespace morphoseed::testing {

inline std::filesystem::path FixtureDir() { return MORPHOSEED_FIXTURE_DIR; }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("morphoseed-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void WriteText(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

inline std::string ReadText(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline Morpheme M(const std::string& enc, PosTag pos, std::string def = "gloss") {
  return {ParseEncoding(enc), std::move(def), pos};
}

inline MorphemicConcept Mc(const std::vector<std::string>& members, PosTag pos) {
  MorphemicConcept mc;
  for (const auto& m : members) mc.members.push_back(ParseEncoding(m));
  mc.id = mc.members.front().Render();
  mc.pos = pos;
  return mc;
}

// Two verbal and two nominal MCs with the planting word and friends:
//   养1_11_02 = {养1_11_02, 植1_04_01}   浇1_04_03 = {浇1_04_03}
//   木1_07_01 = {木1_07_01, 树1_04_01}   草1_02_01 = {草1_02_01}
inline Lexicon SmallLexicon() {
  std::vector<Morpheme> ms = {
      M("养1_11_02", PosTag::kVerbal), M("植1_04_01", PosTag::kVerbal),
      M("浇1_04_03", PosTag::kVerbal), M("木1_07_01", PosTag::kNominal),
      M("树1_04_01", PosTag::kNominal), M("草1_02_01", PosTag::kNominal),
  };
  std::vector<MorphemicConcept> mcs = {
      Mc({"养1_11_02", "植1_04_01"}, PosTag::kVerbal),
      Mc({"浇1_04_03"}, PosTag::kVerbal),
      Mc({"木1_07_01", "树1_04_01"}, PosTag::kNominal),
      Mc({"草1_02_01"}, PosTag::kNominal),
  };
  std::vector<WordEntry> ws = {
      {"植树", PosTag::kVerbal, Pattern::kVerbObject, "养1_11_02", "木1_07_01"},
      {"浇草", PosTag::kVerbal, Pattern::kVerbObject, "浇1_04_03", "草1_02_01"},
      {"草木", PosTag::kNominal, Pattern::kParallel, "草1_02_01", "木1_07_01"},
  };
  return Lexicon::Create(std::move(ms), std::move(mcs), std::move(ws));
}

// ROOT -> cat:v -> {养1_11_02, 浇1_04_03}; ROOT -> cat:n -> {木1_07_01, 草1_02_01}
inline McTree SmallTree() {
  return McTree::FromEdges({{"ROOT", "-"},
                            {"cat:v", "ROOT"},
                            {"cat:n", "ROOT"},
                            {"养1_11_02", "cat:v"},
                            {"浇1_04_03", "cat:v"},
                            {"木1_07_01", "cat:n"},
                            {"草1_02_01", "cat:n"}});
}

// Random tree with `n` nodes: node 0 is ROOT, node i > 0 hangs under a
// uniformly chosen earlier node. Ids "n<i>"; roughly a third are
// category nodes.
inline std::vector<std::pair<std::string, std::string>> RandomTreeEdges(int n, std::mt19937_64& rng) {
  std::vector<std::string> ids = {"ROOT"};
  std::vector<std::pair<std::string, std::string>> edges = {{"ROOT", "-"}};
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    std::string id = (rng() % 3 == 0 ? "cat:n" : "n") + std::to_string(i);
    edges.emplace_back(id, ids[pick(rng)]);
    ids.push_back(id);
  }
  return edges;
}

}  // namespace morphoseed::testing
