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

// Pseudo-sentence generation. Every word entry instantiates the fixed
// eight-slot template
//
//   B  B-<1st MC POS>  <word POS>  <1st MC>  <2nd MC>  <pattern>  E-<2nd MC POS>  E
//
// and is then proliferated over the cross product of the neighbor sets
// of its two MCs.

#pragma once

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "morphoseed/error.hpp"
#include "morphoseed/hierarchy.hpp"
#include "morphoseed/lexicon.hpp"

namespace morphoseed {

inline constexpr int kSentenceLength = 8;

// Slot positions within a pseudo-sentence.
enum Slot : int {
  kSlotBegin = 0,
  kSlotBeginPos = 1,
  kSlotWordPos = 2,
  kSlotFirstMc = 3,
  kSlotSecondMc = 4,
  kSlotPattern = 5,
  kSlotEndPos = 6,
  kSlotEnd = 7,
};

struct PseudoSentence {
  std::array<std::string, kSentenceLength> tokens;

  std::string ToLine() const {
    std::string out;
    for (int i = 0; i < kSentenceLength; ++i) {
      if (i) out += ' ';
      out += tokens[i];
    }
    return out;
  }

  friend bool operator==(const PseudoSentence&, const PseudoSentence&) = default;
  friend auto operator<=>(const PseudoSentence&, const PseudoSentence&) = default;
};

inline PseudoSentence Instantiate(const Lexicon& lex, const WordEntry& w) {
  PseudoSentence s;
  s.tokens[kSlotBegin] = "B";
  s.tokens[kSlotBeginPos] = std::string("B-") + MorphemePosToken(lex.Mc(w.first_mc).pos);
  s.tokens[kSlotWordPos] = WordPosToken(w.pos);
  s.tokens[kSlotFirstMc] = w.first_mc;
  s.tokens[kSlotSecondMc] = w.second_mc;
  s.tokens[kSlotPattern] = ToString(w.pattern);
  s.tokens[kSlotEndPos] = std::string("E-") + MorphemePosToken(lex.Mc(w.second_mc).pos);
  s.tokens[kSlotEnd] = "E";
  return s;
}

// Emits |first| * |second| sentences in row-major order over the two
// neighbor sets. All slots other than the two MC slots come from `seed`.
template <typename Emit>
void Proliferate(const PseudoSentence& seed, const NeighborSet& first, const NeighborSet& second,
                 Emit&& emit) {
  PseudoSentence s = seed;
  for (const auto& a : first.members) {
    s.tokens[kSlotFirstMc] = a.id;
    for (const auto& b : second.members) {
      s.tokens[kSlotSecondMc] = b.id;
      emit(static_cast<const PseudoSentence&>(s));
    }
  }
}

inline std::vector<PseudoSentence> Proliferate(const PseudoSentence& seed, const NeighborSet& first,
                                               const NeighborSet& second) {
  std::vector<PseudoSentence> out;
  out.reserve(first.members.size() * second.members.size());
  Proliferate(seed, first, second, [&](const PseudoSentence& s) { out.push_back(s); });
  return out;
}

class SentenceSink {
 public:
  virtual ~SentenceSink() = default;
  virtual void Write(const PseudoSentence& s) = 0;
  virtual void Flush() {}
};

class VectorSink : public SentenceSink {
 public:
  void Write(const PseudoSentence& s) override { sentences.push_back(s); }
  std::vector<PseudoSentence> sentences;
};

// Writes `<prefix>-NNNNN.txt` files in `dir`, starting a new file every
// `lines_per_shard` sentences.
class ShardedFileSink : public SentenceSink {
 public:
  ShardedFileSink(std::filesystem::path dir, std::string prefix, size_t lines_per_shard)
      : dir_(std::move(dir)), prefix_(std::move(prefix)),
        lines_per_shard_(lines_per_shard == 0 ? 1 : lines_per_shard) {}

  ~ShardedFileSink() override {
    if (out_.is_open()) out_.close();
  }

  void Write(const PseudoSentence& s) override {
    if (!out_.is_open() || lines_in_shard_ == lines_per_shard_) OpenNext();
    out_ << s.ToLine() << '\n';
    if (!out_) Fail();
    ++lines_in_shard_;
  }

  void Flush() override {
    if (out_.is_open()) {
      out_.flush();
      if (!out_) Fail();
    }
  }

  const std::vector<std::filesystem::path>& shards() const { return shards_; }

 private:
  void OpenNext() {
    if (out_.is_open()) {
      out_.close();
      if (!out_) Fail();
    }
    char name[32];
    std::snprintf(name, sizeof name, "-%05zu.txt", shards_.size());
    shards_.push_back(dir_ / (prefix_ + name));
    out_.open(shards_.back(), std::ios::binary | std::ios::trunc);
    if (!out_) Fail();
    lines_in_shard_ = 0;
  }

  [[noreturn]] void Fail() {
    throw IoError("write failed on " + (shards_.empty() ? dir_.string() : shards_.back().string()) +
                  "; corpus output in " + dir_.string() + " is partial");
  }

  std::filesystem::path dir_;
  std::string prefix_;
  size_t lines_per_shard_;
  std::vector<std::filesystem::path> shards_;
  std::ofstream out_;
  size_t lines_in_shard_ = 0;
};

struct GenerateOptions {
  double threshold = 0.85;
  int workers = 1;
  bool dedup = false;
  size_t lines_per_shard = 1'000'000;
};

struct GenerationReport {
  size_t seed_words = 0;
  size_t sentences_emitted = 0;
  double threshold = 0.0;
  bool dedup = false;
  int workers = 1;
  // Parallel to Lexicon::words().
  std::vector<size_t> per_seed;

  // proliferation count -> number of seeds with that count
  std::map<size_t, size_t> Histogram() const {
    std::map<size_t, size_t> h;
    for (size_t n : per_seed) ++h[n];
    return h;
  }

  nlohmann::json ToJson(const Lexicon& lex) const {
    nlohmann::json j;
    j["threshold"] = threshold;
    j["seed_words"] = seed_words;
    j["sentences_emitted"] = sentences_emitted;
    j["dedup"] = dedup;
    j["workers"] = workers;
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [n, seeds] : Histogram()) hist[std::to_string(n)] = seeds;
    j["histogram"] = hist;
    nlohmann::json seeds = nlohmann::json::array();
    for (size_t i = 0; i < per_seed.size(); ++i) {
      seeds.push_back({{"word", lex.words()[i].surface}, {"count", per_seed[i]}});
    }
    j["per_seed"] = seeds;
    return j;
  }
};

// Seeds are split into contiguous blocks, one per sink; each block runs
// on its own thread. With a single sink the output follows lexicon order.
// `opts.workers` is ignored here: the number of sinks decides.
inline GenerationReport GenerateCorpus(const Lexicon& lex, const McTree& tree,
                                       const GenerateOptions& opts,
                                       const std::vector<SentenceSink*>& sinks) {
  const auto& words = lex.words();
  if (sinks.empty()) throw Error("GenerateCorpus needs at least one sink");
  const int workers = static_cast<int>(sinks.size());
  const auto neighbors = tree.AllNeighbors(opts.threshold, workers);
  auto lookup = [&](const std::string& id) -> const NeighborSet& {
    auto it = neighbors.find(id);
    if (it == neighbors.end()) throw UnknownNodeError(id);
    return it->second;
  };

  GenerationReport report;
  report.seed_words = words.size();
  report.threshold = opts.threshold;
  report.dedup = opts.dedup;
  report.workers = workers;
  report.per_seed.assign(words.size(), 0);

  std::mutex seen_mu;
  std::unordered_set<std::string> seen;

  auto run = [&](int w, size_t begin, size_t end) {
    SentenceSink& sink = *sinks[w];
    for (size_t i = begin; i < end; ++i) {
      const auto seed = Instantiate(lex, words[i]);
      size_t count = 0;
      Proliferate(seed, lookup(words[i].first_mc), lookup(words[i].second_mc),
                  [&](const PseudoSentence& s) {
                    if (opts.dedup) {
                      std::lock_guard<std::mutex> lock(seen_mu);
                      if (!seen.insert(s.ToLine()).second) return;
                    }
                    sink.Write(s);
                    ++count;
                  });
      report.per_seed[i] = count;
    }
    sink.Flush();
  };

  if (workers == 1) {
    run(0, 0, words.size());
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(workers);
    size_t chunk = (words.size() + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      size_t b = std::min(words.size(), w * chunk), e = std::min(words.size(), b + chunk);
      pool.emplace_back([&, w, b, e] {
        try {
          run(w, b, e);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }

  for (size_t n : report.per_seed) report.sentences_emitted += n;
  return report;
}

inline GenerationReport GenerateCorpus(const Lexicon& lex, const McTree& tree,
                                       const GenerateOptions& opts, SentenceSink& sink) {
  return GenerateCorpus(lex, tree, opts, std::vector<SentenceSink*>{&sink});
}

// Writes shards `part-WWW-NNNNN.txt` and `report.json` into `dir`,
// replacing shards left by an earlier run.
inline GenerationReport GenerateCorpusToDir(const Lexicon& lex, const McTree& tree,
                                            const GenerateOptions& opts,
                                            const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    auto name = entry.path().filename().string();
    if (name.rfind("part-", 0) == 0 && entry.path().extension() == ".txt") {
      std::filesystem::remove(entry.path());
    }
  }
  std::vector<std::unique_ptr<ShardedFileSink>> owned;
  std::vector<SentenceSink*> sinks;
  for (int w = 0; w < std::max(1, opts.workers); ++w) {
    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "part-%03d", w);
    owned.push_back(std::make_unique<ShardedFileSink>(dir, prefix, opts.lines_per_shard));
    sinks.push_back(owned.back().get());
  }
  auto report = GenerateCorpus(lex, tree, opts, sinks);
  std::ofstream out(dir / "report.json");
  out << report.ToJson(lex).dump(2) << '\n';
  if (!out) throw IoError("cannot write " + (dir / "report.json").string());
  return report;
}

}  // namespace morphoseed
