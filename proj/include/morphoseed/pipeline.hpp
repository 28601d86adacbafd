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

// End-to-end driver: validate -> generate -> train -> compose -> eval.
//
// Each stage owns a subdirectory of the output directory holding its
// artifacts, a copy of the config and a `stamp` with the content hash of
// everything the stage read. A stage whose stamp matches is skipped.
// Downstream stages always read their inputs back from disk, so a resumed
// run and a fresh run see the same bytes.

#pragma once

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "morphoseed/composition.hpp"
#include "morphoseed/embedding.hpp"
#include "morphoseed/error.hpp"
#include "morphoseed/evaluation.hpp"
#include "morphoseed/generator.hpp"
#include "morphoseed/hierarchy.hpp"
#include "morphoseed/lexicon.hpp"
#include "morphoseed/text.hpp"

namespace morphoseed {

// Exit status conventions shared by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

// A failure inside a named stage. Bad or missing inputs map to
// kExitValidation, everything else to kExitRuntime.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message, int exit_code,
             std::vector<std::string> diagnostics = {})
      : Error("[" + stage + "] " + message),
        stage_(std::move(stage)),
        exit_code_(exit_code),
        diagnostics_(std::move(diagnostics)) {}

  const std::string& stage() const { return stage_; }
  int exit_code() const { return exit_code_; }
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::string stage_;
  int exit_code_;
  std::vector<std::string> diagnostics_;
};

struct PipelineConfig {
  std::string lexicon;
  std::string hierarchy;  // empty: <lexicon>/hierarchy.tsv
  double threshold = 0.85;
  bool dedup = false;
  int workers = 1;
  TrainConfig train;
  std::string weights;  // empty: built-in table
  std::vector<std::string> pairs;
  std::string external_model;
  std::string external_corpus;
  TrainConfig external = DefaultExternal();
  double alpha = 0.35;
  std::string grid = "0:1:0.05";
  bool zscore = false;
  std::string out;

  // Corpus baseline settings: skip-gram, 50 dimensions, window 5 sampled
  // per position as usual for natural text.
  static TrainConfig DefaultExternal() {
    TrainConfig c;
    c.model = ModelKind::kSkipGram;
    c.dim = 50;
    c.window = 5;
    c.sampled_window = true;
    c.min_count = 5;
    return c;
  }

  std::string HierarchyPath() const {
    if (!hierarchy.empty()) return hierarchy;
    return (std::filesystem::path(lexicon) / "hierarchy.tsv").string();
  }

  // The single root seed. Every random stream is derived from it.
  std::uint64_t seed() const { return train.seed; }

  // Assigns one `key = value` setting; throws ParseError on unknown keys
  // or malformed values.
  void Set(std::string_view key, std::string_view value);

  // Canonical text form, one `key = value` per line in a fixed order.
  std::string ToText() const;
};

namespace detail {

inline bool ParseBool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError("expected a boolean, got '" + std::string(v) + "'");
}

inline int ParseIntValue(std::string_view key, std::string_view v) {
  auto x = text::ParseInt(v);
  if (!x) throw ParseError(std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
  return static_cast<int>(*x);
}

inline double ParseDoubleValue(std::string_view key, std::string_view v) {
  auto x = text::ParseDouble(v);
  if (!x || !std::isfinite(*x)) {
    throw ParseError(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
  }
  return *x;
}

inline std::uint64_t ParseSeed(std::string_view v) {
  std::uint64_t x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ParseError("seed: expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return x;
}

// Shortest text that reads back to the same double.
inline std::string FormatDouble(double x) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

inline std::string Hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void WriteFile(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << data;
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

// Hash of a file's bytes, or of every corpus file under a directory with
// its name.
inline std::uint64_t HashPath(const std::filesystem::path& path) {
  std::uint64_t h = text::Fnv1a(path.filename().string());
  for (const auto& f : CorpusFiles(path)) {
    h = text::Fnv1a(f.filename().string(), h);
    h = text::Fnv1a(ReadFile(f), h);
  }
  return h;
}

}  // namespace detail

inline void PipelineConfig::Set(std::string_view key, std::string_view raw) {
  const std::string value(text::Trim(raw));
  if (key == "lexicon") {
    lexicon = value;
  } else if (key == "hierarchy") {
    hierarchy = value;
  } else if (key == "threshold") {
    threshold = detail::ParseDoubleValue(key, value);
  } else if (key == "dedup") {
    dedup = detail::ParseBool(value);
  } else if (key == "workers") {
    workers = detail::ParseIntValue(key, value);
  } else if (key == "dim") {
    train.dim = detail::ParseIntValue(key, value);
  } else if (key == "window") {
    train.window = detail::ParseIntValue(key, value);
  } else if (key == "model") {
    auto k = ParseModelKind(value);
    if (!k) throw ParseError("model: expected cbow or skipgram, got '" + value + "'");
    train.model = *k;
  } else if (key == "negatives") {
    train.negatives = detail::ParseIntValue(key, value);
  } else if (key == "epochs") {
    train.epochs = detail::ParseIntValue(key, value);
  } else if (key == "lr") {
    train.initial_lr = detail::ParseDoubleValue(key, value);
  } else if (key == "min_count") {
    train.min_count = detail::ParseIntValue(key, value);
  } else if (key == "seed") {
    train.seed = detail::ParseSeed(value);
  } else if (key == "deterministic") {
    train.deterministic = detail::ParseBool(value);
  } else if (key == "train_workers") {
    train.workers = detail::ParseIntValue(key, value);
  } else if (key == "weights") {
    weights = value;
  } else if (key == "pairs") {
    pairs.clear();
    for (auto& p : text::Split(value, ',')) {
      auto t = text::Trim(p);
      if (!t.empty()) pairs.emplace_back(t);
    }
  } else if (key == "external_model") {
    external_model = value;
  } else if (key == "external_corpus") {
    external_corpus = value;
  } else if (key == "external_dim") {
    external.dim = detail::ParseIntValue(key, value);
  } else if (key == "external_window") {
    external.window = detail::ParseIntValue(key, value);
  } else if (key == "external_epochs") {
    external.epochs = detail::ParseIntValue(key, value);
  } else if (key == "external_min_count") {
    external.min_count = detail::ParseIntValue(key, value);
  } else if (key == "external_kind") {
    auto k = ParseModelKind(value);
    if (!k) throw ParseError("external_kind: expected cbow or skipgram, got '" + value + "'");
    external.model = *k;
  } else if (key == "alpha") {
    alpha = detail::ParseDoubleValue(key, value);
  } else if (key == "grid") {
    grid = value;
  } else if (key == "zscore") {
    zscore = detail::ParseBool(value);
  } else if (key == "out") {
    out = value;
  } else {
    throw ParseError("unknown config key '" + std::string(key) + "'");
  }
}

inline std::string PipelineConfig::ToText() const {
  std::ostringstream o;
  auto b = [](bool x) { return x ? "true" : "false"; };
  std::string joined;
  for (size_t i = 0; i < pairs.size(); ++i) joined += (i ? "," : "") + pairs[i];
  o << "lexicon = " << lexicon << '\n'
    << "hierarchy = " << HierarchyPath() << '\n'
    << "threshold = " << detail::FormatDouble(threshold) << '\n'
    << "dedup = " << b(dedup) << '\n'
    << "workers = " << workers << '\n'
    << "model = " << ToString(train.model) << '\n'
    << "dim = " << train.dim << '\n'
    << "window = " << train.window << '\n'
    << "negatives = " << train.negatives << '\n'
    << "epochs = " << train.epochs << '\n'
    << "lr = " << detail::FormatDouble(train.initial_lr) << '\n'
    << "min_count = " << train.min_count << '\n'
    << "seed = " << train.seed << '\n'
    << "deterministic = " << b(train.deterministic) << '\n'
    << "train_workers = " << train.workers << '\n'
    << "weights = " << weights << '\n'
    << "pairs = " << joined << '\n'
    << "external_model = " << external_model << '\n'
    << "external_corpus = " << external_corpus << '\n'
    << "external_kind = " << ToString(external.model) << '\n'
    << "external_dim = " << external.dim << '\n'
    << "external_window = " << external.window << '\n'
    << "external_epochs = " << external.epochs << '\n'
    << "external_min_count = " << external.min_count << '\n'
    << "alpha = " << detail::FormatDouble(alpha) << '\n'
    << "grid = " << grid << '\n'
    << "zscore = " << b(zscore) << '\n'
    << "out = " << out << '\n';
  return o.str();
}

// Reads `key = value` lines (`#` comments, blank lines ignored) on top of
// `base`. Relative paths are taken relative to the config file.
inline PipelineConfig LoadPipelineConfig(const std::filesystem::path& path,
                                         PipelineConfig base = {}) {
  namespace fs = std::filesystem;
  const fs::path dir = path.parent_path();
  auto resolve = [&](const std::string& v) {
    if (v.empty() || fs::path(v).is_absolute()) return v;
    return (dir / v).lexically_normal().string();
  };
  std::vector<std::string> errs;
  for (const auto& line : text::ReadDataLines(path.string())) {
    const std::string where = path.string() + ":" + std::to_string(line.number);
    auto eq = line.text.find('=');
    if (eq == std::string::npos) {
      errs.push_back(where + ": expected key = value");
      continue;
    }
    const std::string key(text::Trim(std::string_view(line.text).substr(0, eq)));
    std::string value(text::Trim(std::string_view(line.text).substr(eq + 1)));
    if (key == "lexicon" || key == "hierarchy" || key == "weights" || key == "external_model" ||
        key == "external_corpus" || key == "out") {
      value = resolve(value);
    } else if (key == "pairs") {
      std::string joined;
      for (auto& p : text::Split(value, ',')) {
        auto t = std::string(text::Trim(p));
        if (t.empty()) continue;
        joined += (joined.empty() ? "" : ",") + resolve(t);
      }
      value = joined;
    }
    try {
      base.Set(key, value);
    } catch (const ParseError& e) {
      errs.push_back(where + ": " + e.what());
    }
  }
  if (!errs.empty()) throw ValidationError(std::move(errs));
  return base;
}

struct PipelineOptions {
  bool force = false;
  std::ostream* log = &std::cerr;
};

struct PipelineResult {
  nlohmann::json summary;
  std::vector<std::string> executed;
  std::vector<std::string> skipped;
};

class Pipeline {
 public:
  Pipeline(PipelineConfig cfg, PipelineOptions opts) : cfg_(std::move(cfg)), opts_(opts) {}

  PipelineResult Run() {
    namespace fs = std::filesystem;
    if (cfg_.out.empty()) throw StageError("validate", "no output directory configured", kExitValidation);
    root_ = cfg_.out;
    Stage("validate", [&] { Validate(); });
    Stage("generate", [&] { Generate(); });
    Stage("train", [&] { TrainStage(); });
    Stage("compose", [&] { Compose(); });
    if (!cfg_.external_corpus.empty()) Stage("external", [&] { External(); });
    Stage("eval", [&] { Eval(); });
    Stage("summary", [&] { Summarize(); });
    return std::move(result_);
  }

  static std::filesystem::path ModelPath(const std::filesystem::path& out) {
    return out / "train" / "model.vec";
  }
  static std::filesystem::path WordVectorsPath(const std::filesystem::path& out) {
    return out / "compose" / "words.vec";
  }
  static std::filesystem::path EvalReportPath(const std::filesystem::path& out) {
    return out / "eval" / "eval.json";
  }
  static std::filesystem::path SummaryPath(const std::filesystem::path& out) {
    return out / "summary.json";
  }

 private:
  template <typename F>
  void Stage(const std::string& name, F&& body) {
    try {
      body();
    } catch (const StageError&) {
      throw;
    } catch (const ValidationError& e) {
      throw StageError(name, e.what(), kExitValidation, e.diagnostics());
    } catch (const ParseError& e) {
      throw StageError(name, e.what(), kExitValidation);
    } catch (const std::exception& e) {
      throw StageError(name, e.what(), kExitRuntime);
    }
  }

  void Log(const std::string& msg) {
    if (opts_.log != nullptr) *opts_.log << msg << '\n';
  }

  std::filesystem::path Dir(const std::string& stage) {
    auto d = root_ / stage;
    std::filesystem::create_directories(d);
    return d;
  }

  // True when `stage` may be skipped: same input hash and all outputs on
  // disk.
  bool UpToDate(const std::string& stage, std::uint64_t key,
                const std::vector<std::filesystem::path>& outputs) {
    if (opts_.force) return false;
    auto stamp = root_ / stage / "stamp";
    if (!std::filesystem::exists(stamp)) return false;
    if (text::Trim(detail::ReadFile(stamp)) != detail::Hex(key)) return false;
    for (const auto& o : outputs) {
      if (!std::filesystem::exists(o)) return false;
    }
    return true;
  }

  void Begin(const std::string& stage) {
    auto d = Dir(stage);
    std::filesystem::remove(d / "stamp");
    detail::WriteFile(d / "pipeline.conf", config_text_);
  }

  void Finish(const std::string& stage, std::uint64_t key) {
    detail::WriteFile(root_ / stage / "stamp", detail::Hex(key) + "\n");
    result_.executed.push_back(stage);
    Log("[" + stage + "] done");
  }

  void Skip(const std::string& stage) {
    result_.skipped.push_back(stage);
    Log("[" + stage + "] up to date, skipped");
  }

  void RequireFile(const std::string& what, const std::string& path, std::vector<std::string>& errs) {
    if (path.empty()) return;
    if (!std::filesystem::exists(path)) errs.push_back(what + " not found: " + path);
  }

  // Every referenced input is checked here, before any artifact is built.
  void Validate() {
    namespace fs = std::filesystem;
    config_text_ = cfg_.ToText();
    std::vector<std::string> errs;
    if (cfg_.lexicon.empty()) errs.push_back("no lexicon directory configured");
    for (const char* f : {"morphemes.tsv", "mcs.tsv", "words.tsv"}) {
      if (!cfg_.lexicon.empty()) RequireFile("lexicon file", (fs::path(cfg_.lexicon) / f).string(), errs);
    }
    RequireFile("hierarchy file", cfg_.HierarchyPath(), errs);
    RequireFile("weight table", cfg_.weights, errs);
    for (const auto& p : cfg_.pairs) RequireFile("dataset", p, errs);
    RequireFile("external model", cfg_.external_model, errs);
    RequireFile("external corpus", cfg_.external_corpus, errs);
    if (!cfg_.external_model.empty() && !cfg_.external_corpus.empty()) {
      errs.push_back("set at most one of external_model and external_corpus");
    }
    if (!(cfg_.threshold >= 0.0 && cfg_.threshold <= 1.0)) errs.push_back("threshold must lie in [0, 1]");
    if (!(cfg_.alpha >= 0.0 && cfg_.alpha <= 1.0)) errs.push_back("alpha must lie in [0, 1]");
    if (cfg_.workers < 1) errs.push_back("workers must be >= 1");
    if (!errs.empty()) throw ValidationError(std::move(errs));

    lexicon_ = LoadLexiconDir(cfg_.lexicon);
    tree_ = LoadHierarchy(cfg_.HierarchyPath());
    if (auto e = tree_->CheckAgainst(*lexicon_); !e.empty()) throw ValidationError(std::move(e));
    weights_ = cfg_.weights.empty() ? DefaultWeightTable() : LoadWeightTable(cfg_.weights);
    for (const auto& p : cfg_.pairs) datasets_.push_back(LoadDataset(p));
    grid_ = ParseGrid(cfg_.grid);

    std::uint64_t h = text::Fnv1a("lexicon");
    for (const char* f : {"morphemes.tsv", "mcs.tsv", "words.tsv"}) {
      h = text::Fnv1a(detail::ReadFile(fs::path(cfg_.lexicon) / f), h);
    }
    lexicon_hash_ = text::Fnv1a(detail::ReadFile(cfg_.HierarchyPath()), h);

    fs::create_directories(root_);
    detail::WriteFile(root_ / "pipeline.conf", config_text_);
    Begin("validate");
    detail::WriteFile(root_ / "validate" / "stats.tsv", FormatStats(ComputeStats(*lexicon_)));
    Finish("validate", lexicon_hash_);
  }

  void Generate() {
    std::ostringstream k;
    k << "generate|" << detail::Hex(lexicon_hash_) << '|' << detail::FormatDouble(cfg_.threshold)
      << '|' << cfg_.dedup << '|' << cfg_.workers;
    gen_hash_ = text::Fnv1a(k.str());
    auto dir = root_ / "generate";
    if (UpToDate("generate", gen_hash_, {dir / "report.json"})) return Skip("generate");
    Begin("generate");
    GenerateOptions go;
    go.threshold = cfg_.threshold;
    go.dedup = cfg_.dedup;
    go.workers = cfg_.workers;
    GenerateCorpusToDir(*lexicon_, *tree_, go, dir);
    Finish("generate", gen_hash_);
  }

  static std::string TrainKey(const TrainConfig& c) {
    std::ostringstream k;
    k << ToString(c.model) << '|' << c.dim << '|' << c.window << '|' << c.negatives << '|'
      << c.epochs << '|' << detail::FormatDouble(c.initial_lr) << '|'
      << detail::FormatDouble(c.min_lr_fraction) << '|' << c.min_count << '|' << c.seed << '|'
      << c.deterministic << '|' << c.sampled_window << '|' << detail::FormatDouble(c.subsample)
      << '|' << c.shuffle << '|' << (c.deterministic ? 1 : c.workers);
    return k.str();
  }

  static nlohmann::json TrainJson(const TrainConfig& c, const TrainResult& r) {
    nlohmann::json j;
    j["model"] = ToString(c.model);
    j["dim"] = c.dim;
    j["window"] = c.window;
    j["negatives"] = c.negatives;
    j["epochs"] = c.epochs;
    j["seed"] = c.seed;
    j["deterministic"] = c.deterministic;
    j["shuffle"] = c.shuffle;
    j["vocab_size"] = r.model.vocab().size();
    j["pairs"] = r.stats.pairs;
    j["epoch_loss"] = r.stats.epoch_loss;
    return j;
  }

  void TrainStage() {
    train_hash_ = text::Fnv1a("train|" + detail::Hex(gen_hash_) + "|" + TrainKey(cfg_.train));
    auto dir = root_ / "train";
    auto model = ModelPath(root_);
    if (UpToDate("train", train_hash_, {model, ContextVectorsPath(model), dir / "train.json"})) {
      return Skip("train");
    }
    Begin("train");
    auto corpus = ReadCorpus(root_ / "generate", cfg_.train.min_count);
    auto r = Train(corpus, cfg_.train);
    SaveModel(r.model, model);
    detail::WriteFile(dir / "train.json", TrainJson(cfg_.train, r).dump(2) + "\n");
    Finish("train", train_hash_);
  }

  void Compose() {
    std::string weights_src = cfg_.weights.empty() ? "default" : detail::ReadFile(cfg_.weights);
    compose_hash_ = text::Fnv1a("compose|" + detail::Hex(train_hash_) + "|" + weights_src);
    auto dir = root_ / "compose";
    auto words = WordVectorsPath(root_);
    if (UpToDate("compose", compose_hash_, {words, dir / "compose.json"})) return Skip("compose");
    Begin("compose");
    auto model = LoadModel(ModelPath(root_));
    auto r = ComposeAll(*lexicon_, model, weights_);
    std::vector<std::pair<std::string, std::vector<double>>> rows;
    for (const auto& [surface, cv] : r.vectors) rows.emplace_back(surface, cv.vector);
    SaveVectors(words, rows);
    nlohmann::json j;
    j["words"] = r.total;
    j["composed"] = r.vectors.size();
    j["coverage"] = r.Coverage();
    j["uncovered"] = r.uncovered;
    std::vector<std::string> fb;
    for (Pattern p : r.fallback_patterns_used) fb.emplace_back(ToString(p));
    j["fallback_patterns"] = fb;
    detail::WriteFile(dir / "compose.json", j.dump(2) + "\n");
    Finish("compose", compose_hash_);
  }

  std::filesystem::path ExternalModelPath() const {
    if (!cfg_.external_model.empty()) return cfg_.external_model;
    if (!cfg_.external_corpus.empty()) return root_ / "external" / "baseline.vec";
    return {};
  }

  void External() {
    TrainConfig c = cfg_.external;
    // Derived from the root seed so the baseline stream differs from the
    // pseudo-corpus stream.
    c.seed = CounterRng(cfg_.seed(), 0xE87).Next();
    c.deterministic = cfg_.train.deterministic;
    c.workers = cfg_.train.workers;
    const std::string key = "external|" + detail::Hex(detail::HashPath(cfg_.external_corpus)) + "|" + TrainKey(c);
    external_hash_ = text::Fnv1a(key);
    auto dir = root_ / "external";
    if (UpToDate("external", external_hash_, {ExternalModelPath(), dir / "train.json"})) {
      return Skip("external");
    }
    Begin("external");
    auto corpus = ReadCorpus(cfg_.external_corpus, c.min_count);
    auto r = Train(corpus, c);
    // Only the word vectors are needed for similarity.
    detail::WriteVectors(ExternalModelPath(), r.model.vocab(), r.model.input());
    detail::WriteFile(dir / "train.json", TrainJson(c, r).dump(2) + "\n");
    Finish("external", external_hash_);
  }

  static nlohmann::json ResultJson(const std::optional<EvalResult>& r, const std::string& why) {
    nlohmann::json j;
    if (!r) {
      j["rho"] = nullptr;
      j["error"] = why;
      return j;
    }
    j["rho"] = r->rho;
    j["n_scored"] = r->n_scored;
    j["n_skipped"] = r->n_skipped;
    return j;
  }

  static std::optional<EvalResult> TryScore(const WordPairDataset& ds, const PairScorer& s,
                                            const std::string& label, std::string& why) {
    try {
      return ScoreDataset(ds, s, label);
    } catch (const Error& e) {
      why = e.what();
      return std::nullopt;
    }
  }

  void Eval() {
    std::ostringstream k;
    k << "eval|" << detail::Hex(compose_hash_) << '|' << detail::FormatDouble(cfg_.alpha) << '|'
      << cfg_.grid << '|' << cfg_.zscore;
    if (!cfg_.external_model.empty()) k << "|model:" << detail::Hex(detail::HashPath(cfg_.external_model));
    if (!cfg_.external_corpus.empty()) k << "|corpus:" << detail::Hex(external_hash_);
    for (const auto& p : cfg_.pairs) k << "|" << detail::Hex(detail::HashPath(p));
    eval_hash_ = text::Fnv1a(k.str());
    auto dir = root_ / "eval";
    if (UpToDate("eval", eval_hash_, {EvalReportPath(root_)})) return Skip("eval");
    Begin("eval");

    auto internal_model = LoadModel(WordVectorsPath(root_));
    std::optional<EmbeddingModel> external_model;
    if (auto p = ExternalModelPath(); !p.empty()) external_model = LoadModel(p);
    const auto internal = CosineScorer(internal_model);
    PairScorer external;
    if (external_model) external = CosineScorer(*external_model);

    nlohmann::json report;
    report["alpha"] = cfg_.alpha;
    report["zscore"] = cfg_.zscore;
    report["datasets"] = nlohmann::json::array();
    for (const auto& ds : datasets_) {
      nlohmann::json d;
      d["name"] = ds.name;
      d["pairs"] = ds.pairs.size();
      std::string why;
      d["internal"] = ResultJson(TryScore(ds, internal, "internal", why), why);
      if (external) {
        d["external"] = ResultJson(TryScore(ds, external, "external", why), why);
        try {
          auto sweep = WeightSweep(ds, internal, external, grid_, cfg_.zscore);
          const std::string csv = "sweep-" + ds.name + ".csv";
          detail::WriteFile(dir / csv, sweep.ToCsv());
          // Hybrid at the configured alpha, on the pairs both models cover.
          auto at = WeightSweep(ds, internal, external, {cfg_.alpha}, cfg_.zscore);
          d["hybrid"] = {{"rho", at.rows.front().rho}, {"n_scored", at.n_common},
                         {"n_skipped", ds.pairs.size() - at.n_common}};
          d["sweep"] = csv;
        } catch (const Error& e) {
          d["hybrid"] = {{"rho", nullptr}, {"error", e.what()}};
        }
      }
      report["datasets"].push_back(d);
    }
    detail::WriteFile(EvalReportPath(root_), report.dump(2) + "\n");
    Finish("eval", eval_hash_);
  }

  static nlohmann::json ReadJson(const std::filesystem::path& p) {
    return nlohmann::json::parse(detail::ReadFile(p));
  }

  // Built only from persisted artifacts so a resumed run reports the same
  // numbers as a fresh one.
  void Summarize() {
    auto stats = ComputeStats(*lexicon_);
    nlohmann::json s;
    s["seed"] = cfg_.seed();
    s["lexicon"] = {{"morphemes", stats.morphemes}, {"mcs", stats.mcs}, {"words", stats.words}};
    auto gen = ReadJson(root_ / "generate" / "report.json");
    s["generate"] = {{"threshold", gen["threshold"]}, {"sentences", gen["sentences_emitted"]}};
    auto tr = ReadJson(root_ / "train" / "train.json");
    s["train"] = {{"vocab_size", tr["vocab_size"]}, {"epoch_loss", tr["epoch_loss"]}};
    auto comp = ReadJson(root_ / "compose" / "compose.json");
    s["compose"] = {{"coverage", comp["coverage"]}, {"composed", comp["composed"]},
                    {"words", comp["words"]}};
    s["eval"] = ReadJson(EvalReportPath(root_))["datasets"];
    detail::WriteFile(SummaryPath(root_), s.dump(2) + "\n");
    result_.summary = std::move(s);
  }

  PipelineConfig cfg_;
  PipelineOptions opts_;
  std::filesystem::path root_;
  std::string config_text_;
  std::optional<Lexicon> lexicon_;
  std::optional<McTree> tree_;
  WeightTable weights_;
  std::vector<WordPairDataset> datasets_;
  std::vector<double> grid_;
  std::uint64_t lexicon_hash_ = 0, gen_hash_ = 0, train_hash_ = 0, compose_hash_ = 0,
                external_hash_ = 0, eval_hash_ = 0;
  PipelineResult result_;
};

inline PipelineResult RunPipeline(const PipelineConfig& cfg, PipelineOptions opts = {}) {
  return Pipeline(cfg, opts).Run();
}

}  // namespace morphoseed
