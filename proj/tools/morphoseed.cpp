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

// morphoseed command-line tool.
//
// Exit status: 0 success, 1 invalid input (bad flags, malformed or
// inconsistent data files), 2 runtime failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "morphoseed/analysis.hpp"
#include "morphoseed/composition.hpp"
#include "morphoseed/embedding.hpp"
#include "morphoseed/error.hpp"
#include "morphoseed/evaluation.hpp"
#include "morphoseed/generator.hpp"
#include "morphoseed/hierarchy.hpp"
#include "morphoseed/lexicon.hpp"
#include "morphoseed/pipeline.hpp"

namespace ms = morphoseed;
namespace fs = std::filesystem;

namespace {

std::string HierarchyOrDefault(const std::string& hierarchy, const std::string& lexicon) {
  if (!hierarchy.empty()) return hierarchy;
  if (lexicon.empty()) throw ms::ParseError("need --hierarchy or --lexicon");
  return (fs::path(lexicon) / "hierarchy.tsv").string();
}

void PrintRanked(const ms::NeighborResult& r) {
  for (const auto& s : r.ranked) std::printf("%s\t%.6f\n", s.id.c_str(), s.score);
}

std::vector<std::string> ReadTokenList(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ms::IoError("cannot open " + path);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    for (auto& t : ms::text::Tokens(line)) tokens.push_back(t);
  }
  return tokens;
}

void WriteOut(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::fwrite(data.data(), 1, data.size(), stdout);
    return;
  }
  ms::detail::WriteFile(path, data);
}

struct TrainFlags {
  std::string corpus;
  std::string out;
  std::string model = "cbow";
  ms::TrainConfig cfg;
  bool deterministic = false;
};

struct EvalFlags {
  std::string pairs;
  std::string internal;
  std::string external;
  double alpha = 0.35;
  bool zscore = false;
  std::string grid = "0:1:0.05";
  std::string out;
};

nlohmann::json EvalJson(const ms::EvalResult& r) {
  return {{"label", r.label}, {"rho", r.rho}, {"n_scored", r.n_scored}, {"n_skipped", r.n_skipped}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Morpheme-concept embeddings from a word-formation lexicon"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "morphoseed 0.1.0");

  std::string lexicon, hierarchy, mc, model_path, out, tokens_path, weights;
  double threshold = 0.85;
  int k = 3;

  auto* validate = app.add_subcommand("validate", "Check a lexicon (and optionally its hierarchy)");
  validate->add_option("--lexicon", lexicon, "Lexicon directory")
      ->required()->check(CLI::ExistingDirectory);
  validate->add_option("--hierarchy", hierarchy, "Hierarchy edge list")->check(CLI::ExistingFile);

  auto* stats = app.add_subcommand("stats", "Print lexicon statistics as TSV");
  stats->add_option("--lexicon", lexicon, "Lexicon directory")
      ->required()->check(CLI::ExistingDirectory);

  auto* neighbors = app.add_subcommand("neighbors", "MCs within a similarity threshold of an MC");
  neighbors->add_option("--mc", mc, "Center MC id")->required();
  neighbors->add_option("--threshold", threshold, "Similarity threshold")->check(CLI::Range(0.0, 1.0));
  neighbors->add_option("--hierarchy", hierarchy, "Hierarchy edge list")->check(CLI::ExistingFile);
  neighbors->add_option("--lexicon", lexicon, "Lexicon directory (hierarchy.tsv inside)")
      ->check(CLI::ExistingDirectory);

  ms::GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Write the proliferated pseudo-corpus");
  generate->add_option("--lexicon", lexicon, "Lexicon directory")
      ->required()->check(CLI::ExistingDirectory);
  generate->add_option("--hierarchy", hierarchy, "Hierarchy edge list")->check(CLI::ExistingFile);
  generate->add_option("--threshold", gen.threshold, "Proliferation threshold")
      ->check(CLI::Range(0.0, 1.0));
  generate->add_option("--out", out, "Output directory")->required();
  generate->add_flag("--dedup", gen.dedup, "Drop repeated sentences");
  generate->add_option("--workers", gen.workers, "Writer threads")->check(CLI::PositiveNumber);
  generate->add_option("--shard-lines", gen.lines_per_shard, "Lines per shard file")
      ->check(CLI::PositiveNumber);

  TrainFlags tf;
  auto* train = app.add_subcommand("train", "Train embeddings with negative sampling");
  train->add_option("--corpus", tf.corpus, "Corpus file or directory of *.txt")
      ->required()->check(CLI::ExistingPath);
  train->add_option("--out", tf.out, "Model file (word2vec text)")->required();
  train->add_option("--dim", tf.cfg.dim, "Vector size")->check(CLI::PositiveNumber);
  train->add_option("--window", tf.cfg.window, "Context half-width")->check(CLI::PositiveNumber);
  train->add_option("--model", tf.model, "cbow or skipgram");
  train->add_option("--epochs", tf.cfg.epochs, "Passes over the corpus")->check(CLI::NonNegativeNumber);
  train->add_option("--negatives", tf.cfg.negatives, "Negative samples per pair")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--lr", tf.cfg.initial_lr, "Initial learning rate")->check(CLI::PositiveNumber);
  train->add_option("--min-count", tf.cfg.min_count, "Drop rarer tokens")->check(CLI::PositiveNumber);
  train->add_option("--seed", tf.cfg.seed, "Random seed");
  train->add_flag("--deterministic", tf.deterministic, "Single-threaded, bitwise reproducible");
  train->add_option("--workers", tf.cfg.workers, "Threads when not deterministic")
      ->check(CLI::PositiveNumber);
  train->add_flag("--sampled-window", tf.cfg.sampled_window, "Sample the window per position");
  train->add_flag("--shuffle,!--no-shuffle", tf.cfg.shuffle, "Reorder sentences each epoch (default on)");
  train->add_option("--subsample", tf.cfg.subsample, "Frequent-token subsampling threshold")
      ->check(CLI::NonNegativeNumber);

  auto* compose = app.add_subcommand("compose", "Compose word vectors from MC vectors");
  compose->add_option("--lexicon", lexicon, "Lexicon directory")
      ->required()->check(CLI::ExistingDirectory);
  compose->add_option("--model", model_path, "MC model file")->required()->check(CLI::ExistingFile);
  compose->add_option("--weights", weights, "Pattern weight table (TSV)")->check(CLI::ExistingFile);
  compose->add_option("--out", out, "Word vector file")->required();

  EvalFlags ef;
  auto* eval = app.add_subcommand("eval", "Spearman correlation on a word-pair dataset");
  eval->add_option("--pairs", ef.pairs, "word1<TAB>word2<TAB>gold file")
      ->required()->check(CLI::ExistingFile);
  eval->add_option("--internal", ef.internal, "Composed word vectors")
      ->required()->check(CLI::ExistingFile);
  eval->add_option("--external", ef.external, "Corpus-trained word vectors")
      ->check(CLI::ExistingFile);
  eval->add_option("--alpha", ef.alpha, "Internal weight in the hybrid")->check(CLI::Range(0.0, 1.0));
  eval->add_flag("--zscore", ef.zscore, "Standardize scores before mixing");
  eval->add_option("--out", ef.out, "Report file (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "Hybrid rho over a grid of internal weights");
  sweep->add_option("--pairs", ef.pairs, "word1<TAB>word2<TAB>gold file")
      ->required()->check(CLI::ExistingFile);
  sweep->add_option("--internal", ef.internal, "Composed word vectors")
      ->required()->check(CLI::ExistingFile);
  sweep->add_option("--external", ef.external, "Corpus-trained word vectors")
      ->required()->check(CLI::ExistingFile);
  sweep->add_option("--grid", ef.grid, "start:stop:step");
  sweep->add_flag("--zscore", ef.zscore, "Standardize scores before mixing");
  sweep->add_option("--out", ef.out, "CSV file (default stdout)");

  auto* nearest = app.add_subcommand("nearest", "Nearest MCs by cosine");
  auto* syntag = app.add_subcommand("syntagmatic", "MCs the model predicts around an MC");
  for (auto* sub : {nearest, syntag}) {
    sub->add_option("--model", model_path, "MC model file")->required()->check(CLI::ExistingFile);
    sub->add_option("--lexicon", lexicon, "Lexicon directory")
        ->required()->check(CLI::ExistingDirectory);
    sub->add_option("--mc", mc, "Query MC id")->required();
    sub->add_option("-k", k, "Result count")->check(CLI::NonNegativeNumber);
  }

  auto* project = app.add_subcommand("project", "2-D PCA projection as CSV");
  project->add_option("--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
  project->add_option("--tokens", tokens_path, "Token list file")
      ->required()->check(CLI::ExistingFile);
  project->add_option("--out", out, "CSV file (default stdout)");

  ms::PipelineConfig pc;
  std::string config_path;
  std::vector<std::string> overrides;
  bool force = false;
  std::optional<std::string> p_lexicon, p_hierarchy, p_out, p_pairs, p_ext_model, p_ext_corpus;
  std::optional<double> p_threshold, p_alpha;
  std::optional<std::uint64_t> p_seed;
  std::optional<int> p_epochs;
  auto* pipeline = app.add_subcommand("pipeline", "validate, generate, train, compose, eval");
  pipeline->add_option("--config", config_path, "key = value config file")
      ->check(CLI::ExistingFile);
  pipeline->add_option("--lexicon", p_lexicon, "Lexicon directory");
  pipeline->add_option("--hierarchy", p_hierarchy, "Hierarchy edge list");
  pipeline->add_option("--out", p_out, "Output directory");
  pipeline->add_option("--pairs", p_pairs, "Comma-separated dataset files");
  pipeline->add_option("--external-model", p_ext_model, "Corpus-trained word vectors");
  pipeline->add_option("--external-corpus", p_ext_corpus, "Tokenized text for the baseline");
  pipeline->add_option("--threshold", p_threshold, "Proliferation threshold");
  pipeline->add_option("--alpha", p_alpha, "Internal weight in the hybrid");
  pipeline->add_option("--seed", p_seed, "Root seed");
  pipeline->add_option("--epochs", p_epochs, "Training epochs");
  pipeline->add_option("--set", overrides, "Extra key=value settings")->take_all();
  pipeline->add_flag("--force", force, "Rerun stages even when up to date");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? ms::kExitOk : ms::kExitValidation;
  }

  try {
    if (*validate) {
      auto lex = ms::LoadLexiconDir(lexicon);
      std::string extra;
      if (!hierarchy.empty()) {
        auto tree = ms::LoadHierarchy(hierarchy);
        if (auto errs = tree.CheckAgainst(lex); !errs.empty()) throw ms::ValidationError(errs);
        extra = ", " + std::to_string(tree.nodes().size()) + " hierarchy nodes";
      }
      std::printf("ok: %zu morphemes, %zu MCs, %zu words%s\n", lex.morphemes().size(),
                  lex.mcs().size(), lex.words().size(), extra.c_str());
    } else if (*stats) {
      std::fputs(ms::FormatStats(ms::ComputeStats(ms::LoadLexiconDir(lexicon))).c_str(), stdout);
    } else if (*neighbors) {
      auto tree = ms::LoadHierarchy(HierarchyOrDefault(hierarchy, lexicon));
      for (const auto& s : tree.Neighbors(mc, threshold).members) {
        std::printf("%s\t%.6f\n", s.id.c_str(), s.score);
      }
    } else if (*generate) {
      auto lex = ms::LoadLexiconDir(lexicon);
      auto tree = ms::LoadHierarchy(HierarchyOrDefault(hierarchy, lexicon));
      if (auto errs = tree.CheckAgainst(lex); !errs.empty()) throw ms::ValidationError(errs);
      auto report = ms::GenerateCorpusToDir(lex, tree, gen, out);
      std::fprintf(stderr, "%zu sentences from %zu seed words\n", report.sentences_emitted,
                   report.seed_words);
    } else if (*train) {
      auto kind = ms::ParseModelKind(tf.model);
      if (!kind) throw ms::ParseError("--model must be cbow or skipgram");
      tf.cfg.model = *kind;
      tf.cfg.deterministic = tf.deterministic;
      auto corpus = ms::ReadCorpus(tf.corpus, tf.cfg.min_count);
      auto r = ms::Train(corpus, tf.cfg);
      ms::SaveModel(r.model, tf.out);
      for (size_t e = 0; e < r.stats.epoch_loss.size(); ++e) {
        std::fprintf(stderr, "epoch %zu loss %.6f\n", e + 1, r.stats.epoch_loss[e]);
      }
    } else if (*compose) {
      auto lex = ms::LoadLexiconDir(lexicon);
      auto model = ms::LoadModel(model_path);
      auto table = weights.empty() ? ms::DefaultWeightTable() : ms::LoadWeightTable(weights);
      auto r = ms::ComposeAll(lex, model, table);
      std::vector<std::pair<std::string, std::vector<double>>> rows;
      for (const auto& [surface, cv] : r.vectors) rows.emplace_back(surface, cv.vector);
      ms::SaveVectors(out, rows);
      std::fprintf(stderr, "composed %zu of %zu words (coverage %.4f)\n", r.vectors.size(), r.total,
                   r.Coverage());
      for (auto p : r.fallback_patterns_used) {
        std::fprintf(stderr, "note: pattern %s uses fallback weights 0.5/0.5\n", ms::ToString(p));
      }
    } else if (*eval) {
      auto ds = ms::LoadDataset(ef.pairs);
      auto in_model = ms::LoadModel(ef.internal);
      auto internal = ms::CosineScorer(in_model);
      nlohmann::json j;
      j["dataset"] = ds.name;
      j["pairs"] = ds.pairs.size();
      j["internal"] = EvalJson(ms::ScoreDataset(ds, internal, "internal"));
      if (!ef.external.empty()) {
        auto ex_model = ms::LoadModel(ef.external);
        auto external = ms::CosineScorer(ex_model);
        j["external"] = EvalJson(ms::ScoreDataset(ds, external, "external"));
        auto at = ms::WeightSweep(ds, internal, external, {ef.alpha}, ef.zscore);
        j["hybrid"] = {{"alpha", ef.alpha},
                       {"rho", at.rows.front().rho},
                       {"n_scored", at.n_common},
                       {"n_skipped", ds.pairs.size() - at.n_common}};
      }
      WriteOut(ef.out, j.dump(2) + "\n");
    } else if (*sweep) {
      auto ds = ms::LoadDataset(ef.pairs);
      auto in_model = ms::LoadModel(ef.internal);
      auto ex_model = ms::LoadModel(ef.external);
      auto r = ms::WeightSweep(ds, ms::CosineScorer(in_model), ms::CosineScorer(ex_model),
                               ms::ParseGrid(ef.grid), ef.zscore);
      WriteOut(ef.out, r.ToCsv());
    } else if (*nearest || *syntag) {
      auto lex = ms::LoadLexiconDir(lexicon);
      auto model = ms::LoadModel(model_path);
      PrintRanked(*nearest ? ms::NearestMcs(model, lex, mc, k) : ms::SyntagmaticTop(model, lex, mc, k));
    } else if (*project) {
      auto model = ms::LoadModel(model_path);
      WriteOut(out, ms::PcaProject(model, ReadTokenList(tokens_path)).ToCsv());
    } else if (*pipeline) {
      if (!config_path.empty()) pc = ms::LoadPipelineConfig(config_path, pc);
      // Flags win over the config file.
      if (p_lexicon) pc.Set("lexicon", *p_lexicon);
      if (p_hierarchy) pc.Set("hierarchy", *p_hierarchy);
      if (p_out) pc.Set("out", *p_out);
      if (p_pairs) pc.Set("pairs", *p_pairs);
      if (p_ext_model) pc.Set("external_model", *p_ext_model);
      if (p_ext_corpus) pc.Set("external_corpus", *p_ext_corpus);
      if (p_threshold) pc.threshold = *p_threshold;
      if (p_alpha) pc.alpha = *p_alpha;
      if (p_seed) pc.train.seed = *p_seed;
      if (p_epochs) pc.train.epochs = *p_epochs;
      for (const auto& kv : overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ms::ParseError("--set expects key=value, got " + kv);
        pc.Set(ms::text::Trim(std::string_view(kv).substr(0, eq)), std::string_view(kv).substr(eq + 1));
      }
      ms::PipelineOptions opts;
      opts.force = force;
      auto r = ms::RunPipeline(pc, opts);
      std::fputs((r.summary.dump(2) + "\n").c_str(), stdout);
    }
  } catch (const ms::StageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_code();
  } catch (const ms::ValidationError& e) {
    std::fprintf(stderr, "validation failed:\n");
    for (const auto& d : e.diagnostics()) std::fprintf(stderr, "  %s\n", d.c_str());
    return ms::kExitValidation;
  } catch (const ms::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return ms::kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return ms::kExitRuntime;
  }
  return ms::kExitOk;
}
