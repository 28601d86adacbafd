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

// word2vec-style embedding training (CBOW and skip-gram) with negative
// sampling, plus the text model format.

#pragma once

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include "morphoseed/error.hpp"
#include "morphoseed/text.hpp"

namespace morphoseed {

// Counter-based generator: the value for (key, counter) is a pure
// function, so streams can be carved out per sentence and epoch without
// any shared state.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(Mix(key)) {}
  CounterRng(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0)
      : key_(Mix(Mix(Mix(seed) ^ a) ^ (b * 0x9E3779B97F4A7C15ULL))) {}

  std::uint64_t Next() { return Mix(key_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

  // Uniform in [0, 1).
  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  std::uint64_t Below(std::uint64_t n) { return Next() % n; }

  static std::uint64_t Mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

class Vocabulary {
 public:
  Vocabulary() = default;

  // Ids are assigned by descending count, ties lexicographic. Tokens with
  // count below `min_count` are dropped.
  static Vocabulary FromCounts(const std::unordered_map<std::string, std::uint64_t>& counts,
                               std::uint64_t min_count) {
    std::vector<std::pair<std::string, std::uint64_t>> kept;
    for (const auto& [t, n] : counts) {
      if (n >= min_count && n > 0) kept.emplace_back(t, n);
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    Vocabulary v;
    for (auto& [t, n] : kept) v.Add(std::move(t), n);
    v.BuildNoise();
    return v;
  }

  size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::string& Token(int id) const { return tokens_[id]; }
  std::uint64_t Count(int id) const { return counts_[id]; }
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::optional<int> Find(std::string_view t) const {
    auto it = index_.find(std::string(t));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  int Id(std::string_view t) const {
    auto id = Find(t);
    if (!id) throw OovError(std::string(t));
    return *id;
  }

  std::uint64_t TotalCount() const {
    std::uint64_t s = 0;
    for (auto c : counts_) s += c;
    return s;
  }

  // Normalized count^0.75.
  const std::vector<double>& NoiseDistribution() const { return noise_; }

  // Draws a token id from the noise distribution given u in [0, 1).
  int SampleNoise(double u) const {
    auto it = std::upper_bound(noise_cdf_.begin(), noise_cdf_.end(), u);
    if (it == noise_cdf_.end()) return static_cast<int>(noise_cdf_.size()) - 1;
    return static_cast<int>(it - noise_cdf_.begin());
  }

  // For models read back from disk, where counts are not stored.
  void AddUncounted(std::string token) { Add(std::move(token), 1); }
  void Finish() { BuildNoise(); }

 private:
  void Add(std::string t, std::uint64_t n) {
    if (index_.count(t)) throw ParseError("duplicate token " + t);
    index_.emplace(t, static_cast<int>(tokens_.size()));
    tokens_.push_back(std::move(t));
    counts_.push_back(n);
  }

  void BuildNoise() {
    noise_.resize(counts_.size());
    double z = 0;
    for (size_t i = 0; i < counts_.size(); ++i) {
      noise_[i] = std::pow(static_cast<double>(counts_[i]), 0.75);
      z += noise_[i];
    }
    noise_cdf_.resize(noise_.size());
    double acc = 0;
    for (size_t i = 0; i < noise_.size(); ++i) {
      noise_[i] /= z;
      acc += noise_[i];
      noise_cdf_[i] = acc;
    }
  }

  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, int> index_;
  std::vector<double> noise_;
  std::vector<double> noise_cdf_;
};

// Token-id sentences over a vocabulary. Line boundaries are sentence
// boundaries; context windows never cross them.
struct Corpus {
  Vocabulary vocab;
  std::vector<std::vector<int>> sentences;

  size_t TokenCount() const {
    size_t n = 0;
    for (const auto& s : sentences) n += s.size();
    return n;
  }
};

inline Corpus BuildCorpus(const std::vector<std::vector<std::string>>& lines,
                          std::uint64_t min_count) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& l : lines) {
    for (const auto& t : l) ++counts[t];
  }
  if (counts.empty()) throw Error("empty corpus");
  Corpus c;
  c.vocab = Vocabulary::FromCounts(counts, min_count);
  if (c.vocab.empty()) throw Error("no token reaches min_count " + std::to_string(min_count));
  for (const auto& l : lines) {
    std::vector<int> ids;
    for (const auto& t : l) {
      if (auto id = c.vocab.Find(t)) ids.push_back(*id);
    }
    if (!ids.empty()) c.sentences.push_back(std::move(ids));
  }
  return c;
}

inline Vocabulary BuildVocab(const std::vector<std::vector<std::string>>& lines,
                             std::uint64_t min_count) {
  return BuildCorpus(lines, min_count).vocab;
}

// A corpus path is a single text file, or a directory whose `*.txt` files
// are read in name order.
inline std::vector<std::filesystem::path> CorpusFiles(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  if (!fs::exists(path)) throw IoError("corpus not found: " + path.string());
  if (!fs::is_directory(path)) return {path};
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(path)) {
    if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no .txt corpus files in " + path.string());
  return files;
}

// Two passes over the files: counts, then id encoding.
inline Corpus ReadCorpus(const std::filesystem::path& path, std::uint64_t min_count) {
  auto files = CorpusFiles(path);
  std::unordered_map<std::string, std::uint64_t> counts;
  std::string line;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw IoError("cannot open " + f.string());
    while (std::getline(in, line)) {
      for (auto& t : text::Tokens(line)) ++counts[t];
    }
  }
  if (counts.empty()) throw Error("empty corpus: " + path.string());
  Corpus c;
  c.vocab = Vocabulary::FromCounts(counts, min_count);
  if (c.vocab.empty()) throw Error("no token reaches min_count " + std::to_string(min_count));
  for (const auto& f : files) {
    std::ifstream in(f);
    while (std::getline(in, line)) {
      std::vector<int> ids;
      for (const auto& t : text::Tokens(line)) {
        if (auto id = c.vocab.Find(t)) ids.push_back(*id);
      }
      if (!ids.empty()) c.sentences.push_back(std::move(ids));
    }
  }
  return c;
}

enum class ModelKind { kCbow, kSkipGram };

inline const char* ToString(ModelKind k) { return k == ModelKind::kCbow ? "cbow" : "skipgram"; }

inline std::optional<ModelKind> ParseModelKind(std::string_view s) {
  if (s == "cbow") return ModelKind::kCbow;
  if (s == "skipgram" || s == "skip-gram" || s == "sg") return ModelKind::kSkipGram;
  return std::nullopt;
}

struct TrainConfig {
  int dim = 20;
  int window = 3;
  ModelKind model = ModelKind::kCbow;
  int negatives = 5;
  int epochs = 5;
  double initial_lr = 0.025;
  // Learning rate decays linearly to initial_lr * min_lr_fraction.
  double min_lr_fraction = 1e-4;
  std::uint64_t min_count = 1;
  std::uint64_t seed = 42;
  bool deterministic = true;
  // Draw the effective half-width uniformly from [1, window] per target.
  bool sampled_window = false;
  // Frequent-token subsampling threshold; 0 disables.
  double subsample = 0.0;
  // Visit sentences in a fresh seeded order each epoch. Generated corpora
  // keep each seed's proliferations together; without this the model
  // chases one block at a time.
  bool shuffle = true;
  int workers = 1;
};

// Dense row-major V x dim matrix.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

  std::span<double> Row(int r) { return {data.data() + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)}; }
  std::span<const double> Row(int r) const {
    return {data.data() + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)};
  }
  bool empty() const { return data.empty(); }
};

// One negative-sampling training example: the hidden vector is the mean
// of the input rows of `inputs`; `target` is the positive output row and
// `negatives` the sampled noise rows.
struct NsExample {
  std::vector<int> inputs;
  int target = 0;
  std::vector<int> negatives;
};

namespace detail {

inline double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + exp(-x)) = -log sigmoid(x), stable for large |x|.
inline double SoftplusNeg(double x) {
  if (x >= 0) return std::log1p(std::exp(-x));
  return -x + std::log1p(std::exp(x));
}

inline double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace detail

// Loss  -log σ(o_t·h) - Σ_n log σ(-o_n·h).
inline double NsLoss(const Matrix& in, const Matrix& out, const NsExample& ex) {
  const int dim = in.cols;
  std::vector<double> h(dim, 0.0);
  for (int i : ex.inputs) {
    auto r = in.Row(i);
    for (int d = 0; d < dim; ++d) h[d] += r[d];
  }
  for (auto& x : h) x /= static_cast<double>(ex.inputs.size());
  double loss = detail::SoftplusNeg(detail::Dot(out.Row(ex.target), h));
  for (int n : ex.negatives) loss += detail::SoftplusNeg(-detail::Dot(out.Row(n), h));
  return loss;
}

// Full gradient of NsLoss with respect to every row it touches; rows
// that appear more than once accumulate.
struct NsGradient {
  std::map<int, std::vector<double>> input_rows;
  std::map<int, std::vector<double>> output_rows;
};

// Gradient for one example. `scratch` is resized as needed. Returns the
// loss at the current parameters. If `apply_lr` > 0 the negative gradient
// step is written into the matrices; otherwise `grad` receives it.
inline double NsForwardBackward(Matrix& in, Matrix& out, const NsExample& ex, double apply_lr,
                                NsGradient* grad, std::vector<double>& scratch) {
  const int dim = in.cols;
  scratch.assign(2 * static_cast<size_t>(dim), 0.0);
  double* h = scratch.data();
  double* dh = scratch.data() + dim;
  const double inv = 1.0 / static_cast<double>(ex.inputs.size());
  for (int i : ex.inputs) {
    auto r = in.Row(i);
    for (int d = 0; d < dim; ++d) h[d] += r[d];
  }
  for (int d = 0; d < dim; ++d) h[d] *= inv;
  std::span<const double> hs(h, dim);

  const size_t n_out = 1 + ex.negatives.size();
  // Scores use the pre-update output rows for every term.
  double loss = 0;
  double coef_buf[64];
  std::vector<double> coef_heap;
  double* coef = coef_buf;
  if (n_out > 64) {
    coef_heap.resize(n_out);
    coef = coef_heap.data();
  }
  for (size_t j = 0; j < n_out; ++j) {
    int row = j == 0 ? ex.target : ex.negatives[j - 1];
    double s = detail::Dot(out.Row(row), hs);
    if (j == 0) {
      loss += detail::SoftplusNeg(s);
      coef[j] = detail::Sigmoid(s) - 1.0;
    } else {
      loss += detail::SoftplusNeg(-s);
      coef[j] = detail::Sigmoid(s);
    }
    auto o = out.Row(row);
    for (int d = 0; d < dim; ++d) dh[d] += coef[j] * o[d];
  }

  if (apply_lr > 0) {
    for (size_t j = 0; j < n_out; ++j) {
      int row = j == 0 ? ex.target : ex.negatives[j - 1];
      auto o = out.Row(row);
      const double g = apply_lr * coef[j];
      for (int d = 0; d < dim; ++d) o[d] -= g * h[d];
    }
    for (int i : ex.inputs) {
      auto r = in.Row(i);
      for (int d = 0; d < dim; ++d) r[d] -= apply_lr * inv * dh[d];
    }
  } else if (grad != nullptr) {
    for (size_t j = 0; j < n_out; ++j) {
      int row = j == 0 ? ex.target : ex.negatives[j - 1];
      auto& g = grad->output_rows[row];
      g.resize(dim, 0.0);
      for (int d = 0; d < dim; ++d) g[d] += coef[j] * h[d];
    }
    for (int i : ex.inputs) {
      auto& g = grad->input_rows[i];
      g.resize(dim, 0.0);
      for (int d = 0; d < dim; ++d) g[d] += inv * dh[d];
    }
  }
  return loss;
}

inline NsGradient NsLossGradient(const Matrix& in, const Matrix& out, const NsExample& ex) {
  NsGradient g;
  std::vector<double> scratch;
  // const_cast is safe: with apply_lr == 0 the matrices are only read.
  NsForwardBackward(const_cast<Matrix&>(in), const_cast<Matrix&>(out), ex, 0.0, &g, scratch);
  return g;
}

// Half-open range [first, last) of context positions for target `i` in a
// sentence of length `len`. The range contains `i`; callers skip it.
inline std::pair<int, int> ContextRange(int len, int i, int half_width) {
  return {std::max(0, i - half_width), std::min(len, i + half_width + 1)};
}

class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(Vocabulary vocab, int dim, bool with_output)
      : vocab_(std::move(vocab)), input_(static_cast<int>(vocab_.size()), dim) {
    if (with_output) output_ = Matrix(static_cast<int>(vocab_.size()), dim);
  }

  const Vocabulary& vocab() const { return vocab_; }
  int dim() const { return input_.cols; }
  const Matrix& input() const { return input_; }
  const Matrix& output() const { return output_; }
  Matrix& mutable_input() { return input_; }
  Matrix& mutable_output() { return output_; }
  bool has_output() const { return !output_.empty(); }
  const TrainConfig& config() const { return config_; }
  void set_config(const TrainConfig& c) { config_ = c; }

  bool Contains(std::string_view token) const { return vocab_.Find(token).has_value(); }

  // Input-matrix row of `token`; throws OovError.
  std::span<const double> Vector(std::string_view token) const {
    return input_.Row(vocab_.Id(token));
  }

  std::span<const double> OutputVector(std::string_view token) const {
    if (!has_output()) throw Error("model has no output (context) matrix");
    return output_.Row(vocab_.Id(token));
  }

 private:
  Vocabulary vocab_;
  Matrix input_;
  Matrix output_;
  TrainConfig config_;
};

struct TrainStats {
  // Mean per-pair loss of each epoch, measured before each update.
  std::vector<double> epoch_loss;
  std::uint64_t pairs = 0;
};

struct TrainResult {
  EmbeddingModel model;
  TrainStats stats;
};

// SGD with linear learning-rate decay. In deterministic mode training is
// single-threaded and every random draw comes from a counter stream keyed
// by (seed, epoch, sentence), so the output is bitwise reproducible.
// Otherwise sentences are split over `workers` threads that update the
// shared matrices without synchronization (hogwild); lost updates are
// accepted.
inline TrainResult Train(const Corpus& corpus, const TrainConfig& cfg) {
  if (cfg.dim < 1) throw Error("dim must be >= 1");
  if (cfg.window < 1) throw Error("window must be >= 1");
  if (cfg.epochs < 0 || cfg.negatives < 0) throw Error("epochs and negatives must be >= 0");
  const auto& vocab = corpus.vocab;
  if (vocab.empty()) throw Error("empty vocabulary");
  const int V = static_cast<int>(vocab.size());
  for (const auto& s : corpus.sentences) {
    for (int id : s) {
      if (id < 0 || id >= V) throw Error("corpus token id outside vocabulary");
    }
  }

  TrainResult result{EmbeddingModel(vocab, cfg.dim, true), {}};
  auto& model = result.model;
  model.set_config(cfg);
  Matrix& in = model.mutable_input();
  Matrix& out = model.mutable_output();
  {
    CounterRng rng(cfg.seed, 0xA11CE);
    for (auto& x : in.data) x = (rng.Uniform() - 0.5) / cfg.dim;
  }

  const std::uint64_t total_tokens = corpus.TokenCount();
  const double total_work = static_cast<double>(total_tokens) * std::max(1, cfg.epochs) + 1.0;
  const double total_count = static_cast<double>(vocab.TotalCount());
  std::atomic<std::uint64_t> processed{0};

  auto learning_rate = [&](std::uint64_t done) {
    double frac = 1.0 - static_cast<double>(done) / total_work;
    return cfg.initial_lr * std::max(cfg.min_lr_fraction, frac);
  };

  struct Partial {
    double loss = 0;
    std::uint64_t pairs = 0;
  };

  const size_t n_sent = corpus.sentences.size();
  std::vector<size_t> order(n_sent);

  auto train_range = [&](int epoch, size_t begin, size_t end) {
    Partial part;
    NsExample ex;
    std::vector<double> scratch;
    std::vector<int> kept;
    for (size_t pos = begin; pos < end; ++pos) {
      const size_t si = order[pos];
      const auto& sent = corpus.sentences[si];
      CounterRng rng(cfg.seed, static_cast<std::uint64_t>(epoch) + 1, si);
      const double lr = learning_rate(processed.load(std::memory_order_relaxed));
      processed.fetch_add(sent.size(), std::memory_order_relaxed);

      const std::vector<int>* tokens = &sent;
      if (cfg.subsample > 0) {
        kept.clear();
        for (int id : sent) {
          double f = static_cast<double>(vocab.Count(id)) / total_count;
          double keep = (std::sqrt(f / cfg.subsample) + 1.0) * cfg.subsample / f;
          if (keep >= 1.0 || rng.Uniform() < keep) kept.push_back(id);
        }
        tokens = &kept;
      }
      const int len = static_cast<int>(tokens->size());
      auto draw_negatives = [&](int target) {
        ex.negatives.clear();
        for (int k = 0; k < cfg.negatives; ++k) {
          int n = vocab.SampleNoise(rng.Uniform());
          if (n != target) ex.negatives.push_back(n);
        }
      };
      for (int i = 0; i < len; ++i) {
        int half = cfg.window;
        if (cfg.sampled_window) half = 1 + static_cast<int>(rng.Below(cfg.window));
        auto [first, last] = ContextRange(len, i, half);
        if (cfg.model == ModelKind::kCbow) {
          ex.inputs.clear();
          for (int c = first; c < last; ++c) {
            if (c != i) ex.inputs.push_back((*tokens)[c]);
          }
          if (ex.inputs.empty()) continue;
          ex.target = (*tokens)[i];
          draw_negatives(ex.target);
          part.loss += NsForwardBackward(in, out, ex, lr, nullptr, scratch);
          ++part.pairs;
        } else {
          for (int c = first; c < last; ++c) {
            if (c == i) continue;
            ex.inputs.assign(1, (*tokens)[i]);
            ex.target = (*tokens)[c];
            draw_negatives(ex.target);
            part.loss += NsForwardBackward(in, out, ex, lr, nullptr, scratch);
            ++part.pairs;
          }
        }
      }
    }
    return part;
  };

  const int workers = cfg.deterministic ? 1 : std::max(1, cfg.workers);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), size_t{0});
    if (cfg.shuffle) {
      // Fisher-Yates on a counter stream, so the order does not depend on
      // the standard library.
      CounterRng rng(cfg.seed, 0x5F1E, static_cast<std::uint64_t>(epoch));
      for (size_t i = n_sent; i > 1; --i) std::swap(order[i - 1], order[rng.Below(i)]);
    }
    Partial total;
    if (workers == 1) {
      total = train_range(epoch, 0, n_sent);
    } else {
      std::vector<Partial> parts(workers);
      std::vector<std::thread> pool;
      size_t chunk = (n_sent + workers - 1) / workers;
      for (int w = 0; w < workers; ++w) {
        size_t b = std::min(n_sent, w * chunk), e = std::min(n_sent, b + chunk);
        pool.emplace_back([&, w, b, e] { parts[w] = train_range(epoch, b, e); });
      }
      for (auto& t : pool) t.join();
      for (const auto& p : parts) {
        total.loss += p.loss;
        total.pairs += p.pairs;
      }
    }
    result.stats.epoch_loss.push_back(total.pairs ? total.loss / total.pairs : 0.0);
    result.stats.pairs += total.pairs;
  }

  for (double x : in.data) {
    if (!std::isfinite(x)) throw Error("training diverged: non-finite input vector");
  }
  for (double x : out.data) {
    if (!std::isfinite(x)) throw Error("training diverged: non-finite output vector");
  }
  return result;
}

namespace detail {

inline void WriteVectors(const std::filesystem::path& path, const Vocabulary& vocab,
                         const Matrix& m) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (f == nullptr) throw IoError("cannot write " + path.string());
  std::fprintf(f, "%zu %d\n", vocab.size(), m.cols);
  for (int r = 0; r < m.rows; ++r) {
    std::fputs(vocab.Token(r).c_str(), f);
    for (double x : m.Row(r)) std::fprintf(f, " %.6f", x);
    std::fputc('\n', f);
  }
  bool ok = std::ferror(f) == 0;
  ok = std::fclose(f) == 0 && ok;
  if (!ok) throw IoError("write failed: " + path.string());
}

struct VectorFile {
  std::vector<std::string> tokens;
  Matrix matrix;
};

inline VectorFile ReadVectors(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": missing header");
  auto header = text::Tokens(line);
  if (header.size() != 2) throw ParseError(path.string() + ": header must be 'V dim'");
  auto v = text::ParseInt(header[0]);
  auto dim = text::ParseInt(header[1]);
  if (!v || !dim || *dim < 1) throw ParseError(path.string() + ": malformed header");
  VectorFile vf{{}, Matrix(*v, *dim)};
  int row = 0;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    auto f = text::Tokens(line);
    if (f.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (row >= *v) throw ParseError(where + ": more rows than header count");
    if (static_cast<int>(f.size()) != *dim + 1) {
      throw ParseError(where + ": expected " + std::to_string(*dim) + " components, got " +
                       std::to_string(f.size() - 1));
    }
    vf.tokens.push_back(f[0]);
    auto r = vf.matrix.Row(row);
    for (int d = 0; d < *dim; ++d) {
      auto x = text::ParseDouble(f[d + 1]);
      if (!x) throw ParseError(where + ": bad number '" + f[d + 1] + "'");
      r[d] = *x;
    }
    ++row;
  }
  if (row != *v) throw ParseError(path.string() + ": header says " + std::to_string(*v) +
                                  " rows, found " + std::to_string(row));
  return vf;
}

}  // namespace detail

// Path of the output-matrix companion file written next to a model.
inline std::filesystem::path ContextVectorsPath(const std::filesystem::path& model_path) {
  return model_path.string() + ".ctx";
}

// word2vec text format: "V dim" then "token f1 ... fdim" with %.6f. When
// the model carries an output matrix it goes to `<path>.ctx` in the same
// format.
inline void SaveModel(const EmbeddingModel& model, const std::filesystem::path& path) {
  detail::WriteVectors(path, model.vocab(), model.input());
  if (model.has_output()) detail::WriteVectors(ContextVectorsPath(path), model.vocab(), model.output());
}

// Loads a word2vec text file, plus `<path>.ctx` when present.
inline EmbeddingModel LoadModel(const std::filesystem::path& path) {
  auto vf = detail::ReadVectors(path);
  Vocabulary vocab;
  for (auto& t : vf.tokens) vocab.AddUncounted(t);
  vocab.Finish();
  auto ctx_path = ContextVectorsPath(path);
  const bool with_ctx = std::filesystem::exists(ctx_path);
  EmbeddingModel model(std::move(vocab), vf.matrix.cols, with_ctx);
  model.mutable_input() = std::move(vf.matrix);
  if (with_ctx) {
    auto ctx = detail::ReadVectors(ctx_path);
    if (ctx.tokens != model.vocab().tokens() || ctx.matrix.cols != model.dim()) {
      throw ParseError(ctx_path.string() + ": does not match " + path.string());
    }
    model.mutable_output() = std::move(ctx.matrix);
  }
  return model;
}

// Writes arbitrary keyed vectors (e.g. composed word vectors) in the same
// text format.
inline void SaveVectors(const std::filesystem::path& path,
                        const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
  if (rows.empty()) throw Error("no vectors to write");
  Vocabulary vocab;
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows.front().second.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    vocab.AddUncounted(rows[i].first);
    if (static_cast<int>(rows[i].second.size()) != m.cols) throw Error("ragged vectors");
    std::copy(rows[i].second.begin(), rows[i].second.end(), m.Row(static_cast<int>(i)).begin());
  }
  detail::WriteVectors(path, vocab, m);
}

}  // namespace morphoseed
