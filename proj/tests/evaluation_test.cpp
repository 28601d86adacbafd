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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "morphoseed/evaluation.hpp"
#include "test_util.hpp"

namespace morphoseed {
namespace {

using Vec = std::vector<double>;

// Closed form for lists without ties.
double SpearmanNoTies(const Vec& xs, const Vec& ys) {
  auto rank = [](const Vec& v) {
    Vec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
      r[i] = 1.0 + static_cast<double>(std::count_if(v.begin(), v.end(), [&](double x) { return x < v[i]; }));
    }
    return r;
  };
  auto rx = rank(xs), ry = rank(ys);
  const double n = static_cast<double>(xs.size());
  double d2 = 0;
  for (size_t i = 0; i < xs.size(); ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

// Mid-ranks by counting, then the raw-sums Pearson formula.
double SpearmanWithTies(const Vec& xs, const Vec& ys) {
  auto rank = [](const Vec& v) {
    Vec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
      double less = 0, equal = 0;
      for (double x : v) {
        less += x < v[i];
        equal += x == v[i];
      }
      r[i] = less + (equal + 1.0) / 2.0;
    }
    return r;
  };
  auto rx = rank(xs), ry = rank(ys);
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (size_t i = 0; i < rx.size(); ++i) {
    sx += rx[i];
    sy += ry[i];
    sxx += rx[i] * rx[i];
    syy += ry[i] * ry[i];
    sxy += rx[i] * ry[i];
  }
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

TEST(CosineTest, HandExamples) {
  Vec a = {1, 1}, b = {1, 0}, c = {0, 1};
  EXPECT_NEAR(Cosine(a, b), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(Cosine(b, c), 0.0);
  EXPECT_NEAR(Cosine(a, a), 1.0, 1e-15);
  Vec neg = {-2, -2};
  EXPECT_NEAR(Cosine(a, neg), -1.0, 1e-15);
}

TEST(CosineTest, ZeroVectorIsUndefined) {
  Vec z = {0, 0}, a = {1, 2};
  EXPECT_THROW(Cosine(z, a), UndefinedError);
  EXPECT_THROW(Cosine(a, z), UndefinedError);
  Vec three = {1, 2, 3};
  EXPECT_THROW(Cosine(a, three), Error);
}

TEST(CosineTest, SymmetricAndBounded) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 200; ++t) {
    Vec u(7), v(7);
    for (auto& x : u) x = normal(rng);
    for (auto& x : v) x = normal(rng);
    EXPECT_EQ(Cosine(u, v), Cosine(v, u));
    EXPECT_LE(std::abs(Cosine(u, v)), 1.0);
  }
}

TEST(SpearmanTest, HandExamples) {
  EXPECT_NEAR(Spearman(Vec{1, 2, 3}, Vec{1, 3, 2}), 0.5, 1e-15);
  EXPECT_NEAR(Spearman(Vec{1, 2, 3, 4}, Vec{10, 20, 30, 40}), 1.0, 1e-15);
  EXPECT_NEAR(Spearman(Vec{1, 2, 3, 4}, Vec{4, 3, 2, 1}), -1.0, 1e-15);
}

TEST(SpearmanTest, Errors) {
  EXPECT_THROW(Spearman(Vec{1, 2}, Vec{1, 2, 3}), Error);
  EXPECT_THROW(Spearman(Vec{1}, Vec{1}), Error);
  EXPECT_THROW(Spearman(Vec{1, 1, 1}, Vec{1, 2, 3}), UndefinedError);
}

TEST(SpearmanTest, AverageRanksShareTies) {
  EXPECT_EQ(AverageRanks(Vec{10, 20, 10, 30, 20, 20}), (Vec{1.5, 4, 1.5, 6, 4, 4}));
}

TEST(SpearmanTest, MatchesClosedFormOnRandomPermutations) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 1000; ++t) {
    const size_t n = 2 + rng() % 60;
    Vec xs(n), ys(n);
    std::iota(xs.begin(), xs.end(), 0.0);
    std::iota(ys.begin(), ys.end(), 0.0);
    std::shuffle(xs.begin(), xs.end(), rng);
    std::shuffle(ys.begin(), ys.end(), rng);
    EXPECT_NEAR(Spearman(xs, ys), SpearmanNoTies(xs, ys), 1e-12);
  }
}

TEST(SpearmanTest, MatchesCountingOracleWithTies) {
  std::mt19937_64 rng(3);
  int checked = 0;
  for (int t = 0; t < 1000; ++t) {
    const size_t n = 3 + rng() % 40;
    Vec xs(n), ys(n);
    for (auto& x : xs) x = static_cast<double>(rng() % 6);
    for (auto& y : ys) y = static_cast<double>(rng() % 6);
    if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs[0]; })) continue;
    if (std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys[0]; })) continue;
    EXPECT_NEAR(Spearman(xs, ys), SpearmanWithTies(xs, ys), 1e-12);
    ++checked;
  }
  EXPECT_GT(checked, 900);
}

TEST(SpearmanTest, InvariantUnderMonotoneMapsAndSwap) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 200; ++t) {
    const size_t n = 3 + rng() % 50;
    Vec xs(n), ys(n);
    for (auto& x : xs) x = normal(rng);
    for (auto& y : ys) y = normal(rng);
    const double rho = Spearman(xs, ys);
    EXPECT_EQ(rho, Spearman(ys, xs));
    const double shift = normal(rng), scale = std::exp(normal(rng));
    Vec fx(n), fy(n);
    for (size_t i = 0; i < n; ++i) {
      fx[i] = std::exp(scale * xs[i] + shift);
      fy[i] = std::atan(ys[i]) + ys[i] * ys[i] * ys[i];
    }
    EXPECT_NEAR(Spearman(fx, fy), rho, 1e-12);
  }
}

TEST(HybridTest, MixesLinearly) {
  EXPECT_NEAR(HybridScore(0.4, 0.8, 0.35), 0.66, 1e-15);
  EXPECT_EQ(HybridScore(0.4, 0.8, 0.0), 0.8);
  EXPECT_EQ(HybridScore(0.4, 0.8, 1.0), 0.4);
  EXPECT_THROW(HybridScore(0.4, 0.8, -0.01), Error);
  EXPECT_THROW(HybridScore(0.4, 0.8, 1.01), Error);
  EXPECT_THROW(HybridScore(0.4, 0.8, std::nan("")), Error);
}

TEST(GridTest, DefaultHasTwentyOnePoints) {
  auto g = DefaultGrid();
  ASSERT_EQ(g.size(), 21u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_NEAR(g[7], 0.35, 1e-12);
  EXPECT_EQ(ParseGrid("0.2:0.2:0.1"), Vec{0.2});
  EXPECT_THROW(ParseGrid("0:1"), ParseError);
  EXPECT_THROW(ParseGrid("1:0:0.1"), ParseError);
  EXPECT_THROW(ParseGrid("0:1:0"), ParseError);
}

WordPairDataset Dataset(std::vector<WordPair> pairs) { return {"test", std::move(pairs)}; }

PairScorer TableScorer(std::map<std::pair<std::string, std::string>, double> table) {
  return [table](const std::string& a, const std::string& b) -> std::optional<double> {
    auto it = table.find({a, b});
    if (it == table.end()) return std::nullopt;
    return it->second;
  };
}

TEST(ScoreDatasetTest, GoldScorerGivesOne) {
  std::vector<WordPair> pairs;
  std::map<std::pair<std::string, std::string>, double> table;
  for (int i = 0; i < 10; ++i) {
    pairs.push_back({"a" + std::to_string(i), "b", i * 0.5});
    table[{"a" + std::to_string(i), "b"}] = i * 0.5;
  }
  auto r = ScoreDataset(Dataset(pairs), TableScorer(table), "gold");
  EXPECT_EQ(r.rho, 1.0);
  EXPECT_EQ(r.n_skipped, 0u);
  EXPECT_EQ(r.label, "gold");
}

TEST(ScoreDatasetTest, SkipsUncoveredAndIgnoresRowOrder) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  std::vector<WordPair> pairs;
  std::map<std::pair<std::string, std::string>, double> table;
  for (int i = 0; i < 40; ++i) {
    std::string a = "w" + std::to_string(i);
    pairs.push_back({a, "x", normal(rng)});
    if (i % 4 != 0) table[{a, "x"}] = normal(rng);
  }
  auto scorer = TableScorer(table);
  auto r = ScoreDataset(Dataset(pairs), scorer);
  EXPECT_EQ(r.n_skipped, 10u);
  EXPECT_EQ(r.n_scored, 30u);
  EXPECT_EQ(r.skipped.front(), 0u);
  Vec gold, score;
  for (const auto& p : pairs) {
    if (auto s = scorer(p.first, p.second)) {
      gold.push_back(p.gold);
      score.push_back(*s);
    }
  }
  EXPECT_NEAR(r.rho, SpearmanNoTies(gold, score), 1e-12);
  for (int t = 0; t < 5; ++t) {
    std::shuffle(pairs.begin(), pairs.end(), rng);
    EXPECT_NEAR(ScoreDataset(Dataset(pairs), scorer).rho, r.rho, 1e-12);
  }
  EXPECT_THROW(ScoreDataset(Dataset({pairs[0]}), scorer), Error);
}

TEST(ScoreDatasetTest, CosineScorerOnFixturePairsMatchesOracle) {
  auto ds = LoadDataset((testing::FixtureDir() / "pairs.tsv").string());
  ASSERT_GE(ds.pairs.size(), 50u);
  std::set<std::string> words;
  for (const auto& p : ds.pairs) {
    words.insert(p.first);
    words.insert(p.second);
  }
  Vocabulary vocab;
  for (const auto& w : words) vocab.AddUncounted(w);
  vocab.Finish();
  EmbeddingModel model(std::move(vocab), 6, false);
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal;
  for (auto& x : model.mutable_input().data) x = normal(rng);
  auto r = ScoreDataset(ds, CosineScorer(model));
  EXPECT_EQ(r.n_skipped, 0u);
  Vec gold, score;
  for (const auto& p : ds.pairs) {
    auto u = model.Vector(p.first), v = model.Vector(p.second);
    double uv = 0, uu = 0, vv = 0;
    for (size_t d = 0; d < u.size(); ++d) {
      uv += u[d] * v[d];
      uu += u[d] * u[d];
      vv += v[d] * v[d];
    }
    gold.push_back(p.gold);
    score.push_back(uv / std::sqrt(uu * vv));
  }
  EXPECT_NEAR(r.rho, SpearmanWithTies(gold, score), 1e-12);
}

TEST(DatasetTest, RejectsDuplicatesAndBadScores) {
  testing::TempDir dir;
  testing::WriteText(dir / "d.tsv", "a\tb\t1\nb\ta\t2\nc\td\tnan\ne\tf\tinf\ng\th\n");
  try {
    LoadDataset((dir / "d.tsv").string());
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    const std::string p = (dir / "d.tsv").string();
    ASSERT_EQ(e.diagnostics().size(), 4u);
    EXPECT_EQ(e.diagnostics()[0], p + ":2: duplicate pair b / a");
    EXPECT_EQ(e.diagnostics()[1], p + ":3: gold score is not a finite number");
    EXPECT_EQ(e.diagnostics()[2], p + ":4: gold score is not a finite number");
    EXPECT_EQ(e.diagnostics()[3], p + ":5: expected word1<TAB>word2<TAB>gold");
  }
  testing::WriteText(dir / "ok.tsv", "# w1\tw2\tgold\na\tb\t1.5\n");
  auto ds = LoadDataset((dir / "ok.tsv").string());
  EXPECT_EQ(ds.name, "ok");
  ASSERT_EQ(ds.pairs.size(), 1u);
  EXPECT_EQ(ds.pairs[0].gold, 1.5);
}

TEST(SweepTest, EndpointsReproducePureModels) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  std::vector<WordPair> pairs;
  std::map<std::pair<std::string, std::string>, double> in_table, ex_table;
  for (int i = 0; i < 60; ++i) {
    std::string a = "w" + std::to_string(i);
    pairs.push_back({a, "x", normal(rng)});
    if (i % 5 != 1) in_table[{a, "x"}] = normal(rng);
    if (i % 7 != 2) ex_table[{a, "x"}] = normal(rng);
  }
  auto ds = Dataset(pairs);
  auto in = TableScorer(in_table), ex = TableScorer(ex_table);
  for (bool z : {false, true}) {
    auto sweep = WeightSweep(ds, in, ex, DefaultGrid(), z);
    ASSERT_EQ(sweep.rows.size(), 21u);
    WordPairDataset common{"common", {}};
    for (size_t i : sweep.pair_index) common.pairs.push_back(pairs[i]);
    EXPECT_EQ(common.pairs.size(), sweep.n_common);
    EXPECT_NEAR(sweep.rows.front().rho, ScoreDataset(common, ex).rho, 1e-12);
    EXPECT_NEAR(sweep.rows.back().rho, ScoreDataset(common, in).rho, 1e-12);
    for (size_t k = 0; k < sweep.n_common; ++k) {
      EXPECT_EQ(sweep.internal[k], *in(pairs[sweep.pair_index[k]].first, "x"));
    }
  }
  auto csv = WeightSweep(ds, in, ex, ParseGrid("0:1:0.5")).ToCsv();
  EXPECT_EQ(csv.substr(0, 10), "alpha,rho\n");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_THROW(WeightSweep(ds, in, TableScorer({}), DefaultGrid()), Error);
}

TEST(SweepTest, ComplementaryNoisePeaksInside) {
  // Two scorers each see the gold signal plus independent noise; mixing
  // averages the noise away, so an interior alpha beats both endpoints.
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  std::vector<WordPair> pairs;
  std::map<std::pair<std::string, std::string>, double> in_table, ex_table;
  for (int i = 0; i < 400; ++i) {
    std::string a = "w" + std::to_string(i);
    double g = normal(rng);
    pairs.push_back({a, "x", g});
    in_table[{a, "x"}] = g + normal(rng);
    ex_table[{a, "x"}] = g + normal(rng);
  }
  auto sweep = WeightSweep(Dataset(pairs), TableScorer(in_table), TableScorer(ex_table), DefaultGrid());
  auto best = std::max_element(sweep.rows.begin(), sweep.rows.end(),
                               [](const SweepRow& a, const SweepRow& b) { return a.rho < b.rho; });
  EXPECT_GT(best->alpha, 0.0);
  EXPECT_LT(best->alpha, 1.0);
  EXPECT_GT(best->rho, sweep.rows.front().rho);
  EXPECT_GT(best->rho, sweep.rows.back().rho);
}

}  // namespace
}  // namespace morphoseed
