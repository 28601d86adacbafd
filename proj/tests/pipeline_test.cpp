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
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "morphoseed/pipeline.hpp"
#include "test_util.hpp"

namespace morphoseed {
namespace {

namespace fs = std::filesystem;
using testing::ReadText;

PipelineConfig FixtureConfig(const fs::path& out) {
  PipelineConfig c;
  c.lexicon = testing::FixtureDir().string();
  c.pairs = {(testing::FixtureDir() / "pairs.tsv").string()};
  c.external_corpus = (testing::FixtureDir() / "text.txt").string();
  c.out = out.string();
  return c;
}

PipelineResult Quiet(const PipelineConfig& c, bool force = false) {
  static std::ostringstream sink;
  return RunPipeline(c, {force, &sink});
}

bool Has(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

TEST(PipelineConfigTest, SetParsesEveryKey) {
  PipelineConfig c;
  c.Set("threshold", "0.6");
  c.Set("dedup", "yes");
  c.Set("model", "skip-gram");
  c.Set("dim", "8");
  c.Set("seed", "18446744073709551615");
  c.Set("pairs", "a.tsv, b.tsv,");
  c.Set("external_kind", "cbow");
  c.Set("zscore", "1");
  EXPECT_EQ(c.threshold, 0.6);
  EXPECT_TRUE(c.dedup);
  EXPECT_EQ(c.train.model, ModelKind::kSkipGram);
  EXPECT_EQ(c.train.dim, 8);
  EXPECT_EQ(c.seed(), 18446744073709551615ULL);
  EXPECT_EQ(c.pairs, (std::vector<std::string>{"a.tsv", "b.tsv"}));
  EXPECT_EQ(c.external.model, ModelKind::kCbow);
  EXPECT_TRUE(c.zscore);
  EXPECT_THROW(c.Set("thresold", "0.5"), ParseError);
  EXPECT_THROW(c.Set("dim", "eight"), ParseError);
  EXPECT_THROW(c.Set("alpha", "nan"), ParseError);
  EXPECT_THROW(c.Set("dedup", "maybe"), ParseError);
  EXPECT_THROW(c.Set("seed", "-1"), ParseError);
  EXPECT_THROW(c.Set("model", "glove"), ParseError);
}

TEST(PipelineConfigTest, TextFormRoundTrips) {
  PipelineConfig c = FixtureConfig("/tmp/x");
  c.Set("alpha", "0.4");
  c.Set("epochs", "7");
  const std::string text = c.ToText();
  PipelineConfig back;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    auto eq = line.find('=');
    back.Set(text::Trim(std::string_view(line).substr(0, eq)), std::string_view(line).substr(eq + 1));
  }
  EXPECT_EQ(back.ToText(), text);
  EXPECT_NE(text.find("hierarchy = " + (testing::FixtureDir() / "hierarchy.tsv").string() + "\n"),
            std::string::npos);
}

TEST(PipelineConfigTest, FileResolvesRelativePathsAndReportsLines) {
  testing::TempDir dir;
  fs::create_directories(dir / "sub");
  testing::WriteText(dir / "sub" / "run.conf",
                     "# comment\nlexicon = ../lex\npairs = a.tsv, /abs/b.tsv\nout = out\nalpha = 0.5\n");
  auto c = LoadPipelineConfig(dir / "sub" / "run.conf");
  EXPECT_EQ(c.lexicon, (dir / "lex").string());
  EXPECT_EQ(c.pairs, (std::vector<std::string>{(dir / "sub" / "a.tsv").string(), "/abs/b.tsv"}));
  EXPECT_EQ(c.out, (dir / "sub" / "out").string());
  EXPECT_EQ(c.alpha, 0.5);

  testing::WriteText(dir / "bad.conf", "alpha = 0.5\nnot a setting\nbogus = 1\n");
  try {
    LoadPipelineConfig(dir / "bad.conf");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.diagnostics().size(), 2u);
    EXPECT_EQ(e.diagnostics()[0], (dir / "bad.conf").string() + ":2: expected key = value");
    EXPECT_NE(e.diagnostics()[1].find(":3: unknown config key 'bogus'"), std::string::npos);
  }
}

TEST(PipelineTest, SmokeRunProducesEveryArtifact) {
  testing::TempDir dir;
  auto out = dir / "run";
  auto r = Quiet(FixtureConfig(out));
  for (const char* stage : {"validate", "generate", "train", "compose", "external", "eval"}) {
    EXPECT_TRUE(Has(r.executed, stage)) << stage;
    EXPECT_TRUE(fs::exists(out / stage / "stamp")) << stage;
    EXPECT_TRUE(fs::exists(out / stage / "pipeline.conf")) << stage;
  }
  EXPECT_TRUE(fs::exists(Pipeline::ModelPath(out)));
  EXPECT_TRUE(fs::exists(ContextVectorsPath(Pipeline::ModelPath(out))));
  EXPECT_TRUE(fs::exists(Pipeline::WordVectorsPath(out)));
  EXPECT_TRUE(fs::exists(out / "eval" / "sweep-pairs.csv"));

  auto summary = nlohmann::json::parse(ReadText(Pipeline::SummaryPath(out)));
  EXPECT_EQ(summary, r.summary);
  EXPECT_EQ(summary["compose"]["coverage"].get<double>(), 1.0);
  EXPECT_EQ(summary["seed"].get<std::uint64_t>(), 42u);
  ASSERT_EQ(summary["eval"].size(), 1u);
  const auto& ds = summary["eval"][0];
  for (const char* k : {"internal", "external", "hybrid"}) {
    ASSERT_TRUE(ds[k]["rho"].is_number()) << k << ": " << ds[k].dump();
    EXPECT_LE(std::abs(ds[k]["rho"].get<double>()), 1.0);
  }
  auto losses = summary["train"]["epoch_loss"].get<std::vector<double>>();
  ASSERT_EQ(losses.size(), 5u);
  EXPECT_LT(losses.back(), losses.front());
}

TEST(PipelineTest, TwoRunsAreByteIdentical) {
  testing::TempDir dir;
  Quiet(FixtureConfig(dir / "a"));
  Quiet(FixtureConfig(dir / "b"));
  for (const fs::path rel : {"train/model.vec", "train/model.vec.ctx", "compose/words.vec",
                             "external/baseline.vec", "eval/eval.json", "summary.json",
                             "generate/part-000-00000.txt"}) {
    EXPECT_EQ(ReadText(dir / "a" / rel), ReadText(dir / "b" / rel)) << rel;
  }
}

TEST(PipelineTest, RerunSkipsAndForceRebuilds) {
  testing::TempDir dir;
  auto cfg = FixtureConfig(dir / "run");
  Quiet(cfg);
  const auto model = ReadText(Pipeline::ModelPath(dir / "run"));

  auto again = Quiet(cfg);
  for (const char* stage : {"generate", "train", "compose", "external", "eval"}) {
    EXPECT_TRUE(Has(again.skipped, stage)) << stage;
    EXPECT_FALSE(Has(again.executed, stage)) << stage;
  }

  cfg.Set("alpha", "0.5");
  auto changed = Quiet(cfg);
  EXPECT_TRUE(Has(changed.skipped, "train"));
  EXPECT_TRUE(Has(changed.executed, "eval"));
  EXPECT_EQ(changed.summary["eval"][0]["hybrid"].is_object(), true);

  fs::remove(Pipeline::WordVectorsPath(dir / "run"));
  auto repaired = Quiet(cfg);
  EXPECT_TRUE(Has(repaired.executed, "compose"));
  EXPECT_TRUE(Has(repaired.skipped, "train"));

  auto forced = Quiet(cfg, true);
  for (const char* stage : {"generate", "train", "compose", "external", "eval"}) {
    EXPECT_TRUE(Has(forced.executed, stage)) << stage;
  }
  EXPECT_EQ(ReadText(Pipeline::ModelPath(dir / "run")), model);
}

TEST(PipelineTest, MissingHierarchyFailsValidationBeforeWriting) {
  testing::TempDir dir;
  auto cfg = FixtureConfig(dir / "run");
  cfg.hierarchy = (dir / "nope.tsv").string();
  try {
    Quiet(cfg);
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "validate");
    EXPECT_EQ(e.exit_code(), kExitValidation);
    ASSERT_EQ(e.diagnostics().size(), 1u);
    EXPECT_EQ(e.diagnostics()[0], "hierarchy file not found: " + cfg.hierarchy);
  }
  EXPECT_FALSE(fs::exists(dir / "run"));
}

TEST(PipelineTest, ConflictingOrOutOfRangeSettingsAreValidationErrors) {
  testing::TempDir dir;
  auto cfg = FixtureConfig(dir / "run");
  cfg.external_model = (testing::FixtureDir() / "pairs.tsv").string();
  cfg.threshold = 1.5;
  try {
    Quiet(cfg);
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.exit_code(), kExitValidation);
    EXPECT_EQ(e.diagnostics().size(), 2u);
  }
  cfg = FixtureConfig("");
  try {
    Quiet(cfg);
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.exit_code(), kExitValidation);
  }
}

TEST(PipelineTest, BadExternalModelIsValidationError) {
  testing::TempDir dir;
  auto cfg = FixtureConfig(dir / "run");
  cfg.external_corpus.clear();
  testing::WriteText(dir / "ext.vec", "2 3\na 1 2\n");
  cfg.external_model = (dir / "ext.vec").string();
  try {
    Quiet(cfg);
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "eval");
    EXPECT_EQ(e.exit_code(), kExitValidation);
  }
}

}  // namespace
}  // namespace morphoseed
