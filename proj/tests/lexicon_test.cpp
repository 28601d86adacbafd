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
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "morphoseed/clustering.hpp"
#include "morphoseed/lexicon.hpp"
#include "test_util.hpp"

namespace morphoseed {
namespace {

using testing::FixtureDir;
using testing::M;
using testing::Mc;
using testing::TempDir;
using testing::WriteText;

bool AnyContains(const std::vector<std::string>& diags, const std::string& needle) {
  return std::any_of(diags.begin(), diags.end(),
                     [&](const std::string& d) { return d.find(needle) != std::string::npos; });
}

std::vector<std::string> CreateErrors(std::vector<Morpheme> ms, std::vector<MorphemicConcept> mcs,
                                      std::vector<WordEntry> ws) {
  try {
    Lexicon::Create(std::move(ms), std::move(mcs), std::move(ws));
  } catch (const ValidationError& e) {
    return e.diagnostics();
  }
  return {};
}

TEST(EncodingTest, ParsesFields) {
  auto e = ParseEncoding("树1_04_01");
  EXPECT_EQ(e.host, "树");
  EXPECT_EQ(e.entry_index, 1);
  EXPECT_EQ(e.sememe_count, 4);
  EXPECT_EQ(e.sememe_index, 1);
}

TEST(EncodingTest, RejectsIndexAboveCount) {
  EXPECT_THROW(ParseEncoding("树1_04_05"), ParseError);
}

TEST(EncodingTest, RoundTrip) { EXPECT_EQ(ParseEncoding("木1_07_01").Render(), "木1_07_01"); }

TEST(EncodingTest, CanonicalizesPadding) {
  EXPECT_EQ(ParseEncoding("树1_4_1").Render(), "树1_04_01");
  EXPECT_EQ(ParseEncoding("树12_10_10").Render(), "树12_10_10");
}

TEST(EncodingTest, RejectsMalformed) {
  for (const char* bad : {"", "树", "树1_04", "树1_04_01_02", "树a_04_01", "树1_00_00", "树0_01_01",
                          "_1_01_01", "1_01_01", "树1_-1_01"}) {
    EXPECT_THROW(ParseEncoding(bad), ParseError) << bad;
  }
}

TEST(EncodingTest, RenderParseIdentityOverGeneratedEncodings) {
  std::mt19937_64 rng(7);
  const std::vector<std::string> hosts = {"树", "木", "a", "水", "𠀀"};
  for (int i = 0; i < 2000; ++i) {
    MorphemeEncoding e;
    e.host = hosts[rng() % hosts.size()];
    e.entry_index = 1 + static_cast<int>(rng() % 9);
    e.sememe_count = 1 + static_cast<int>(rng() % 40);
    e.sememe_index = 1 + static_cast<int>(rng() % e.sememe_count);
    EXPECT_EQ(ParseEncoding(e.Render()), e);
  }
}

TEST(PosTagTest, ClosedSetOfThirteen) {
  std::set<std::string> labels;
  for (PosTag p : AllPosTags()) {
    labels.insert(ToString(p));
    EXPECT_EQ(ParsePosTag(ToString(p)), p);
  }
  EXPECT_EQ(labels.size(), 13u);
  EXPECT_FALSE(ParsePosTag("verb").has_value());
  EXPECT_FALSE(ParsePosTag("Nominal").has_value());
}

TEST(PatternTest, ClosedSetOfFifteen) {
  std::set<std::string> names;
  for (Pattern p : AllPatterns()) {
    names.insert(ToString(p));
    EXPECT_EQ(ParsePattern(ToString(p)), p);
  }
  EXPECT_EQ(names.size(), 15u);
  EXPECT_TRUE(names.count("Verb-Object"));
  EXPECT_TRUE(names.count("Classifier-Classifier"));
  EXPECT_FALSE(ParsePattern("verb-object").has_value());
}

TEST(LexiconTest, SmallLexiconIndexes) {
  auto lex = testing::SmallLexicon();
  EXPECT_EQ(lex.mcs().size(), 4u);
  EXPECT_EQ(lex.words().size(), 3u);
  EXPECT_EQ(lex.McOfMorpheme("植1_04_01"), "养1_11_02");
  EXPECT_EQ(lex.McOfMorpheme("树1_04_01"), "木1_07_01");
  EXPECT_FALSE(lex.McOfMorpheme("水1_01_01").has_value());
  EXPECT_EQ(lex.McsWithPos(PosTag::kVerbal).size(), 2u);
  EXPECT_TRUE(lex.McsWithPos(PosTag::kAffix).empty());
  EXPECT_EQ(lex.WordsWithPattern(Pattern::kVerbObject).size(), 2u);
  EXPECT_THROW(lex.Mc("nope"), Error);
}

TEST(LexiconTest, PlantingWordBindsThroughSecondaryMembers) {
  // 植 is a member of the 养 MC and 树 of the 木 MC.
  auto lex = testing::SmallLexicon();
  const auto& w = lex.words().front();
  EXPECT_EQ(w.surface, "植树");
  EXPECT_EQ(w.first_mc, "养1_11_02");
  EXPECT_EQ(w.second_mc, "木1_07_01");
}

TEST(LexiconTest, RejectsBindingWithoutHostCharacter) {
  auto errs = CreateErrors(
      {M("养1_11_02", PosTag::kVerbal), M("木1_07_01", PosTag::kNominal),
       M("树1_04_01", PosTag::kNominal)},
      {Mc({"养1_11_02"}, PosTag::kVerbal), Mc({"木1_07_01", "树1_04_01"}, PosTag::kNominal)},
      {{"植树", PosTag::kVerbal, Pattern::kVerbObject, "养1_11_02", "木1_07_01"}});
  ASSERT_EQ(errs.size(), 1u);
  EXPECT_TRUE(AnyContains(errs, "'植' is not the host"));
}

TEST(LexiconTest, ReportsEveryViolation) {
  auto errs = CreateErrors(
      {M("养1_11_02", PosTag::kVerbal), M("养1_11_02", PosTag::kVerbal),
       M("植1_04_01", PosTag::kNominal), M("木1_07_01", PosTag::kNominal, ""),
       M("树1_04_01", PosTag::kNominal)},
      {Mc({"养1_11_02", "植1_04_01"}, PosTag::kVerbal), Mc({"木1_07_01"}, PosTag::kNominal),
       Mc({"树1_04_01", "木1_07_01"}, PosTag::kNominal), Mc({"水1_01_01"}, PosTag::kNominal)},
      {{"植树", PosTag::kVerbal, Pattern::kVerbObject, "养1_11_02", "火1_01_01"},
       {"植", PosTag::kVerbal, Pattern::kVerbObject, "养1_11_02", "木1_07_01"}});
  EXPECT_TRUE(AnyContains(errs, "duplicate encoding 养1_11_02"));
  EXPECT_TRUE(AnyContains(errs, "empty definition"));
  EXPECT_TRUE(AnyContains(errs, "has POS nominal but MC 养1_11_02 is verbal"));
  EXPECT_TRUE(AnyContains(errs, "already belongs to MC 木1_07_01"));
  EXPECT_TRUE(AnyContains(errs, "unknown morpheme 水1_01_01"));
  EXPECT_TRUE(AnyContains(errs, "unknown MC 火1_01_01"));
  EXPECT_TRUE(AnyContains(errs, "not disyllabic"));
}

TEST(LexiconTest, RejectsIdOtherThanFirstMember) {
  auto mc = Mc({"木1_07_01", "树1_04_01"}, PosTag::kNominal);
  mc.id = "树1_04_01";
  auto errs = CreateErrors({M("木1_07_01", PosTag::kNominal), M("树1_04_01", PosTag::kNominal)},
                           {mc}, {});
  EXPECT_TRUE(AnyContains(errs, "does not equal its first member"));
}

TEST(LexiconTest, NoncompoundMayBindOneMcTwice) {
  auto errs = CreateErrors({M("蝴1_01_01", PosTag::kNominal), M("蝶1_01_01", PosTag::kNominal)},
                           {Mc({"蝴1_01_01", "蝶1_01_01"}, PosTag::kNominal)},
                           {{"蝴蝶", PosTag::kNominal, Pattern::kNoncompound, "蝴1_01_01", "蝴1_01_01"}});
  EXPECT_TRUE(errs.empty());
}

TEST(LoadLexiconTest, FixtureLoadsCleanly) {
  auto lex = LoadLexiconDir(FixtureDir());
  EXPECT_GE(lex.words().size(), 200u);
  EXPECT_GE(lex.mcs().size(), 50u);
  // Morpheme -> MC assignment is a partition of the bound morphemes.
  std::set<std::string> seen;
  for (const auto& mc : lex.mcs()) {
    for (const auto& m : mc.members) EXPECT_TRUE(seen.insert(m.Render()).second) << m.Render();
  }
  // Every word's characters are hosts of its bound MCs.
  for (const auto& w : lex.words()) {
    auto chars = text::CodePoints(w.surface);
    ASSERT_EQ(chars.size(), 2u);
    for (int slot = 0; slot < 2; ++slot) {
      const auto& mc = lex.Mc(slot == 0 ? w.first_mc : w.second_mc);
      EXPECT_TRUE(std::any_of(mc.members.begin(), mc.members.end(),
                              [&](const MorphemeEncoding& e) { return e.host == chars[slot]; }))
          << w.surface;
    }
  }
}

TEST(LoadLexiconTest, DiagnosticsCarryFileAndLine) {
  TempDir dir;
  WriteText(dir / "morphemes.tsv",
            "# encoding\tpos\tdefinition\n"
            "养1_11_02\tverbal\t栽种\n"
            "木1_07_01\tnominal\t树木\n"
            "水1_01_01\tliquid\t水\n"
            "树1_04_09\tnominal\t树\n");
  WriteText(dir / "mcs.tsv", "养1_11_02\tverbal\t养1_11_02\n木1_07_01\tnominal\t木1_07_01\n");
  WriteText(dir / "words.tsv",
            "植木\tverbal\tVerb-Object\t养1_11_02\t木1_07_01\n"
            "养木\tverbal\tVerb Object\t养1_11_02\t木1_07_01\n");
  try {
    LoadLexiconDir(dir.path());
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    const auto& d = e.diagnostics();
    const std::string m = (dir / "morphemes.tsv").string();
    const std::string w = (dir / "words.tsv").string();
    EXPECT_TRUE(AnyContains(d, m + ":4: unknown POS tag 'liquid'"));
    EXPECT_TRUE(AnyContains(d, m + ":5: bad morpheme encoding"));
    EXPECT_TRUE(AnyContains(d, w + ":2: unknown word-formation pattern"));
    EXPECT_TRUE(AnyContains(d, w + ":1: word 植木 character '植'"));
  }
}

TEST(LoadLexiconTest, LoadIsDeterministic) {
  auto a = LoadLexiconDir(FixtureDir());
  auto b = LoadLexiconDir(FixtureDir());
  ASSERT_EQ(a.words().size(), b.words().size());
  for (size_t i = 0; i < a.words().size(); ++i) EXPECT_EQ(a.words()[i].surface, b.words()[i].surface);
  ASSERT_EQ(a.mcs().size(), b.mcs().size());
  for (size_t i = 0; i < a.mcs().size(); ++i) EXPECT_EQ(a.mcs()[i].id, b.mcs()[i].id);
}

TEST(StatsTest, SmallLexiconCounts) {
  auto s = ComputeStats(testing::SmallLexicon());
  EXPECT_EQ(s.morphemes, 6u);
  EXPECT_EQ(s.characters, 6u);
  EXPECT_EQ(s.mcs, 4u);
  EXPECT_EQ(s.words, 3u);
  EXPECT_EQ(s.mcs_by_pos.at(PosTag::kVerbal), 2u);
  EXPECT_EQ(s.pattern_counts.at(Pattern::kVerbObject), 2u);
  EXPECT_NEAR(s.pattern_percent.at(Pattern::kParallel), 100.0 / 3.0, 1e-12);
}

TEST(StatsTest, FixturePercentagesSumToHundred) {
  auto lex = LoadLexiconDir(FixtureDir());
  auto s = ComputeStats(lex);
  EXPECT_EQ(s.words, lex.words().size());
  EXPECT_EQ(s.mcs, lex.mcs().size());
  double total = 0;
  for (const auto& [p, pct] : s.pattern_percent) total += pct;
  EXPECT_NEAR(total, 100.0, 0.1);
  auto report = FormatStats(s);
  EXPECT_NE(report.find("count\twords\t" + std::to_string(s.words) + "\n"), std::string::npos);
}

// Dice over unigram+bigram code-point multisets, computed with plain
// vectors and repeated removal.
double BruteDice(const std::string& a, const std::string& b) {
  auto grams = [](const std::string& s) {
    auto cps = text::CodePoints(s);
    std::vector<std::string> g(cps.begin(), cps.end());
    for (size_t i = 0; i + 1 < cps.size(); ++i) g.push_back(cps[i] + cps[i + 1]);
    return g;
  };
  auto ga = grams(a), gb = grams(b);
  const double total = static_cast<double>(ga.size() + gb.size());
  if (total == 0) return 0;
  int shared = 0;
  auto rest = gb;
  for (const auto& t : ga) {
    auto it = std::find(rest.begin(), rest.end(), t);
    if (it != rest.end()) {
      ++shared;
      rest.erase(it);
    }
  }
  return 2.0 * shared / total;
}

TEST(ClusteringTest, IdenticalGlossesCluster) {
  auto c = SuggestSmsClusters({{"甲1_01_01", "种植"}, {"乙1_01_01", "种植"}}, 0.5);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0], (std::vector<std::string>{"乙1_01_01", "甲1_01_01"}));
}

TEST(ClusteringTest, OverlappingGlossesMatchBruteForceDice) {
  const std::string a = "树立，建立", b = "建立";
  const double oracle = BruteDice(a, b);
  EXPECT_DOUBLE_EQ(DiceCoefficient(GlossTokens(a), GlossTokens(b)), oracle);
  EXPECT_DOUBLE_EQ(oracle, 0.5);
  auto c = SuggestSmsClusters({{"树1_04_03", a}, {"建1_03_01", b}}, 0.5);
  EXPECT_EQ(c.size(), 1u);
  EXPECT_EQ(SuggestSmsClusters({{"树1_04_03", a}, {"建1_03_01", b}}, 0.51).size(), 2u);
}

TEST(ClusteringTest, DisjointGlossesStaySingletons) {
  auto c = SuggestSmsClusters({{"a1_01_01", "水"}, {"b1_01_01", "火"}, {"c1_01_01", "土木"}}, 0.1);
  EXPECT_EQ(c.size(), 3u);
  EXPECT_TRUE(SuggestSmsClusters({}, 0.5).empty());
}

TEST(ClusteringTest, DiceAgreesWithBruteForceOnRandomGlosses) {
  std::mt19937_64 rng(11);
  const std::vector<std::string> alphabet = {"树", "木", "立", "建", "，", "草", "水"};
  auto random_gloss = [&] {
    std::string s;
    int n = static_cast<int>(rng() % 7);
    for (int i = 0; i < n; ++i) s += alphabet[rng() % alphabet.size()];
    return s;
  };
  for (int i = 0; i < 500; ++i) {
    auto a = random_gloss(), b = random_gloss();
    EXPECT_NEAR(DiceCoefficient(GlossTokens(a), GlossTokens(b)), BruteDice(a, b), 1e-15) << a << "|" << b;
  }
}

TEST(ClusteringTest, PartitionInvariantUnderPermutation) {
  std::mt19937_64 rng(5);
  const std::vector<std::string> alphabet = {"树", "木", "立", "建", "草"};
  std::vector<GlossEntry> entries;
  for (int i = 0; i < 30; ++i) {
    std::string g;
    for (int k = 0; k < 3; ++k) g += alphabet[rng() % alphabet.size()];
    entries.push_back({"x" + std::to_string(i) + "_01_01", g});
  }
  auto base = SuggestSmsClusters(entries, 0.6);
  std::multiset<std::string> all;
  for (const auto& c : base) all.insert(c.begin(), c.end());
  EXPECT_EQ(all.size(), entries.size());
  EXPECT_EQ(std::set<std::string>(all.begin(), all.end()).size(), entries.size());
  for (int t = 0; t < 10; ++t) {
    std::shuffle(entries.begin(), entries.end(), rng);
    EXPECT_EQ(SuggestSmsClusters(entries, 0.6), base);
  }
}

}  // namespace
}  // namespace morphoseed
