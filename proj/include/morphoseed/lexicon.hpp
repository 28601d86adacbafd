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

// Structured morpheme lexicon: morpheme encodings, morphemic concepts
// (synonymous morpheme sets), and disyllabic word entries bound to them.

#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "morphoseed/error.hpp"
#include "morphoseed/text.hpp"

namespace morphoseed {

enum class PosTag {
  kNominal,
  kVerbal,
  kAdjectival,
  kAdverbial,
  kNumeral,
  kClassifier,
  kPronominal,
  kPrepositional,
  kAuxiliary,
  kConjunctional,
  kOnomatopoetic,
  kInterjection,
  kAffix,
};

inline constexpr int kNumPosTags = 13;

namespace detail {

struct PosNames {
  PosTag tag;
  const char* label;       // file spelling
  const char* mc_token;    // B-/E- marker spelling for morpheme POS
  const char* word_token;  // template slot 3 spelling for word POS
};

inline constexpr std::array<PosNames, kNumPosTags> kPosNames = {{
    {PosTag::kNominal, "nominal", "Nominal", "Noun"},
    {PosTag::kVerbal, "verbal", "Verbal", "Verb"},
    {PosTag::kAdjectival, "adjectival", "Adjectival", "Adj"},
    {PosTag::kAdverbial, "adverbial", "Adverbial", "Adv"},
    {PosTag::kNumeral, "numeral", "Numeral", "Num"},
    {PosTag::kClassifier, "classifier", "Classifier", "Clf"},
    {PosTag::kPronominal, "pronominal", "Pronominal", "Pron"},
    {PosTag::kPrepositional, "prepositional", "Prepositional", "Prep"},
    {PosTag::kAuxiliary, "auxiliary", "Auxiliary", "Aux"},
    {PosTag::kConjunctional, "conjunctional", "Conjunctional", "Conj"},
    {PosTag::kOnomatopoetic, "onomatopoetic", "Onomatopoetic", "Onom"},
    {PosTag::kInterjection, "interjection", "Interjection", "Intj"},
    {PosTag::kAffix, "affix", "Affix", "Affix"},
}};

}  // namespace detail

inline const char* ToString(PosTag p) {
  return detail::kPosNames[static_cast<int>(p)].label;
}

// Spelling used in the B-/E- marker slots, e.g. "Verbal".
inline const char* MorphemePosToken(PosTag p) {
  return detail::kPosNames[static_cast<int>(p)].mc_token;
}

// Spelling used in the word-POS slot, e.g. "Verb".
inline const char* WordPosToken(PosTag p) {
  return detail::kPosNames[static_cast<int>(p)].word_token;
}

inline std::optional<PosTag> ParsePosTag(std::string_view s) {
  for (const auto& n : detail::kPosNames) {
    if (s == n.label) return n.tag;
  }
  return std::nullopt;
}

inline const std::array<PosTag, kNumPosTags>& AllPosTags() {
  static const std::array<PosTag, kNumPosTags> tags = [] {
    std::array<PosTag, kNumPosTags> t{};
    for (int i = 0; i < kNumPosTags; ++i) t[i] = static_cast<PosTag>(i);
    return t;
  }();
  return tags;
}

// Word-formation patterns, in descending order of corpus frequency.
enum class Pattern {
  kModifierHead,
  kParallel,
  kVerbObject,
  kAdverbVerb,
  kSuffixation,
  kNoncompound,
  kVerbVerb,
  kPrefixation,
  kVerbComplement,
  kSubjectPredicate,
  kOverlapping,
  kPrepositionObject,
  kNounClassifier,
  kQuantifier,
  kClassifierClassifier,
};

inline constexpr int kNumPatterns = 15;

namespace detail {
inline constexpr std::array<const char*, kNumPatterns> kPatternNames = {
    "Modifier-Head",     "Parallel",           "Verb-Object",
    "Adverb-Verb",       "Suffixation",        "Noncompound",
    "Verb-Verb",         "Prefixation",        "Verb-Complement",
    "Subject-Predicate", "Overlapping",        "Preposition-Object",
    "Noun-Classifier",   "Quantifier",         "Classifier-Classifier",
};
}  // namespace detail

inline const char* ToString(Pattern p) {
  return detail::kPatternNames[static_cast<int>(p)];
}

inline std::optional<Pattern> ParsePattern(std::string_view s) {
  for (int i = 0; i < kNumPatterns; ++i) {
    if (s == detail::kPatternNames[i]) return static_cast<Pattern>(i);
  }
  return std::nullopt;
}

inline const std::array<Pattern, kNumPatterns>& AllPatterns() {
  static const std::array<Pattern, kNumPatterns> all = [] {
    std::array<Pattern, kNumPatterns> a{};
    for (int i = 0; i < kNumPatterns; ++i) a[i] = static_cast<Pattern>(i);
    return a;
  }();
  return all;
}

// H_X1_X2_X3 identity of a morpheme: host character, dictionary entry
// index, number of sememes in that entry, and the sememe's index.
struct MorphemeEncoding {
  std::string host;
  int entry_index = 0;
  int sememe_count = 0;
  int sememe_index = 0;

  // Canonical form, e.g. "树1_04_01".
  std::string Render() const {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%d_%02d_%02d", entry_index, sememe_count,
                  sememe_index);
    return host + buf;
  }

  friend bool operator==(const MorphemeEncoding&, const MorphemeEncoding&) = default;
};

// Parses "树1_04_01". X2/X3 may be given with or without zero padding.
inline MorphemeEncoding ParseEncoding(std::string_view s) {
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError("bad morpheme encoding '" + std::string(s) + "': " + why);
  };
  if (s.empty()) throw fail("empty host");
  int n = text::Utf8SequenceLength(static_cast<unsigned char>(s[0]));
  if (n == 0 || static_cast<size_t>(n) > s.size()) throw fail("invalid UTF-8");
  MorphemeEncoding e;
  e.host = std::string(s.substr(0, n));
  text::CodePoints(e.host);  // validates continuation bytes
  if (n == 1 && (e.host[0] < 0x21 || (e.host[0] >= '0' && e.host[0] <= '9') ||
                 e.host[0] == '_')) {
    throw fail("empty host");
  }
  auto rest = text::Split(s.substr(n), '_');
  if (rest.size() != 3) throw fail("expected H<X1>_<X2>_<X3>");
  auto x1 = text::ParseInt(rest[0]);
  auto x2 = text::ParseInt(rest[1]);
  auto x3 = text::ParseInt(rest[2]);
  if (!x1 || !x2 || !x3) throw fail("non-numeric field");
  if (*x1 < 1 || *x2 < 1 || *x3 < 1) throw fail("fields must be positive");
  if (*x3 > *x2) throw fail("sememe index exceeds sememe count");
  e.entry_index = *x1;
  e.sememe_count = *x2;
  e.sememe_index = *x3;
  return e;
}

struct Morpheme {
  MorphemeEncoding encoding;
  std::string definition;
  PosTag pos = PosTag::kNominal;
};

// A synonymous morpheme set. Its id is the canonical encoding of its
// first member.
struct MorphemicConcept {
  std::string id;
  std::vector<MorphemeEncoding> members;
  PosTag pos = PosTag::kNominal;
  std::string gloss;
};

struct WordEntry {
  std::string surface;
  PosTag pos = PosTag::kNominal;
  Pattern pattern = Pattern::kModifierHead;
  std::string first_mc;
  std::string second_mc;
};

// file:line of a record, used to prefix diagnostics.
struct SourceLocation {
  std::string file;
  int line = 0;

  std::string ToString() const { return file + ":" + std::to_string(line); }
};

// Validated, immutable lexicon. Construct with Lexicon::Create or
// LoadLexicon; both throw ValidationError listing every violation.
class Lexicon {
 public:
  static Lexicon Create(std::vector<Morpheme> morphemes,
                        std::vector<MorphemicConcept> mcs,
                        std::vector<WordEntry> words,
                        const std::vector<SourceLocation>& morpheme_src = {},
                        const std::vector<SourceLocation>& mc_src = {},
                        const std::vector<SourceLocation>& word_src = {}) {
    Lexicon lex;
    std::vector<std::string> errs;
    auto where = [](const std::vector<SourceLocation>& src, size_t i,
                    const char* kind) {
      if (i < src.size()) return src[i].ToString();
      return std::string(kind) + " #" + std::to_string(i + 1);
    };

    for (size_t i = 0; i < morphemes.size(); ++i) {
      auto& m = morphemes[i];
      std::string key = m.encoding.Render();
      if (m.definition.empty()) {
        errs.push_back(where(morpheme_src, i, "morpheme") + ": empty definition for " + key);
      }
      if (!lex.morphemes_.emplace(key, std::move(m)).second) {
        errs.push_back(where(morpheme_src, i, "morpheme") + ": duplicate encoding " + key);
      }
    }

    for (size_t i = 0; i < mcs.size(); ++i) {
      auto& mc = mcs[i];
      const std::string loc = where(mc_src, i, "mc");
      if (mc.members.empty()) {
        errs.push_back(loc + ": MC " + mc.id + " has no members");
        continue;
      }
      if (mc.members.front().Render() != mc.id) {
        errs.push_back(loc + ": MC id " + mc.id +
                       " does not equal its first member " + mc.members.front().Render());
      }
      if (lex.mc_index_.count(mc.id)) {
        errs.push_back(loc + ": duplicate MC id " + mc.id);
        continue;
      }
      for (const auto& enc : mc.members) {
        std::string key = enc.Render();
        auto it = lex.morphemes_.find(key);
        if (it == lex.morphemes_.end()) {
          errs.push_back(loc + ": MC " + mc.id + " references unknown morpheme " + key);
          continue;
        }
        if (it->second.pos != mc.pos) {
          errs.push_back(loc + ": morpheme " + key + " has POS " + ToString(it->second.pos) +
                         " but MC " + mc.id + " is " + ToString(mc.pos));
        }
        auto [owner, inserted] = lex.morpheme_to_mc_.emplace(key, mc.id);
        if (!inserted) {
          errs.push_back(loc + ": morpheme " + key + " already belongs to MC " + owner->second);
        }
      }
      lex.mc_index_.emplace(mc.id, lex.mcs_.size());
      lex.mcs_.push_back(std::move(mc));
    }

    for (size_t i = 0; i < words.size(); ++i) {
      const auto& w = words[i];
      const std::string loc = where(word_src, i, "word");
      std::vector<std::string> chars;
      try {
        chars = text::CodePoints(w.surface);
      } catch (const ParseError& e) {
        errs.push_back(loc + ": " + e.what());
        continue;
      }
      if (chars.size() != 2) {
        errs.push_back(loc + ": word '" + w.surface + "' is not disyllabic");
        continue;
      }
      bool ok = true;
      for (int slot = 0; slot < 2; ++slot) {
        const std::string& mc_id = slot == 0 ? w.first_mc : w.second_mc;
        const MorphemicConcept* mc = lex.FindMc(mc_id);
        if (mc == nullptr) {
          errs.push_back(loc + ": word " + w.surface + " references unknown MC " + mc_id);
          ok = false;
          continue;
        }
        bool bound = std::any_of(mc->members.begin(), mc->members.end(),
                                 [&](const MorphemeEncoding& e) { return e.host == chars[slot]; });
        if (!bound) {
          errs.push_back(loc + ": word " + w.surface + " character '" + chars[slot] +
                         "' is not the host of any member of MC " + mc_id);
          ok = false;
        }
      }
      if (ok) lex.words_.push_back(w);
    }

    if (!errs.empty()) throw ValidationError(std::move(errs));

    for (const auto& mc : lex.mcs_) lex.pos_index_[mc.pos].push_back(mc.id);
    for (size_t i = 0; i < lex.words_.size(); ++i) {
      lex.pattern_index_[lex.words_[i].pattern].push_back(i);
    }
    return lex;
  }

  const std::map<std::string, Morpheme>& morphemes() const { return morphemes_; }
  // MCs in file order.
  const std::vector<MorphemicConcept>& mcs() const { return mcs_; }
  const std::vector<WordEntry>& words() const { return words_; }

  const MorphemicConcept* FindMc(std::string_view id) const {
    auto it = mc_index_.find(std::string(id));
    return it == mc_index_.end() ? nullptr : &mcs_[it->second];
  }

  const MorphemicConcept& Mc(std::string_view id) const {
    const auto* mc = FindMc(id);
    if (mc == nullptr) throw Error("unknown MC " + std::string(id));
    return *mc;
  }

  bool IsMc(std::string_view id) const { return FindMc(id) != nullptr; }

  // MC that owns the morpheme with this canonical encoding, if any.
  std::optional<std::string> McOfMorpheme(const std::string& encoding) const {
    auto it = morpheme_to_mc_.find(encoding);
    if (it == morpheme_to_mc_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<std::string>& McsWithPos(PosTag p) const {
    static const std::vector<std::string> empty;
    auto it = pos_index_.find(p);
    return it == pos_index_.end() ? empty : it->second;
  }

  // Indices into words() carrying this pattern.
  const std::vector<size_t>& WordsWithPattern(Pattern p) const {
    static const std::vector<size_t> empty;
    auto it = pattern_index_.find(p);
    return it == pattern_index_.end() ? empty : it->second;
  }

 private:
  Lexicon() = default;

  std::map<std::string, Morpheme> morphemes_;
  std::vector<MorphemicConcept> mcs_;
  std::unordered_map<std::string, size_t> mc_index_;
  std::unordered_map<std::string, std::string> morpheme_to_mc_;
  std::vector<WordEntry> words_;
  std::map<PosTag, std::vector<std::string>> pos_index_;
  std::map<Pattern, std::vector<size_t>> pattern_index_;
};

// Reads the three TSV files of a lexicon. Parse problems and integrity
// violations are collected together and thrown as one ValidationError.
inline Lexicon LoadLexicon(const std::string& morpheme_file, const std::string& mc_file,
                           const std::string& word_file) {
  std::vector<std::string> errs;
  std::vector<Morpheme> morphemes;
  std::vector<MorphemicConcept> mcs;
  std::vector<WordEntry> words;
  std::vector<SourceLocation> msrc, csrc, wsrc;

  auto pos_field = [&](const std::string& s, const std::string& loc) -> std::optional<PosTag> {
    auto p = ParsePosTag(text::Trim(s));
    if (!p) errs.push_back(loc + ": unknown POS tag '" + s + "'");
    return p;
  };

  for (const auto& line : text::ReadDataLines(morpheme_file)) {
    SourceLocation src{morpheme_file, line.number};
    auto f = text::Split(line.text, '\t');
    if (f.size() != 3) {
      errs.push_back(src.ToString() + ": expected 3 tab-separated fields");
      continue;
    }
    try {
      Morpheme m;
      m.encoding = ParseEncoding(text::Trim(f[0]));
      auto pos = pos_field(f[1], src.ToString());
      if (!pos) continue;
      m.pos = *pos;
      m.definition = std::string(text::Trim(f[2]));
      morphemes.push_back(std::move(m));
      msrc.push_back(src);
    } catch (const ParseError& e) {
      errs.push_back(src.ToString() + ": " + e.what());
    }
  }

  for (const auto& line : text::ReadDataLines(mc_file)) {
    SourceLocation src{mc_file, line.number};
    auto f = text::Split(line.text, '\t');
    if (f.size() != 3 && f.size() != 4) {
      errs.push_back(src.ToString() + ": expected 3 or 4 tab-separated fields");
      continue;
    }
    try {
      MorphemicConcept mc;
      mc.id = ParseEncoding(text::Trim(f[0])).Render();
      auto pos = pos_field(f[1], src.ToString());
      if (!pos) continue;
      mc.pos = *pos;
      for (const auto& m : text::Split(f[2], ',')) {
        auto t = text::Trim(m);
        if (!t.empty()) mc.members.push_back(ParseEncoding(t));
      }
      if (f.size() == 4) mc.gloss = std::string(text::Trim(f[3]));
      mcs.push_back(std::move(mc));
      csrc.push_back(src);
    } catch (const ParseError& e) {
      errs.push_back(src.ToString() + ": " + e.what());
    }
  }

  for (const auto& line : text::ReadDataLines(word_file)) {
    SourceLocation src{word_file, line.number};
    auto f = text::Split(line.text, '\t');
    if (f.size() != 5) {
      errs.push_back(src.ToString() + ": expected 5 tab-separated fields");
      continue;
    }
    try {
      WordEntry w;
      w.surface = std::string(text::Trim(f[0]));
      auto pos = pos_field(f[1], src.ToString());
      auto pat = ParsePattern(text::Trim(f[2]));
      if (!pat) errs.push_back(src.ToString() + ": unknown word-formation pattern '" + f[2] + "'");
      if (!pos || !pat) continue;
      w.pos = *pos;
      w.pattern = *pat;
      w.first_mc = ParseEncoding(text::Trim(f[3])).Render();
      w.second_mc = ParseEncoding(text::Trim(f[4])).Render();
      words.push_back(std::move(w));
      wsrc.push_back(src);
    } catch (const ParseError& e) {
      errs.push_back(src.ToString() + ": " + e.what());
    }
  }

  std::optional<Lexicon> lex;
  try {
    lex.emplace(Lexicon::Create(std::move(morphemes), std::move(mcs), std::move(words), msrc,
                                csrc, wsrc));
  } catch (const ValidationError& e) {
    errs.insert(errs.end(), e.diagnostics().begin(), e.diagnostics().end());
  }
  if (!errs.empty()) throw ValidationError(std::move(errs));
  return std::move(*lex);
}

// Loads <dir>/morphemes.tsv, <dir>/mcs.tsv and <dir>/words.tsv.
inline Lexicon LoadLexiconDir(const std::filesystem::path& dir) {
  return LoadLexicon((dir / "morphemes.tsv").string(), (dir / "mcs.tsv").string(),
                     (dir / "words.tsv").string());
}

struct LexiconStats {
  size_t characters = 0;
  size_t morphemes = 0;
  size_t mcs = 0;
  size_t words = 0;
  std::map<PosTag, size_t> mcs_by_pos;
  std::map<Pattern, size_t> pattern_counts;
  std::map<Pattern, double> pattern_percent;
};

inline LexiconStats ComputeStats(const Lexicon& lex) {
  LexiconStats s;
  std::set<std::string> hosts;
  for (const auto& [key, m] : lex.morphemes()) hosts.insert(m.encoding.host);
  s.characters = hosts.size();
  s.morphemes = lex.morphemes().size();
  s.mcs = lex.mcs().size();
  s.words = lex.words().size();
  for (const auto& mc : lex.mcs()) ++s.mcs_by_pos[mc.pos];
  for (const auto& w : lex.words()) ++s.pattern_counts[w.pattern];
  for (const auto& [p, n] : s.pattern_counts) {
    s.pattern_percent[p] = 100.0 * static_cast<double>(n) / static_cast<double>(s.words);
  }
  return s;
}

// TSV report: `section \t key \t value` rows.
inline std::string FormatStats(const LexiconStats& s) {
  std::ostringstream out;
  out << "count\tcharacters\t" << s.characters << '\n';
  out << "count\tmorphemes\t" << s.morphemes << '\n';
  out << "count\tmcs\t" << s.mcs << '\n';
  out << "count\twords\t" << s.words << '\n';
  for (const auto& [p, n] : s.mcs_by_pos) out << "mcs_by_pos\t" << ToString(p) << '\t' << n << '\n';
  for (const auto& p : AllPatterns()) {
    auto it = s.pattern_counts.find(p);
    size_t n = it == s.pattern_counts.end() ? 0 : it->second;
    double pct = n == 0 ? 0.0 : s.pattern_percent.at(p);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", pct);
    out << "pattern\t" << ToString(p) << '\t' << n << '\t' << buf << '\n';
  }
  return out.str();
}

}  // namespace morphoseed
