// tests/unit/pruning_test.cc

// Copyright 2026  The lexforge Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "lexforge/pruning.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <unordered_map>

#include "lexforge/error.h"
#include "lexforge/lexicon.h"

namespace lexforge {
namespace {

AlignmentObservation Obs(const std::string &word, const std::string &pron) {
  AlignmentObservation o;
  o.utterance_id = "u1";
  o.conversation_id = "c1";
  o.speaker_id = "c1_A";
  o.word = word;
  o.pron = ParsePronunciation(pron);
  o.duration = 0.1;
  return o;
}

std::vector<AlignmentObservation> Repeat(const std::string &word, const std::string &pron,
                                         int n) {
  return std::vector<AlignmentObservation>(static_cast<std::size_t>(n), Obs(word, pron));
}

void Append(std::vector<AlignmentObservation> &to, std::vector<AlignmentObservation> more) {
  to.insert(to.end(), more.begin(), more.end());
}

TEST(IngestAlignments, Basics) {
  auto one = IngestAlignments("u1\tc1\tc1_A\tund\tU n t\t0.5\t0.2\n");
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].word, "und");
  EXPECT_EQ(one[0].pron, (Pronunciation{"U", "n", "t"}));
  EXPECT_DOUBLE_EQ(one[0].start, 0.5);
  EXPECT_TRUE(IngestAlignments("").empty());
  try {
    IngestAlignments("u1\tc1\tc1_A\tund\t0.5\t0.2\n");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_EQ(e.line(), 1u);
  }
  EXPECT_THROW(IngestAlignments("u1\tc1\tc1_A\tund\tU n t\t0.5\t0\n"), Error);
  PhoneInventory inv = ParseInventory("U vowel\nn nasal place=alveolar voiced\nt plosive place=alveolar\n");
  try {
    IngestAlignments("u1\tc1\tc1_A\tund\tU n d\t0.5\t0.2\n", &inv);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownPhone);
  }
}

TEST(CountVariants, Counting) {
  std::vector<AlignmentObservation> obs = Repeat("und", "U n t", 3);
  Append(obs, Repeat("und", "U n", 1));
  PronProbTable t = CountVariants(obs);
  EXPECT_EQ(t.Count("und", {"U", "n", "t"}), 3u);
  EXPECT_EQ(t.Count("und", {"U", "n"}), 1u);
  EXPECT_EQ(t.Count("und", {"n"}), 0u);
  EXPECT_EQ(t.total_tokens(), 4u);
  EXPECT_TRUE(CountVariants({}).words().empty());
}

TEST(CountVariants, MatchesHashRecountAndIsPermutationInvariant) {
  std::mt19937 gen(11);
  const std::vector<std::string> words{"a", "b", "c", "d", "e"};
  const std::vector<std::string> prons{"x", "x y", "y", "y z", "z x y"};
  std::vector<AlignmentObservation> obs;
  std::unordered_map<std::string, std::uint64_t> oracle;
  for (int i = 0; i < 10000; ++i) {
    const auto &w = words[gen() % words.size()];
    const auto &p = prons[gen() % prons.size()];
    obs.push_back(Obs(w, p));
    ++oracle[w + "|" + p];
  }
  PronProbTable t = CountVariants(obs);
  std::uint64_t seen = 0;
  for (const auto &[word, list] : t.words()) {
    for (const auto &pc : list) {
      EXPECT_EQ(pc.count, oracle.at(word + "|" + FormatPronunciation(pc.pron)));
      ++seen;
    }
  }
  EXPECT_EQ(seen, oracle.size());
  std::shuffle(obs.begin(), obs.end(), gen);
  EXPECT_EQ(WritePronProbTable(CountVariants(obs)), WritePronProbTable(t));
}

TEST(EstimateProbs, Schemes) {
  std::vector<AlignmentObservation> obs = Repeat("w", "a", 8);
  Append(obs, Repeat("w", "b", 2));
  Append(obs, Repeat("s", "c", 3));
  PronProbTable counts = CountVariants(obs);
  PronProbTable sum = EstimateProbs(counts, ProbScheme::kSumNormalized);
  EXPECT_DOUBLE_EQ(*sum.Probability("w", {"a"}), 0.8);
  EXPECT_DOUBLE_EQ(*sum.Probability("w", {"b"}), 0.2);
  EXPECT_EQ(*sum.Probability("s", {"c"}), 1.0);
  PronProbTable max = EstimateProbs(counts, ProbScheme::kMaxNormalized);
  EXPECT_EQ(*max.Probability("w", {"a"}), 1.0);
  EXPECT_DOUBLE_EQ(*max.Probability("w", {"b"}), 0.25);
  EXPECT_EQ(*max.Probability("s", {"c"}), 1.0);
  EXPECT_FALSE(counts.Probability("w", {"a"}));
}

TEST(EstimateProbs, SumNormalizedInvariants) {
  std::mt19937 gen(5);
  std::vector<AlignmentObservation> obs;
  for (int i = 0; i < 2000; ++i)
    obs.push_back(Obs("w" + std::to_string(gen() % 20), std::string(1, "abcdef"[gen() % 6])));
  PronProbTable probs = EstimateProbs(CountVariants(obs), ProbScheme::kSumNormalized);
  for (const auto &[word, list] : probs.words()) {
    double total = 0.0;
    std::uint64_t tokens = 0;
    for (const auto &pc : list) {
      total += pc.probability;
      tokens += pc.count;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
    for (const auto &pc : list) {
      EXPECT_EQ(static_cast<std::uint64_t>(std::llround(pc.probability * static_cast<double>(tokens))),
                pc.count);
      for (const auto &other : list)
        if (pc.count < other.count) {
          EXPECT_LT(pc.probability, other.probability);
        }
    }
  }
}

Lexicon SyntheticAllPvs() {
  return ReadLexicon(
      "w1\tc1\nw1\tv1\n"
      "w2\tc2\nw2\tv2\n"
      "w3\tc3\nw3\tv3\n"
      "w4\tc4\nw4\tv4\nw4\tu4\n"
      "w5\tc5\nw5\tv5\nw5\tu5\n"
      "w6\tc6\nw6\tv6\nw6\tu6\n",
      LexiconFlavor::kAllPVs);
}

std::vector<AlignmentObservation> SyntheticAlignments() {
  std::vector<AlignmentObservation> obs;
  Append(obs, Repeat("w1", "c1", 8));
  Append(obs, Repeat("w1", "v1", 2));
  Append(obs, Repeat("w2", "c2", 1));
  Append(obs, Repeat("w2", "v2", 9));
  Append(obs, Repeat("w3", "c3", 5));
  Append(obs, Repeat("w3", "v3", 5));
  Append(obs, Repeat("w5", "v5", 7));
  Append(obs, Repeat("w5", "u5", 3));
  Append(obs, Repeat("w6", "v6", 13));
  Append(obs, Repeat("w6", "u6", 7));
  Append(obs, Repeat("w6", "x6", 1));
  return obs;
}

TEST(BuildUsedPvs, KeepsObservedVariantsOnly) {
  Lexicon all = SyntheticAllPvs();
  UsedPvsResult used = BuildUsedPvs(all, CountVariants(SyntheticAlignments()));
  EXPECT_EQ(used.lexicon.flavor(), LexiconFlavor::kUsedPVs);
  EXPECT_EQ(WriteLexicon(used.lexicon),
            "w1\tc1\nw1\tv1\nw2\tc2\nw2\tv2\nw3\tc3\nw3\tv3\nw4\tc4\nw5\tv5\nw5\tu5\n"
            "w6\tv6\nw6\tu6\n");
  ASSERT_EQ(used.out_of_lexicon.size(), 1u);
  EXPECT_EQ(used.out_of_lexicon[0].pron, (Pronunciation{"x6"}));
  for (const auto &[word, entry] : used.lexicon.entries())
    for (const auto &v : entry.variants) EXPECT_TRUE(all.Find(word)->Contains(v.pron));
}

TEST(FindOutOfLexicon, Reasons) {
  Lexicon all = SyntheticAllPvs();
  std::vector<AlignmentObservation> obs{Obs("w1", "c1"), Obs("w1", "zz"), Obs("nope", "c1")};
  auto report = FindOutOfLexicon(all, obs);
  ASSERT_EQ(report.size(), 2u);
  EXPECT_EQ(report[0].reason, "unknown-variant");
  EXPECT_EQ(report[1].reason, "unknown-word");
  EXPECT_EQ(WriteOutOfLexiconReport(report).substr(0, 22), "u1\tc1\tc1_A\tw1\tzz\t0\t0.1");
}

std::string LikelyText(double threshold) {
  PronProbTable probs =
      EstimateProbs(CountVariants(SyntheticAlignments()), ProbScheme::kSumNormalized);
  return WriteLexicon(BuildLikelyPvs(SyntheticAllPvs(), probs, {threshold, true}));
}

TEST(BuildLikelyPvs, PredictedMembership) {
  EXPECT_EQ(LikelyText(0.65),
            "w1\tc1\nw2\tc2\nw2\tv2\nw3\tc3\nw4\tc4\nw5\tc5\nw5\tv5\nw6\tc6\n");
  EXPECT_EQ(LikelyText(0.5),
            "w1\tc1\nw2\tc2\nw2\tv2\nw3\tc3\nw4\tc4\nw5\tc5\nw5\tv5\nw6\tc6\nw6\tv6\n");
  EXPECT_EQ(LikelyText(0.9), "w1\tc1\nw2\tc2\nw3\tc3\nw4\tc4\nw5\tc5\nw6\tc6\n");
}

TEST(BuildLikelyPvs, Examples) {
  Lexicon all = ReadLexicon("w\ta\nw\tb\n", LexiconFlavor::kAllPVs);
  std::vector<AlignmentObservation> obs = Repeat("w", "a", 8);
  Append(obs, Repeat("w", "b", 2));
  auto probs = EstimateProbs(CountVariants(obs), ProbScheme::kSumNormalized);
  EXPECT_EQ(WriteLexicon(BuildLikelyPvs(all, probs)), "w\ta\n");
  std::vector<AlignmentObservation> even = Repeat("w", "a", 5);
  Append(even, Repeat("w", "b", 5));
  auto half = EstimateProbs(CountVariants(even), ProbScheme::kSumNormalized);
  EXPECT_EQ(WriteLexicon(BuildLikelyPvs(all, half)), "w\ta\n");
  EXPECT_THROW(BuildLikelyPvs(all, half, {1.0, true}), Error);
  EXPECT_THROW(BuildLikelyPvs(all, CountVariants(even)), Error);
}

TEST(BuildLikelyPvs, WithoutCanonicalRetention) {
  std::vector<AlignmentObservation> obs = Repeat("w", "b", 9);
  Append(obs, Repeat("w", "a", 1));
  auto probs = EstimateProbs(CountVariants(obs), ProbScheme::kSumNormalized);
  Lexicon all = ReadLexicon("w\ta\nw\tb\nv\tx\n", LexiconFlavor::kAllPVs);
  EXPECT_EQ(WriteLexicon(BuildLikelyPvs(all, probs, {0.65, false})), "v\tx\nw\tb\n");
}

TEST(BuildLikelyPvs, ThresholdMonotoneOnRandomTables) {
  std::mt19937 gen(99);
  for (int trial = 0; trial < 50; ++trial) {
    std::string lex_text;
    std::vector<AlignmentObservation> obs;
    for (int w = 0; w < 30; ++w) {
      std::string word = "w" + std::to_string(w);
      int nv = 1 + static_cast<int>(gen() % 5);
      for (int v = 0; v < nv; ++v) {
        std::string pron = "p" + std::to_string(v);
        lex_text += word + "\t" + pron + "\n";
        Append(obs, Repeat(word, pron, static_cast<int>(gen() % 10)));
      }
    }
    Lexicon all = ReadLexicon(lex_text, LexiconFlavor::kAllPVs);
    for (auto scheme : {ProbScheme::kSumNormalized, ProbScheme::kMaxNormalized}) {
      auto probs = EstimateProbs(CountVariants(obs), scheme);
      std::size_t previous = SIZE_MAX;
      UsedPvsResult used = BuildUsedPvs(all, CountVariants(obs));
      for (double t : {0.1, 0.3, 0.5, 0.65, 0.8, 0.9, 0.99}) {
        Lexicon likely = BuildLikelyPvs(all, probs, {t, true});
        std::size_t lines = likely.VariantCount();
        EXPECT_LE(lines, previous);
        previous = lines;
        for (const auto &[word, entry] : likely.entries()) {
          const LexiconEntry *u = used.lexicon.Find(word);
          for (const auto &v : entry.variants) {
            bool in_used = u->Contains(v.pron);
            bool canonical = all.Find(word)->head().pron == v.pron;
            EXPECT_TRUE(in_used || canonical);
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace lexforge
