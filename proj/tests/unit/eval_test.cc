// tests/unit/eval_test.cc

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

#include "lexforge/eval.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "lexforge/error.h"
#include "lexforge/text.h"
#include "oracles.h"
#include "test_paths.h"

namespace lexforge {
namespace {

using Tokens = std::vector<std::string>;

TEST(NormalizeText, Examples) {
  EXPECT_EQ(NormalizeText("Von über Musik, ja."), (Tokens{"von", "über", "musik", "ja"}));
  EXPECT_EQ(NormalizeText("ÄRGER! Straße?"), (Tokens{"ärger", "straße"}));
  EXPECT_EQ(NormalizeText("Baden-Württemberg"), (Tokens{"baden", "württemberg"}));
  EXPECT_TRUE(NormalizeText("...!?").empty());
}

TEST(NormalizeTranscript, PoliciesAndTags) {
  std::string text =
      "u1\tc1\tA\tJa [laughter] genau.\n"
      "u2\tc1\tB\tNa [noise] gut!\n"
      "u3\tc1\tA\t[singing]\n";
  auto strip = NormalizeTranscript(text, NormalizationPolicy::kStripSymbols);
  ASSERT_EQ(strip.utterances.size(), 2u);
  EXPECT_EQ(strip.utterances[0].tokens, (Tokens{"ja", "genau"}));
  EXPECT_TRUE(strip.utterances[0].flags.count(UtteranceFlag::kLaughter));
  EXPECT_EQ(strip.utterances[1].tokens, (Tokens{"na", "gut"}));
  EXPECT_TRUE(strip.utterances[1].flags.empty());
  EXPECT_EQ(strip.dropped_empty, 1u);

  auto exclude = NormalizeTranscript(text, NormalizationPolicy::kExcludeChunk);
  ASSERT_EQ(exclude.utterances.size(), 1u);
  EXPECT_EQ(exclude.utterances[0].utterance_id, "u2");
  EXPECT_EQ(exclude.dropped_flagged, 2u);

  auto keep = NormalizeTranscript(text, NormalizationPolicy::kStripSymbols, true);
  EXPECT_EQ(keep.utterances.size(), 3u);
}

TEST(NormalizeTranscript, Errors) {
  for (const char *bad : {"u1\tc1\n", "u1\tc1\tA\tja [whistle]\n", "u1\tc1\tA\tja [noise\n",
                          "u1\tc1\tA\tja ]\n", "u1\t\tA\tja\n"}) {
    try {
      NormalizeTranscript(bad, NormalizationPolicy::kStripSymbols);
      FAIL() << bad;
    } catch (const Error &e) {
      EXPECT_EQ(e.code(), ErrorCode::kParse);
      EXPECT_EQ(e.line(), 1u);
    }
  }
}

TEST(NormalizeTranscript, IdempotentOnFixture) {
  std::string raw = ReadFile(testing::FixtureDir() / "conv_transcript.tsv");
  auto once = NormalizeTranscript(raw, NormalizationPolicy::kStripSymbols);
  std::string written = WriteTranscript(once.utterances);
  auto twice = NormalizeTranscript(written, NormalizationPolicy::kStripSymbols);
  EXPECT_EQ(WriteTranscript(twice.utterances), written);
  EXPECT_EQ(twice.dropped_empty, 0u);
  for (const auto &u : once.utterances)
    for (const auto &t : u.tokens) EXPECT_EQ(NormalizeText(t), Tokens{t});
}

std::vector<Utterance> FixtureUtterances() {
  std::string raw = ReadFile(testing::FixtureDir() / "conv_transcript.tsv");
  return NormalizeTranscript(raw, NormalizationPolicy::kExcludeChunk).utterances;
}

TEST(CvSplits, NineteenConversationsTwoSpeakersEach) {
  auto utts = FixtureUtterances();
  auto convs = CollectConversations(utts);
  ASSERT_EQ(convs.size(), 19u);
  auto splits = MakeCvSplits(convs, utts, 7);
  ASSERT_EQ(splits.size(), 19u);
  std::map<std::string, std::string> conv_of;
  for (const auto &u : utts) conv_of[u.utterance_id] = u.conversation_id;
  for (const auto &s : splits) {
    EXPECT_EQ(s.test_speakers.size(), 2u);
    EXPECT_EQ(s.train_conversations.size(), 18u);
    EXPECT_FALSE(s.degenerate);
    EXPECT_EQ(std::count(s.train_conversations.begin(), s.train_conversations.end(), s.split_id), 0);
    for (const auto &v : s.validation_utterances) EXPECT_NE(conv_of.at(v), s.split_id);
    EXPECT_TRUE(std::is_sorted(s.validation_utterances.begin(), s.validation_utterances.end()));
  }
}

TEST(CvSplits, SeededSamplingIsReproducible) {
  auto utts = FixtureUtterances();
  auto convs = CollectConversations(utts);
  std::string a = WriteCvSplits(MakeCvSplits(convs, utts, 11));
  EXPECT_EQ(WriteCvSplits(MakeCvSplits(convs, utts, 11)), a);
  EXPECT_NE(WriteCvSplits(MakeCvSplits(convs, utts, 12)), a);
  auto none = MakeCvSplits(convs, utts, 11, 0.0);
  for (const auto &s : none) EXPECT_TRUE(s.validation_utterances.empty());
}

TEST(CvSplits, DegenerateAndInvalid) {
  std::vector<ConversationInfo> one{{"c1", {"A", "B"}}};
  auto splits = MakeCvSplits(one, {}, 0);
  ASSERT_EQ(splits.size(), 1u);
  EXPECT_TRUE(splits[0].degenerate);

  auto code = [](std::vector<ConversationInfo> convs, double fraction = 0.1) {
    try {
      MakeCvSplits(convs, {}, 0, fraction);
    } catch (const Error &e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  EXPECT_EQ(code({{"c1", {"A"}}}), ErrorCode::kInvalidConversation);
  EXPECT_EQ(code({{"c1", {"A", "B", "C"}}}), ErrorCode::kInvalidConversation);
  EXPECT_EQ(code({{"c1", {"A", "B"}}, {"c1", {"C", "D"}}}), ErrorCode::kInvalidConversation);
  EXPECT_EQ(code({{"c1", {"A", "B"}}}, 1.0), ErrorCode::kInvalidArgument);
}

TEST(ComputeWer, Examples) {
  Tokens ref{"a", "b", "c"};
  auto r = ComputeWer(ref, Tokens{"a", "x", "c", "d"});
  EXPECT_EQ(r.substitutions, 1u);
  EXPECT_EQ(r.insertions, 1u);
  EXPECT_EQ(r.deletions, 0u);
  EXPECT_DOUBLE_EQ(r.wer, 2.0 / 3.0);
  EXPECT_EQ(ComputeWer(ref, Tokens{}).deletions, 3u);
  EXPECT_EQ(ComputeWer(Tokens{}, Tokens{}).wer, 0.0);
  auto inf = ComputeWer(Tokens{}, Tokens{"a"});
  EXPECT_TRUE(inf.infinite);
  EXPECT_TRUE(std::isinf(inf.wer));
}

Tokens RandomTokens(std::mt19937 &gen) {
  Tokens t(gen() % 9);
  for (auto &w : t) w = std::string(1, static_cast<char>('a' + gen() % 4));
  return t;
}

TEST(ComputeWer, MatchesBruteForceOnRandomPairs) {
  std::mt19937 gen(99);
  for (int trial = 0; trial < 1000; ++trial) {
    Tokens ref = RandomTokens(gen), hyp = RandomTokens(gen);
    auto r = ComputeWer(ref, hyp);
    ASSERT_EQ(r.errors(), oracle::EditDistance(ref, hyp));
    EXPECT_EQ(r.ref_length, ref.size());
    // The alignment accounts for every token on both sides.
    EXPECT_EQ(ref.size() - r.deletions, hyp.size() - r.insertions);
    EXPECT_EQ(ComputeWer(ref, ref).errors(), 0u);
    EXPECT_EQ(ComputeWer(hyp, ref).errors(), r.errors());
    Tokens mid = RandomTokens(gen);
    EXPECT_LE(r.errors(), ComputeWer(ref, mid).errors() + ComputeWer(mid, hyp).errors());
  }
}

ConversationWer Conv(const std::string &id, std::size_t errors, std::size_t length) {
  ConversationWer c{id, {}};
  c.breakdown.substitutions = errors;
  c.breakdown.ref_length = length;
  c.breakdown.wer = length ? static_cast<double>(errors) / static_cast<double>(length)
                           : std::numeric_limits<double>::infinity();
  c.breakdown.infinite = length == 0;
  return c;
}

TEST(Aggregate, Examples) {
  std::vector<ConversationWer> rows{Conv("a", 1, 4), Conv("b", 3, 4), Conv("c", 2, 0)};
  SummaryStats s = Aggregate(rows);
  EXPECT_EQ(s.n, 2u);
  EXPECT_EQ(s.excluded_infinite, 1u);
  EXPECT_DOUBLE_EQ(s.mean, 0.5);
  EXPECT_DOUBLE_EQ(s.stddev, 0.25);
  EXPECT_DOUBLE_EQ(s.min, 0.25);
  EXPECT_DOUBLE_EQ(s.max, 0.75);
  EXPECT_DOUBLE_EQ(OverallWer(rows), 0.5);
  std::vector<ConversationWer> only_inf{Conv("z", 1, 0)};
  try {
    Aggregate(only_inf);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyResults);
  }
}

TEST(Aggregate, MatchesOracleAndIsPermutationInvariant) {
  std::mt19937 gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ConversationWer> rows;
    std::vector<double> values;
    for (int i = 0; i < 19; ++i) {
      rows.push_back(Conv("c" + std::to_string(i), gen() % 120, 40 + gen() % 200));
      values.push_back(rows.back().breakdown.wer);
    }
    SummaryStats s = Aggregate(rows);
    oracle::Moments m = oracle::Describe(values);
    EXPECT_NEAR(s.mean, m.mean, 1e-12);
    EXPECT_NEAR(s.stddev, m.stddev, 1e-12);
    EXPECT_EQ(s.min, m.min);
    EXPECT_EQ(s.max, m.max);
    EXPECT_LE(s.min, s.mean);
    EXPECT_LE(s.mean, s.max);
    std::shuffle(rows.begin(), rows.end(), gen);
    SummaryStats t = Aggregate(rows);
    EXPECT_EQ(t.mean, s.mean);
    EXPECT_EQ(t.stddev, s.stddev);
  }
}

TEST(ScoreConversations, MissingHypothesisIsEmpty) {
  std::vector<Utterance> refs{{"u1", "c1", "A", {"a", "b"}, {}}, {"u2", "c1", "B", {"c"}, {}},
                              {"u3", "c2", "C", {"d"}, {}}};
  std::map<std::string, std::vector<std::string>, std::less<>> hyps{{"u1", {"a", "b"}}};
  auto scored = ScoreConversations(refs, hyps);
  ASSERT_EQ(scored.size(), 2u);
  EXPECT_EQ(scored[0].breakdown.deletions, 1u);
  EXPECT_DOUBLE_EQ(scored[0].breakdown.wer, 1.0 / 3.0);
  std::set<std::string, std::less<>> only{"c2"};
  EXPECT_EQ(ScoreConversations(refs, hyps, &only).size(), 1u);
}

TEST(Reports, CsvParsesAndIsDeterministic) {
  std::vector<ConversationWer> rows{Conv("a", 1, 4), Conv("b", 3, 7)};
  ReportRow row{"conv", "conv,read", "likely \"PVs\"", Aggregate(rows), OverallWer(rows)};
  std::vector<ReportRow> table{row, row};
  std::string csv = EmitReportCsv(table);
  auto parsed = oracle::ReadCsv(csv);
  ASSERT_EQ(parsed.size(), 3u);
  EXPECT_EQ(parsed[1][1], "conv,read");
  EXPECT_EQ(parsed[1][2], "likely \"PVs\"");
  for (const auto &r : parsed) EXPECT_EQ(r.size(), parsed[0].size());
  auto mean_col = std::find(parsed[0].begin(), parsed[0].end(), "mean") - parsed[0].begin();
  ASSERT_LT(static_cast<std::size_t>(mean_col), parsed[0].size());
  EXPECT_EQ(std::stod(parsed[1][static_cast<std::size_t>(mean_col)]), row.stats.mean);
  EXPECT_EQ(EmitReportCsv(table), csv);
  EXPECT_EQ(EmitReportText(table), EmitReportText(table));
  EXPECT_NE(EmitReportText(table).find("conv"), std::string::npos);
}

}  // namespace
}  // namespace lexforge
