// tests/unit/pipeline_test.cc

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

#include "lexforge/pipeline.h"

#include <gtest/gtest.h>

#include "lexforge/text.h"
#include "test_paths.h"

namespace lexforge {
namespace {

TEST(ConfigEntries, ParseQuotesCommentsAndErrors) {
  auto entries = ParseConfigEntries("# comment\n\nseed = 5\nam_data = \"a b\"\ncorpus = x : y : strip-symbols\n");
  ASSERT_EQ(entries.size(), 3u);
  EXPECT_EQ(entries[0], (std::pair<std::string, std::string>{"seed", "5"}));
  EXPECT_EQ(entries[1].second, "a b");
  for (const char *bad : {"seed 5\n", "colour = red\n"}) {
    try {
      ParseConfigEntries(bad);
      FAIL() << bad;
    } catch (const ConfigError &e) {
      EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos) << e.what();
    }
  }
}

TEST(ConfigEntries, SetValueReplacesAllOccurrences) {
  ConfigEntries e{{"corpus", "a"}, {"seed", "1"}, {"corpus", "b"}};
  SetConfigValue(e, "corpus", "c");
  EXPECT_EQ(e, (ConfigEntries{{"corpus", "c"}, {"seed", "1"}}));
  SetConfigValue(e, "threshold", "0.5");
  EXPECT_EQ(e.back().first, "threshold");
}

TEST(ConfigHash, IgnoresOutputDirAndKeyOrder) {
  ConfigEntries a{{"seed", "1"}, {"threshold", "0.6"}, {"output_dir", "x"}};
  ConfigEntries b{{"threshold", "0.6"}, {"output_dir", "y"}, {"seed", "1"}};
  ConfigEntries c{{"threshold", "0.7"}, {"seed", "1"}};
  EXPECT_EQ(ConfigHash(a), ConfigHash(b));
  EXPECT_NE(ConfigHash(a), ConfigHash(c));
  EXPECT_EQ(ConfigHash(a).size(), 16u);
}

// The fixture config with its {key} placeholders substituted.
ConfigEntries FixtureEntries() {
  return ExpandSweep(ParseConfigEntries(ReadFile(testing::FixtureDir() / "pipeline.conf"))).front().entries;
}

TEST(BuildRunConfig, FixtureConfigResolves) {
  RunConfig c = BuildRunConfig(FixtureEntries(), testing::FixtureDir());
  EXPECT_EQ(c.corpora.size(), 2u);
  EXPECT_EQ(c.corpora[0].policy, NormalizationPolicy::kExcludeChunk);
  EXPECT_EQ(c.lexicon_flavor, LexiconFlavor::kLikelyPVs);
  EXPECT_EQ(c.threshold, 0.65);
  EXPECT_EQ(c.rescore_order, 4);
  EXPECT_TRUE(c.alignments.has_value());
}

TEST(BuildRunConfig, RejectsBadValues) {
  const std::pair<const char *, const char *> cases[] = {
      {"threshold", "1.5"},     {"lm_order", "9"},           {"lexicon_flavor", "tiny"},
      {"prob_scheme", "x"},     {"retain_canonical", "yes"}, {"reduction", "R4"},
      {"seed", "-1"},           {"validation_fraction", "1"}, {"canonical", "no-such-file.tsv"},
      {"lm_order", "[2, 3]"},   {"rescore_weight", "-1"},
  };
  for (const auto &[key, value] : cases) {
    auto entries = FixtureEntries();
    SetConfigValue(entries, key, value);
    EXPECT_THROW(BuildRunConfig(entries, testing::FixtureDir()), ConfigError) << key << "=" << value;
  }
  auto entries = FixtureEntries();
  entries.emplace_back("seed", "3");
  EXPECT_THROW(BuildRunConfig(entries, testing::FixtureDir()), ConfigError);
}

TEST(ExpandSweep, CrossProductAndPlaceholders) {
  ConfigEntries e{{"lexicon_flavor", "[standard, allPVs]"},
                  {"lm_order", "[2,3,4]"},
                  {"hypotheses", "hyp_{lexicon_flavor}.tsv"},
                  {"output_dir", "out/{lm_order}"}};
  auto cells = ExpandSweep(e);
  ASSERT_EQ(cells.size(), 6u);
  EXPECT_EQ(cells[0].name, "lexicon_flavor=standard,lm_order=2");
  EXPECT_EQ(cells[1].name, "lexicon_flavor=standard,lm_order=3");
  EXPECT_EQ(cells[5].name, "lexicon_flavor=allPVs,lm_order=4");
  EXPECT_EQ(cells[5].entries[2].second, "hyp_allPVs.tsv");
  EXPECT_EQ(cells[5].entries[3].second, "out/4");

  auto single = ExpandSweep({{"seed", "1"}});
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].name, "");
  EXPECT_THROW(ExpandSweep({{"hypotheses", "{corpus}"}, {"corpus", "a"}, {"corpus", "b"}}), ConfigError);
  EXPECT_THROW(ParseListValue("[a, ]"), ConfigError);
  EXPECT_FALSE(ParseListValue("plain").has_value());
}

TEST(RunStage, MissingDependencies) {
  auto entries = FixtureEntries();
  SetConfigValue(entries, "output_dir", testing::ScratchDir("pipeline_missing").string());
  RunConfig c = BuildRunConfig(entries, testing::FixtureDir());
  for (Stage s : {Stage::kPrune, Stage::kLm, Stage::kScore}) {
    try {
      RunStage(c, s);
      FAIL() << StageName(s);
    } catch (const MissingDependency &e) {
      EXPECT_FALSE(e.dependency().empty());
    }
  }
  c.alignments.reset();
  EXPECT_THROW(RunStage(c, Stage::kAll), MissingDependency);
}

TEST(Stage, NamesRoundTrip) {
  for (Stage s : {Stage::kLexicon, Stage::kPrune, Stage::kLm, Stage::kScore, Stage::kAll})
    EXPECT_EQ(ParseStage(StageName(s)), s);
  EXPECT_FALSE(ParseStage("train").has_value());
}

}  // namespace
}  // namespace lexforge
