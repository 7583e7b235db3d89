// tests/unit/lexicon_test.cc

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

#include "lexforge/lexicon.h"

#include <gtest/gtest.h>

#include "lexforge/error.h"
#include "lexforge/rules.h"
#include "lexforge/text.h"
#include "test_paths.h"

namespace lexforge {
namespace {

RuleSet SwitchPack() { return ParseRuleFile(ReadFile(testing::DataDir() / "switch_rules.txt")); }
RuleSet VariantPack() { return ParseRuleFile(ReadFile(testing::DataDir() / "variant_rules.txt")); }

Lexicon FixtureStandard() {
  auto words = ReadCanonicalList(ReadFile(testing::FixtureDir() / "canonical.tsv"));
  return BuildStandard(words, SwitchPack());
}

TEST(BuildStandard, SwitchRuleApplies) {
  RuleSet rs = ParseRuleFile("RULE s switch obligatory  z -> s / _\n");
  std::vector<CanonicalWord> words{{"Sonne", {"z", "O", "n", "@"}, std::nullopt}};
  Lexicon lex = BuildStandard(words, rs);
  ASSERT_EQ(lex.size(), 1u);
  EXPECT_EQ(lex.Find("Sonne")->head().pron, (Pronunciation{"s", "O", "n", "@"}));
  EXPECT_EQ(lex.Find("Sonne")->head().provenance, Provenance::kCanonical);
  EXPECT_EQ(lex.flavor(), LexiconFlavor::kStandard);
}

TEST(BuildStandard, EmptyListGivesEmptyLexicon) {
  EXPECT_TRUE(BuildStandard({}, SwitchPack()).empty());
}

TEST(BuildStandard, TaggedWordsKeepTheirPronunciation) {
  RuleSet rs = ParseRuleFile("RULE s switch obligatory  z -> s / _\n");
  std::vector<CanonicalWord> words{{"easy", {"i:", "z", "i:"}, std::string("en")},
                                   {"sieben", {"z", "i:", "b", "@", "n"}, std::nullopt}};
  Lexicon lex = BuildStandard(words, rs);
  EXPECT_EQ(lex.Find("easy")->head().pron, (Pronunciation{"i:", "z", "i:"}));
  EXPECT_EQ(lex.Find("easy")->language_tag, std::optional<std::string>("en"));
  EXPECT_EQ(lex.Find("sieben")->head().pron, (Pronunciation{"s", "i:", "b", "@", "n"}));
}

TEST(BuildStandard, ConflictingCanonicalIsAnError) {
  std::vector<CanonicalWord> words{{"ab", {"a", "p"}, std::nullopt},
                                   {"ab", {"a", "b"}, std::nullopt}};
  try {
    BuildStandard(words, RuleSet{});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kConflictingCanonical);
  }
  std::vector<CanonicalWord> repeated{{"ab", {"a", "p"}, std::nullopt},
                                      {"ab", {"a", "p"}, std::nullopt}};
  EXPECT_EQ(BuildStandard(repeated, RuleSet{}).size(), 1u);
}

TEST(BuildStandard, FixtureEnglishWordsUntouched) {
  auto words = ReadCanonicalList(ReadFile(testing::FixtureDir() / "canonical.tsv"));
  Lexicon lex = BuildStandard(words, SwitchPack());
  std::size_t tagged = 0;
  for (const auto &w : words) {
    if (!w.language_tag) continue;
    ++tagged;
    EXPECT_EQ(lex.Find(w.word)->head().pron, w.pron) << w.word;
  }
  EXPECT_EQ(tagged, 10u);
}

TEST(BuildAllPvs, WirCarriesManualVariant) {
  Lexicon standard = FixtureStandard();
  auto manual = ReadManualAddenda(ReadFile(testing::DataDir() / "manual_addenda.lex"));
  Lexicon all = BuildAllPvs(standard, VariantPack(), manual);
  const LexiconEntry *wir = all.Find("wir");
  ASSERT_NE(wir, nullptr);
  EXPECT_EQ(wir->head().pron, (Pronunciation{"v", "i:", "6"}));
  EXPECT_EQ(wir->head().provenance, Provenance::kCanonical);
  const LexiconVariant *ma = wir->Find({"m", "a:"});
  ASSERT_NE(ma, nullptr);
  EXPECT_EQ(ma->provenance, Provenance::kManual);
  EXPECT_EQ(all.flavor(), LexiconFlavor::kAllPVs);
}

TEST(BuildAllPvs, NoRuleNoManualKeepsCanonicalOnly) {
  std::vector<CanonicalWord> words{{"xy", {"p", "a"}, std::nullopt}};
  Lexicon standard = BuildStandard(words, RuleSet{});
  RuleSet rs = ParseRuleFile("RULE r connected-speech optional  r -> ∅ / _\n");
  Lexicon all = BuildAllPvs(standard, rs, {});
  ASSERT_EQ(all.Find("xy")->variants.size(), 1u);
}

TEST(BuildAllPvs, ManualForUnknownWordIsAnError) {
  Lexicon standard = BuildStandard(std::vector<CanonicalWord>{{"a", {"a"}, std::nullopt}}, {});
  std::vector<ManualVariant> manual{{"zzz", {"a"}}};
  try {
    BuildAllPvs(standard, RuleSet{}, manual);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownWord);
  }
}

TEST(BuildAllPvs, EveryEntryHoldsItsCanonicalFirst) {
  Lexicon standard = FixtureStandard();
  Lexicon all = BuildAllPvs(standard, VariantPack(), {});
  ASSERT_EQ(all.size(), standard.size());
  for (const auto &[word, entry] : all.entries()) {
    EXPECT_EQ(entry.head().pron, standard.Find(word)->head().pron) << word;
    EXPECT_LE(entry.variants.size(), kDefaultVariantCap);
  }
}

TEST(LexiconFormat, ReadWrite) {
  Lexicon one = ReadLexicon("Sonne s O n @\n");
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.VariantCount(), 1u);
  try {
    ReadLexicon("Sonne\n");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_EQ(e.line(), 1u);
  }
  Lexicon dup = ReadLexicon("a\ta b\na\ta b\na\ta c\n");
  EXPECT_EQ(dup.VariantCount(), 2u);
  EXPECT_EQ(dup.collapsed_duplicates(), 1u);
  Lexicon prob = ReadLexicon("a\ta b\t0.25\n");
  EXPECT_EQ(prob.Find("a")->head().probability, std::optional<double>(0.25));
  EXPECT_EQ(WriteLexicon(prob), "a\ta b\t0.25\n");
  EXPECT_THROW(ReadLexicon("a\ta b\t1.5\n"), Error);
}

TEST(LexiconFormat, GeneratedLexiconRoundTripsByteExact) {
  Lexicon all = BuildAllPvs(FixtureStandard(), VariantPack(), {});
  std::string text = WriteLexicon(all);
  EXPECT_EQ(WriteLexicon(ReadLexicon(text)), text);
  EXPECT_EQ(WriteLexicon(BuildAllPvs(FixtureStandard(), VariantPack(), {})), text);
}

TEST(ManualAddenda, HeaderRequired) {
  EXPECT_THROW(ReadManualAddenda("wir\tm a:\n"), Error);
  auto m = ReadManualAddenda("# manual\n# comment\nwir\tm a:\n");
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].pron, (Pronunciation{"m", "a:"}));
}

TEST(LexiconStats, Arithmetic) {
  Lexicon lex = ReadLexicon("a\tx\na\ty\nb\tz\n");
  LexiconStats s = ComputeStats(lex);
  EXPECT_EQ(s.entry_count, 2u);
  EXPECT_EQ(s.variant_count, 3u);
  EXPECT_DOUBLE_EQ(s.avg_variants_per_word, 1.5);
  EXPECT_EQ(s.max_variants_single_word, 2u);
  EXPECT_FALSE(s.empty);

  LexiconStats empty = ComputeStats(Lexicon{});
  EXPECT_EQ(empty.entry_count, 0u);
  EXPECT_EQ(empty.avg_variants_per_word, 0.0);
  EXPECT_TRUE(empty.empty);

  EXPECT_EQ(ComputeStats(FixtureStandard()).avg_variants_per_word, 1.0);
}

TEST(MergeLexicons, DisjointIdenticalConflicting) {
  Lexicon a = ReadLexicon("a\tx\nb\ty\n");
  Lexicon c = ReadLexicon("c\tz\n");
  EXPECT_EQ(WriteLexicon(MergeLexicons(a, c)), "a\tx\nb\ty\nc\tz\n");
  EXPECT_EQ(WriteLexicon(MergeLexicons(a, a)), WriteLexicon(a));
  EXPECT_TRUE(MergeLexicons(a, a).notes().empty());

  Lexicon b2 = ReadLexicon("a\tq\n");
  Lexicon merged = MergeLexicons(a, b2);
  const LexiconEntry *e = merged.Find("a");
  ASSERT_EQ(e->variants.size(), 2u);
  EXPECT_EQ(e->head().pron, (Pronunciation{"x"}));
  EXPECT_EQ(e->head().provenance, Provenance::kCanonical);
  EXPECT_NE(e->variants[1].provenance, Provenance::kCanonical);
  EXPECT_EQ(merged.notes().size(), 1u);
}

TEST(MapLexicon, ReducesAndCollapses) {
  PhoneMap map;
  map.Set("a:", {"a"});
  map.Set("a", {"a"});
  map.Set("t", {"t"});
  Lexicon lex = ReadLexicon("x\ta: t\nx\ta t\n");
  Lexicon mapped = MapLexicon(lex, map);
  EXPECT_EQ(WriteLexicon(mapped), "x\ta t\n");
}

TEST(Flavors, NamesRoundTrip) {
  for (auto f : {LexiconFlavor::kStandard, LexiconFlavor::kAllPVs, LexiconFlavor::kUsedPVs,
                 LexiconFlavor::kLikelyPVs, LexiconFlavor::kCustom}) {
    EXPECT_EQ(ParseFlavor(FlavorName(f)), f);
  }
  EXPECT_FALSE(ParseFlavor("bogus"));
}

}  // namespace
}  // namespace lexforge
