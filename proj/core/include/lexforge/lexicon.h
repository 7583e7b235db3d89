// core/include/lexforge/lexicon.h

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

#ifndef LEXFORGE_LEXICON_H_
#define LEXFORGE_LEXICON_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexforge/phone.h"
#include "lexforge/rules.h"

namespace lexforge {

enum class Provenance { kCanonical, kRule, kManual, kAligned, kMerged };
enum class LexiconFlavor { kStandard, kAllPVs, kUsedPVs, kLikelyPVs, kCustom };

const char *ProvenanceName(Provenance p);
const char *FlavorName(LexiconFlavor f);
std::optional<LexiconFlavor> ParseFlavor(std::string_view s);

struct LexiconVariant {
  Pronunciation pron;
  Provenance provenance = Provenance::kRule;
  std::optional<double> probability;
};

/// One orthographic word. Variants are pairwise distinct; at most one has
/// canonical provenance and, if present, it is the first variant. Built
/// lexicons (standard/allPVs) always carry their canonical form; pruned
/// lexicons drop it when it was never observed.
struct LexiconEntry {
  std::string word;
  std::vector<LexiconVariant> variants;
  std::optional<std::string> language_tag;

  const LexiconVariant &head() const { return variants.front(); }
  const LexiconVariant *Canonical() const;
  const LexiconVariant *Find(const Pronunciation &pron) const;
  bool Contains(const Pronunciation &pron) const { return Find(pron) != nullptr; }
};

class Lexicon {
 public:
  explicit Lexicon(LexiconFlavor flavor = LexiconFlavor::kCustom) : flavor_(flavor) {}

  /// Adds a new entry after checking the entry invariants. Throws
  /// InvalidArgument on a malformed entry or an already present word.
  void Insert(LexiconEntry entry);
  /// Adds `variant` to `word`, creating the entry if needed. Returns false if
  /// the pronunciation was already present.
  bool AddVariant(const std::string &word, LexiconVariant variant);

  const LexiconEntry *Find(std::string_view word) const;
  const std::map<std::string, LexiconEntry, std::less<>> &entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t VariantCount() const;

  LexiconFlavor flavor() const { return flavor_; }
  void set_flavor(LexiconFlavor f) { flavor_ = f; }

  /// Human-readable notes such as merge conflicts.
  const std::vector<std::string> &notes() const { return notes_; }
  void AddNote(std::string note) { notes_.push_back(std::move(note)); }
  /// Number of duplicate (word, pronunciation) lines collapsed by ReadLexicon.
  std::size_t collapsed_duplicates() const { return collapsed_duplicates_; }
  void set_collapsed_duplicates(std::size_t n) { collapsed_duplicates_ = n; }

 private:
  LexiconFlavor flavor_;
  std::map<std::string, LexiconEntry, std::less<>> entries_;
  std::vector<std::string> notes_;
  std::size_t collapsed_duplicates_ = 0;
};

/// Canonical G2P output for one word.
struct CanonicalWord {
  std::string word;
  Pronunciation pron;
  std::optional<std::string> language_tag;
};

struct ManualVariant {
  std::string word;
  Pronunciation pron;
};

/// Runs every canonical pronunciation through the switch rules; words with a
/// language tag keep their pronunciation. A word listed twice with different
/// pronunciations throws ConflictingCanonical. With `source` given, canonical
/// forms that do not validate throw UnknownPhone.
Lexicon BuildStandard(std::span<const CanonicalWord> words, const RuleSet &switch_rules,
                      const PhoneInventory *source = nullptr);

/// Expands every untagged standard entry with GenerateVariants and appends
/// the manual variants for that word. Throws UnknownWord for a manual variant
/// whose word is not in `standard`; with `target` given, manual
/// pronunciations that do not validate throw UnknownPhone.
Lexicon BuildAllPvs(const Lexicon &standard, const RuleSet &variant_rules,
                    std::span<const ManualVariant> manual, std::size_t cap = kDefaultVariantCap,
                    const PhoneInventory *target = nullptr);

/// `word<TAB>phone phone ...[<TAB>prob]`, sorted by word, variants in stored
/// order.
std::string WriteLexicon(const Lexicon &lex);

/// Reads the lexicon format. Lines without a tab are split on whitespace
/// (word, then phones). The first variant of each word is marked canonical.
Lexicon ReadLexicon(std::string_view text, LexiconFlavor flavor = LexiconFlavor::kCustom);

/// Manual-addenda file: lexicon format, first line `# manual`.
std::vector<ManualVariant> ReadManualAddenda(std::string_view text);

/// G2P output list: `word<TAB>phones[<TAB>language-tag]`.
std::vector<CanonicalWord> ReadCanonicalList(std::string_view text);

struct LexiconStats {
  std::size_t entry_count = 0;
  std::size_t variant_count = 0;
  double avg_variants_per_word = 0.0;
  std::size_t max_variants_single_word = 0;
  bool empty = true;
};

LexiconStats ComputeStats(const Lexicon &lex);

/// Union of words and per-word variants. On differing canonicals the entry of
/// `a` keeps its canonical, `b`'s canonical becomes a merged variant and a
/// note is recorded.
Lexicon MergeLexicons(const Lexicon &a, const Lexicon &b);

/// Applies a phone map to every variant, collapsing variants that become
/// identical.
Lexicon MapLexicon(const Lexicon &lex, const PhoneMap &map);

}  // namespace lexforge

#endif  // LEXFORGE_LEXICON_H_
