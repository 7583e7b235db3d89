// core/include/lexforge/rules.h

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

// Context-sensitive phone rewrite rules.
//
// Rule file syntax, one statement per line:
//
//   CLASS <NAME> = <elem> <elem> ...
//   RULE <id> <category> <mode>  <focus> -> <replacement> / <left> _ <right>
//
// Elements are phone symbols, [NAME] class references or '#' (word edge).
// '∅' stands for an empty focus, replacement or context. A class may list '#'
// among its members; in a context it then also matches the word edge, which
// is how syllable-coda contexts ("consonant or end of word") are written.
// Lines whose first non-blank character is '#' are comments.
//
// A rule rewrites every non-overlapping match, scanning left to right, with
// contexts evaluated on the rule's input string.

#ifndef LEXFORGE_RULES_H_
#define LEXFORGE_RULES_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexforge/phone.h"

namespace lexforge {

enum class RuleCategory { kSwitch, kConnectedSpeech, kVarietySpecific, kManualTemplate };
enum class RuleMode { kObligatory, kOptional };

const char *RuleCategoryName(RuleCategory c);
const char *RuleModeName(RuleMode m);

struct PatternElement {
  enum class Kind { kPhone, kClass, kBoundary };
  Kind kind = Kind::kPhone;
  /// Phone symbol, or class name for kClass.
  std::string symbol;
  /// Sorted phone members of a class (kClass only).
  std::vector<std::string> members;
  /// The class lists '#' and therefore also matches a word edge.
  bool matches_boundary = false;

  bool MatchesPhone(std::string_view phone) const;
  std::string ToString() const;
};

using Pattern = std::vector<PatternElement>;

struct RewriteRule {
  std::string id;
  RuleCategory category = RuleCategory::kConnectedSpeech;
  RuleMode mode = RuleMode::kOptional;
  Pattern focus;
  Pattern left_context;
  Pattern right_context;
  Pronunciation replacement;
  std::size_t line = 0;
};

struct RuleSet {
  std::string name;
  std::vector<RewriteRule> rules;
  std::map<std::string, std::vector<std::string>> classes;

  const RewriteRule *Find(std::string_view id) const;
  std::size_t size() const { return rules.size(); }
  bool empty() const { return rules.empty(); }
};

RuleSet ParseRuleFile(std::string_view text, std::string name = "");

/// Phone symbols referenced by focus, contexts, replacements or classes that
/// are not in `inv`, in order of first appearance.
std::vector<std::string> UnknownRuleSymbols(const RuleSet &rules, const PhoneInventory &inv);

/// True iff the focus matches at `position` and both contexts match the
/// adjacent material. Out-of-range positions yield false.
bool MatchContext(const RewriteRule &rule, std::span<const std::string> pron,
                  std::size_t position);

/// True iff the rule matches at some position of `pron`.
bool RuleMatches(const RewriteRule &rule, std::span<const std::string> pron);

/// One exhaustive left-to-right pass of a single rule.
Pronunciation ApplyRule(const RewriteRule &rule, const Pronunciation &pron);

/// Applies every (obligatory) rule in list order. When `target` is given, a
/// replacement that introduces a phone outside it throws UnknownPhone.
Pronunciation ApplyObligatory(const Pronunciation &pron, const RuleSet &rules,
                              const PhoneInventory *target = nullptr);

inline constexpr std::size_t kDefaultVariantCap = 64;

struct Variant {
  Pronunciation pron;
  /// Ids of the rules that fired, in rule-list order. Empty for the input.
  std::vector<std::string> fired;
};

/// All distinct pronunciations reachable by firing a subset of the optional
/// rules (a fired rule rewrites all its sites; chosen rules run in list
/// order, so earlier rules may feed later ones). Ordered by number of fired
/// rules, then lexicographically by fired id sequence, and truncated to
/// `cap`. The input pronunciation is always first.
std::vector<Variant> GenerateVariants(const Pronunciation &pron, const RuleSet &rules,
                                      std::size_t cap = kDefaultVariantCap);

}  // namespace lexforge

#endif  // LEXFORGE_RULES_H_
