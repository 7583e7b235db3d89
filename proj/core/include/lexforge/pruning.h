// core/include/lexforge/pruning.h

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

// Alignment-driven pruning of the allPVs lexicon into usedPVs (variants that
// were actually realized) and likelyPVs (variants whose relative frequency
// exceeds a threshold).

#ifndef LEXFORGE_PRUNING_H_
#define LEXFORGE_PRUNING_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexforge/lexicon.h"
#include "lexforge/phone.h"

namespace lexforge {

struct AlignmentObservation {
  std::string utterance_id;
  std::string conversation_id;
  std::string speaker_id;
  std::string word;
  Pronunciation pron;
  double start = 0.0;
  double duration = 0.0;
};

/// One token per line:
///   utt<TAB>conv<TAB>spk<TAB>word<TAB>phone phone ...<TAB>start<TAB>dur
/// With `inv` given, unknown phone symbols throw UnknownPhone.
std::vector<AlignmentObservation> IngestAlignments(std::string_view text,
                                                   const PhoneInventory *inv = nullptr);

enum class ProbScheme { kSumNormalized, kMaxNormalized };
const char *ProbSchemeName(ProbScheme s);
std::optional<ProbScheme> ParseProbScheme(std::string_view s);

struct PronCount {
  Pronunciation pron;
  std::uint64_t count = 0;
  double probability = 0.0;
};

/// Per-word realized-variant counts, optionally with estimated probabilities.
/// Variants of a word are kept sorted by pronunciation so that the table does
/// not depend on observation order.
class PronProbTable {
 public:
  void Add(const std::string &word, const Pronunciation &pron, std::uint64_t n = 1);
  /// Associative and commutative; used for sharded counting.
  void Merge(const PronProbTable &other);

  std::uint64_t Count(std::string_view word, const Pronunciation &pron) const;
  std::optional<double> Probability(std::string_view word, const Pronunciation &pron) const;
  const std::vector<PronCount> *Find(std::string_view word) const;

  const std::map<std::string, std::vector<PronCount>, std::less<>> &words() const {
    return words_;
  }
  std::uint64_t total_tokens() const { return total_tokens_; }
  std::optional<ProbScheme> scheme() const { return scheme_; }

  friend PronProbTable EstimateProbs(PronProbTable counts, ProbScheme scheme);

 private:
  std::map<std::string, std::vector<PronCount>, std::less<>> words_;
  std::uint64_t total_tokens_ = 0;
  std::optional<ProbScheme> scheme_;
};

PronProbTable CountVariants(std::span<const AlignmentObservation> obs);

/// sum-normalized: count / word total; max-normalized: count / word maximum.
PronProbTable EstimateProbs(PronProbTable counts, ProbScheme scheme);

/// TSV dump: word, pronunciation, count, probability.
std::string WritePronProbTable(const PronProbTable &table);

struct OutOfLexiconObservation {
  AlignmentObservation observation;
  std::string reason;  // "unknown-word" or "unknown-variant"
};

std::vector<OutOfLexiconObservation> FindOutOfLexicon(
    const Lexicon &all_pvs, std::span<const AlignmentObservation> obs);

/// The alignment format plus a trailing reason column.
std::string WriteOutOfLexiconReport(std::span<const OutOfLexiconObservation> report);

struct UsedPvsResult {
  Lexicon lexicon{LexiconFlavor::kUsedPVs};
  /// (word, pronunciation, count) triples observed but absent from allPVs.
  std::vector<PronCount> out_of_lexicon;
  std::vector<std::string> out_of_lexicon_words;
};

/// Keeps the allPVs variants with count >= 1 (allPVs order); words without
/// any observed variant keep their canonical form only.
UsedPvsResult BuildUsedPvs(const Lexicon &all_pvs, const PronProbTable &counts);

struct LikelyPvsOptions {
  double threshold = 0.65;
  bool retain_canonical = true;
};

/// Keeps the allPVs variants with probability > threshold plus, by default,
/// the canonical form. Kept variants carry no probability.
Lexicon BuildLikelyPvs(const Lexicon &all_pvs, const PronProbTable &probs,
                       const LikelyPvsOptions &options = {});

}  // namespace lexforge

#endif  // LEXFORGE_PRUNING_H_
