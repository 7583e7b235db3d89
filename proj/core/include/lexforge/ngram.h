// core/include/lexforge/ngram.h

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

// N-gram counting, interpolated Witten-Bell estimation stored in backoff
// (ARPA) form, evaluation and ARPA I/O.
//
// Witten-Bell recursion, for a history h with c(h) continuation tokens and
// T(h) distinct continuation types:
//
//   p(w|h) = (c(h w) + T(h) p(w|h')) / (c(h) + T(h))      if c(h) > 0
//   p(w|h) = p(w|h')                                       otherwise
//
// where h' drops the oldest word of h and the recursion bottoms out in the
// uniform distribution over the predictable vocabulary (everything but <s>).
// In backoff form every seen n-gram stores its interpolated probability and
// every history stores bow(h) = T(h) / (c(h) + T(h)), which makes backoff
// evaluation reproduce the interpolated model exactly.

#ifndef LEXFORGE_NGRAM_H_
#define LEXFORGE_NGRAM_H_

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lexforge {

inline constexpr std::string_view kSentenceBegin = "<s>";
inline constexpr std::string_view kSentenceEnd = "</s>";
inline constexpr std::string_view kUnknownWord = "<unk>";
inline constexpr int kMaxNGramOrder = 5;
/// log10 "probability" written for <s>, which is never predicted.
inline constexpr double kNeverPredicted = -99.0;

using NGram = std::vector<std::string>;
using Sentence = std::vector<std::string>;

struct CountTable {
  int order = 1;
  std::map<NGram, std::uint64_t> counts;
  std::set<std::string, std::less<>> vocabulary;

  std::uint64_t Count(const NGram &ngram) const;
  /// Adds another table's counts and vocabulary; orders must agree.
  void Merge(const CountTable &other);
};

/// Pads each sentence with order-1 <s> and one </s> and counts every n-gram
/// of length 1..order. With `vocabulary` given, other tokens become <unk>;
/// otherwise the vocabulary is every corpus token. <s>, </s> and <unk> are
/// always part of the vocabulary. Throws InvalidOrder outside [1, 5].
CountTable CountNGrams(std::span<const Sentence> corpus, int order,
                       const std::set<std::string, std::less<>> *vocabulary = nullptr);

class NGramModel {
 public:
  int order = 1;
  std::set<std::string, std::less<>> vocabulary;
  std::map<NGram, double> log_probs;       // log10
  std::map<NGram, double> backoff_weights;  // log10, histories only

  /// Maps a token to itself if in the vocabulary, else to <unk>.
  std::string MapToken(std::string_view token) const;

  /// log10 p(word | history) by backoff evaluation. Only the last order-1
  /// history tokens matter. Returns -infinity if the (mapped) word has no
  /// unigram.
  double LogProb(std::string_view word, std::span<const std::string> history) const;

  /// Sum of log10 probabilities of every token and </s>, starting from
  /// order-1 <s>. Tokens scored as -infinity are skipped and counted in
  /// `skipped`.
  double SentenceLogProb(std::span<const std::string> tokens, std::size_t *skipped = nullptr) const;

  /// Vocabulary without <s>.
  std::vector<std::string> PredictedVocabulary() const;
};

/// Throws EmptyVocab if nothing but <s> can be predicted.
NGramModel TrainWittenBell(const CountTable &counts);

struct PerplexityResult {
  double perplexity = 0.0;
  double log10_prob = 0.0;
  std::size_t sentences = 0;
  std::size_t scored_tokens = 0;  // including </s>
  std::size_t skipped_tokens = 0;
};

/// 10^(-sum log10 p / N) with N counting words and </s> but not <s>.
/// Throws EmptyCorpus when nothing is scored.
PerplexityResult Perplexity(const NGramModel &model, std::span<const Sentence> corpus);

std::string WriteArpa(const NGramModel &model);
NGramModel ReadArpa(std::string_view text);

}  // namespace lexforge

#endif  // LEXFORGE_NGRAM_H_
