// core/include/lexforge/eval.h

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

// Evaluation harness: transcript normalization, conversation-level
// cross-validation splits, WER alignment and per-conversation aggregation.

#ifndef LEXFORGE_EVAL_H_
#define LEXFORGE_EVAL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lexforge {

// ---------------------------------------------------------------------------
// Transcripts

/// Markup that marks a whole chunk as unusable for the exclude-chunk policy.
enum class UtteranceFlag { kLaughter, kSinging, kOnomatopoeia, kIncomprehensible, kArtefact };
const char *UtteranceFlagName(UtteranceFlag f);

enum class NormalizationPolicy { kExcludeChunk, kStripSymbols };
const char *PolicyName(NormalizationPolicy p);
std::optional<NormalizationPolicy> ParsePolicy(std::string_view s);

struct Utterance {
  std::string utterance_id;
  std::string conversation_id;
  std::string speaker_id;
  std::vector<std::string> tokens;
  std::set<UtteranceFlag> flags;
};

struct NormalizedTranscript {
  std::vector<Utterance> utterances;
  std::size_t dropped_flagged = 0;  // exclude-chunk drops
  std::size_t dropped_empty = 0;    // nothing left after normalization
};

/// Reads `utt<TAB>conv<TAB>spk<TAB>text` lines. Tags are the bracketed
/// markers [laughter] [singing] [onomat] [incomp] [artefact] [throat]
/// [broken] [noise] [smack]; any other bracketed tag throws ParseError. Tags
/// are always removed from the text; the first five also flag the utterance,
/// and exclude-chunk drops flagged utterances. Text is lowercased and
/// punctuation is removed. Utterances left without tokens are dropped unless
/// `keep_empty` (used for recognizer output).
NormalizedTranscript NormalizeTranscript(std::string_view text, NormalizationPolicy policy,
                                         bool keep_empty = false);

/// Lowercases and strips punctuation from one chunk of markup-free text.
std::vector<std::string> NormalizeText(std::string_view text);

/// Writes utterances back in the transcript format (markup-free).
std::string WriteTranscript(std::span<const Utterance> utterances);

// ---------------------------------------------------------------------------
// Cross-validation

struct ConversationInfo {
  std::string conversation_id;
  std::vector<std::string> speakers;  // sorted, distinct
};

/// Conversations and their distinct speakers, sorted by id.
std::vector<ConversationInfo> CollectConversations(std::span<const Utterance> utterances);

inline constexpr double kDefaultValidationFraction = 0.10;

struct CvSplit {
  std::string split_id;  // the held-out conversation
  std::vector<std::string> test_speakers;
  std::vector<std::string> train_conversations;  // sorted
  std::vector<std::string> validation_utterances;  // sorted
  double validation_fraction = kDefaultValidationFraction;
  std::uint64_t seed = 0;
  /// No training conversation is left.
  bool degenerate = false;
};

/// One split per conversation. Validation utterances are drawn from the
/// training conversations' utterances with a generator seeded from (seed,
/// split index): round(fraction * n) of them. Throws InvalidConversation for
/// a conversation without exactly two speakers or a repeated id, and
/// InvalidArgument for a fraction outside [0, 1).
std::vector<CvSplit> MakeCvSplits(std::span<const ConversationInfo> conversations,
                                  std::span<const Utterance> utterances, std::uint64_t seed,
                                  double validation_fraction = kDefaultValidationFraction);

std::string WriteCvSplits(std::span<const CvSplit> splits);

// ---------------------------------------------------------------------------
// WER

struct WerBreakdown {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_length = 0;
  /// (S + D + I) / ref_length; 0 for two empty sequences and +infinity for
  /// an empty reference with a non-empty hypothesis.
  double wer = 0.0;
  bool infinite = false;

  std::size_t errors() const { return substitutions + deletions + insertions; }
  /// Sums counts and recomputes the rate.
  WerBreakdown &operator+=(const WerBreakdown &other);
};

/// Unit-cost minimum edit distance alignment. Among minimal alignments the
/// backtrace prefers substitutions/matches, then deletions, then insertions.
WerBreakdown ComputeWer(std::span<const std::string> ref, std::span<const std::string> hyp);

struct ConversationWer {
  std::string conversation_id;
  WerBreakdown breakdown;
};

/// Scores every reference utterance against the hypothesis with the same
/// utterance id (a missing hypothesis counts as empty), summed per
/// conversation. With `conversations` given, only those are scored.
std::vector<ConversationWer> ScoreConversations(
    std::span<const Utterance> refs,
    const std::map<std::string, std::vector<std::string>, std::less<>> &hyps,
    const std::set<std::string, std::less<>> *conversations = nullptr);

std::map<std::string, std::vector<std::string>, std::less<>> HypothesisMap(
    std::span<const Utterance> hyps);

// ---------------------------------------------------------------------------
// Aggregation and reports

struct SummaryStats {
  double mean = 0.0;
  double stddev = 0.0;  // population
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 0;
  std::size_t excluded_infinite = 0;
};

/// Conversations are weighted equally. Infinite entries are left out and
/// counted. Throws EmptyResults if nothing finite remains.
SummaryStats Aggregate(std::span<const ConversationWer> per_conversation);

/// Token-weighted WER over all finite conversations.
double OverallWer(std::span<const ConversationWer> per_conversation);

struct ReportRow {
  std::string am_data;
  std::string lm_data;
  std::string lexicon;
  SummaryStats stats;
  double overall_wer = 0.0;
};

/// Aligned plain-text table (WERs in percent, two decimals) with a footer
/// describing the statistics.
std::string EmitReportText(std::span<const ReportRow> rows);
/// RFC 4180 CSV with a header row; rates as shortest round-trip fractions.
std::string EmitReportCsv(std::span<const ReportRow> rows);

std::string WritePerConversation(std::span<const ConversationWer> per_conversation);

}  // namespace lexforge

#endif  // LEXFORGE_EVAL_H_
