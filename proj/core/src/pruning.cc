// core/src/pruning.cc

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

#include <algorithm>

#include "lexforge/error.h"
#include "lexforge/text.h"

namespace lexforge {

std::vector<AlignmentObservation> IngestAlignments(std::string_view text,
                                                   const PhoneInventory *inv) {
  std::vector<AlignmentObservation> out;
  std::size_t line_no = 0;
  for (std::string_view line : SplitLines(text)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto cols = SplitChar(line, '\t');
    if (cols.size() != 7)
      throw Error(ErrorCode::kParse,
                  "expected 7 tab-separated fields, got " + std::to_string(cols.size()), line_no);
    AlignmentObservation o;
    o.utterance_id = std::string(Trim(cols[0]));
    o.conversation_id = std::string(Trim(cols[1]));
    o.speaker_id = std::string(Trim(cols[2]));
    o.word = std::string(Trim(cols[3]));
    o.pron = ParsePronunciation(cols[4]);
    if (o.utterance_id.empty() || o.word.empty())
      throw Error(ErrorCode::kParse, "empty utterance id or word", line_no);
    if (o.pron.empty()) throw Error(ErrorCode::kParse, "missing pronunciation", line_no);
    auto start = ParseDouble(cols[5]);
    auto dur = ParseDouble(cols[6]);
    if (!start || !dur) throw Error(ErrorCode::kParse, "bad start/duration", line_no);
    if (*dur <= 0.0) throw Error(ErrorCode::kParse, "duration must be positive", line_no);
    o.start = *start;
    o.duration = *dur;
    if (inv) {
      auto check = ValidatePronunciation(o.pron, *inv);
      if (!check.ok)
        throw Error(ErrorCode::kUnknownPhone,
                    "line " + std::to_string(line_no) + ": unknown phone(s) " +
                        Join(check.unknown, ","));
    }
    out.push_back(std::move(o));
  }
  return out;
}

const char *ProbSchemeName(ProbScheme s) {
  return s == ProbScheme::kSumNormalized ? "sum-normalized" : "max-normalized";
}

std::optional<ProbScheme> ParseProbScheme(std::string_view s) {
  if (s == "sum-normalized" || s == "sum") return ProbScheme::kSumNormalized;
  if (s == "max-normalized" || s == "max") return ProbScheme::kMaxNormalized;
  return std::nullopt;
}

void PronProbTable::Add(const std::string &word, const Pronunciation &pron, std::uint64_t n) {
  auto &list = words_[word];
  auto it = std::lower_bound(list.begin(), list.end(), pron,
                             [](const PronCount &pc, const Pronunciation &p) { return pc.pron < p; });
  if (it != list.end() && it->pron == pron) {
    it->count += n;
  } else {
    list.insert(it, PronCount{pron, n, 0.0});
  }
  total_tokens_ += n;
  scheme_.reset();
}

void PronProbTable::Merge(const PronProbTable &other) {
  for (const auto &[word, list] : other.words_)
    for (const auto &pc : list) Add(word, pc.pron, pc.count);
}

const std::vector<PronCount> *PronProbTable::Find(std::string_view word) const {
  auto it = words_.find(word);
  return it == words_.end() ? nullptr : &it->second;
}

std::uint64_t PronProbTable::Count(std::string_view word, const Pronunciation &pron) const {
  if (const auto *list = Find(word))
    for (const auto &pc : *list)
      if (pc.pron == pron) return pc.count;
  return 0;
}

std::optional<double> PronProbTable::Probability(std::string_view word,
                                                 const Pronunciation &pron) const {
  if (!scheme_) return std::nullopt;
  if (const auto *list = Find(word))
    for (const auto &pc : *list)
      if (pc.pron == pron) return pc.probability;
  return std::nullopt;
}

PronProbTable CountVariants(std::span<const AlignmentObservation> obs) {
  PronProbTable table;
  for (const auto &o : obs) table.Add(o.word, o.pron);
  return table;
}

PronProbTable EstimateProbs(PronProbTable counts, ProbScheme scheme) {
  for (auto &[word, list] : counts.words_) {
    std::uint64_t denom = 0;
    for (const auto &pc : list)
      denom = scheme == ProbScheme::kSumNormalized ? denom + pc.count : std::max(denom, pc.count);
    for (auto &pc : list)
      pc.probability = denom == 0 ? 0.0 : static_cast<double>(pc.count) / static_cast<double>(denom);
  }
  counts.scheme_ = scheme;
  return counts;
}

std::string WritePronProbTable(const PronProbTable &table) {
  std::string out;
  for (const auto &[word, list] : table.words()) {
    for (const auto &pc : list) {
      out += word + '\t' + FormatPronunciation(pc.pron) + '\t' + std::to_string(pc.count) +
             '\t' + (table.scheme() ? FormatDouble(pc.probability) : std::string("-")) + '\n';
    }
  }
  return out;
}

std::vector<OutOfLexiconObservation> FindOutOfLexicon(
    const Lexicon &all_pvs, std::span<const AlignmentObservation> obs) {
  std::vector<OutOfLexiconObservation> out;
  for (const auto &o : obs) {
    const LexiconEntry *entry = all_pvs.Find(o.word);
    if (!entry) {
      out.push_back({o, "unknown-word"});
    } else if (!entry->Contains(o.pron)) {
      out.push_back({o, "unknown-variant"});
    }
  }
  return out;
}

std::string WriteOutOfLexiconReport(std::span<const OutOfLexiconObservation> report) {
  std::string out;
  for (const auto &r : report) {
    const auto &o = r.observation;
    out += o.utterance_id + '\t' + o.conversation_id + '\t' + o.speaker_id + '\t' + o.word +
           '\t' + FormatPronunciation(o.pron) + '\t' + FormatDouble(o.start) + '\t' +
           FormatDouble(o.duration) + '\t' + r.reason + '\n';
  }
  return out;
}

UsedPvsResult BuildUsedPvs(const Lexicon &all_pvs, const PronProbTable &counts) {
  UsedPvsResult result;
  for (const auto &[word, entry] : all_pvs.entries()) {
    LexiconEntry kept;
    kept.word = word;
    kept.language_tag = entry.language_tag;
    for (const auto &v : entry.variants)
      if (counts.Count(word, v.pron) >= 1) kept.variants.push_back({v.pron, v.provenance, {}});
    if (kept.variants.empty()) kept.variants.push_back({entry.head().pron, entry.head().provenance, {}});
    result.lexicon.Insert(std::move(kept));
  }
  for (const auto &[word, list] : counts.words()) {
    const LexiconEntry *entry = all_pvs.Find(word);
    if (!entry) result.out_of_lexicon_words.push_back(word);
    for (const auto &pc : list)
      if (!entry || !entry->Contains(pc.pron)) {
        PronCount miss = pc;
        miss.probability = 0.0;
        result.out_of_lexicon.push_back(miss);
      }
  }
  return result;
}

Lexicon BuildLikelyPvs(const Lexicon &all_pvs, const PronProbTable &probs,
                       const LikelyPvsOptions &options) {
  if (!(options.threshold > 0.0 && options.threshold < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in (0, 1)");
  if (!probs.scheme())
    throw Error(ErrorCode::kInvalidArgument, "probabilities have not been estimated");
  Lexicon lex(LexiconFlavor::kLikelyPVs);
  for (const auto &[word, entry] : all_pvs.entries()) {
    LexiconEntry kept;
    kept.word = word;
    kept.language_tag = entry.language_tag;
    for (std::size_t i = 0; i < entry.variants.size(); ++i) {
      const auto &v = entry.variants[i];
      bool is_canonical = v.provenance == Provenance::kCanonical;
      auto p = probs.Probability(word, v.pron);
      bool passes = p && *p > options.threshold;
      if (passes || (is_canonical && options.retain_canonical))
        kept.variants.push_back({v.pron, v.provenance, {}});
    }
    if (kept.variants.empty()) kept.variants.push_back({entry.head().pron, entry.head().provenance, {}});
    lex.Insert(std::move(kept));
  }
  return lex;
}

}  // namespace lexforge
