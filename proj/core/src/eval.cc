// core/src/eval.cc

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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>

#include "lexforge/error.h"
#include "lexforge/text.h"

namespace lexforge {

namespace {

struct TagInfo {
  std::string_view name;
  std::optional<UtteranceFlag> flag;
};

constexpr TagInfo kTags[] = {
    {"laughter", UtteranceFlag::kLaughter},
    {"singing", UtteranceFlag::kSinging},
    {"onomat", UtteranceFlag::kOnomatopoeia},
    {"incomp", UtteranceFlag::kIncomprehensible},
    {"artefact", UtteranceFlag::kArtefact},
    {"throat", std::nullopt},
    {"broken", std::nullopt},
    {"noise", std::nullopt},
    {"smack", std::nullopt},
};

// Typographic punctuation that may appear in UTF-8 transcripts.
constexpr std::string_view kUtf8Punctuation[] = {
    "\xE2\x80\x9E", "\xE2\x80\x9C", "\xE2\x80\x9D", "\xE2\x80\x9A", "\xE2\x80\x98",
    "\xE2\x80\x99", "\xE2\x80\x93", "\xE2\x80\x94", "\xE2\x80\xA6", "\xC2\xAB",
    "\xC2\xBB",
};

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string Percent(double v) { return FormatFixed(100.0 * v, 2); }

}  // namespace

const char *UtteranceFlagName(UtteranceFlag f) {
  switch (f) {
    case UtteranceFlag::kLaughter: return "laughter";
    case UtteranceFlag::kSinging: return "singing";
    case UtteranceFlag::kOnomatopoeia: return "onomatopoeia";
    case UtteranceFlag::kIncomprehensible: return "incomprehensible";
    case UtteranceFlag::kArtefact: return "artefact";
  }
  return "?";
}

const char *PolicyName(NormalizationPolicy p) {
  return p == NormalizationPolicy::kExcludeChunk ? "exclude-chunk" : "strip-symbols";
}

std::optional<NormalizationPolicy> ParsePolicy(std::string_view s) {
  if (s == "exclude-chunk") return NormalizationPolicy::kExcludeChunk;
  if (s == "strip-symbols") return NormalizationPolicy::kStripSymbols;
  return std::nullopt;
}

std::vector<std::string> NormalizeText(std::string_view text) {
  std::string lowered = Utf8Lower(text);
  std::string cleaned;
  cleaned.reserve(lowered.size());
  for (std::size_t i = 0; i < lowered.size();) {
    bool matched = false;
    for (std::string_view p : kUtf8Punctuation) {
      if (lowered.compare(i, p.size(), p) == 0) {
        cleaned += ' ';
        i += p.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    unsigned char c = static_cast<unsigned char>(lowered[i]);
    if (c < 0x80 && std::ispunct(c)) {
      // Joining punctuation separates words; everything else just goes.
      if (c == '-' || c == '/') cleaned += ' ';
    } else {
      cleaned += static_cast<char>(c);
    }
    ++i;
  }
  return SplitWhitespace(cleaned);
}

NormalizedTranscript NormalizeTranscript(std::string_view text, NormalizationPolicy policy,
                                         bool keep_empty) {
  NormalizedTranscript out;
  std::size_t line_no = 0;
  for (std::string_view line : SplitLines(text)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto cols = SplitChar(line, '\t');
    if (cols.size() < 3)
      throw Error(ErrorCode::kParse, "expected utterance, conversation and speaker ids", line_no);
    Utterance u;
    u.utterance_id = std::string(Trim(cols[0]));
    u.conversation_id = std::string(Trim(cols[1]));
    u.speaker_id = std::string(Trim(cols[2]));
    if (u.utterance_id.empty() || u.conversation_id.empty() || u.speaker_id.empty())
      throw Error(ErrorCode::kParse, "empty id field", line_no);
    std::string raw;
    for (std::size_t i = 3; i < cols.size(); ++i) {
      if (i > 3) raw += ' ';
      raw += cols[i];
    }
    // Remove [tag] markup, collecting flags.
    std::string plain;
    for (std::size_t i = 0; i < raw.size();) {
      if (raw[i] == ']') throw Error(ErrorCode::kParse, "unbalanced ']'", line_no);
      if (raw[i] != '[') {
        plain += raw[i++];
        continue;
      }
      auto close = raw.find(']', i);
      if (close == std::string::npos) throw Error(ErrorCode::kParse, "unterminated '['", line_no);
      std::string_view tag = std::string_view(raw).substr(i + 1, close - i - 1);
      const TagInfo *info = nullptr;
      for (const auto &t : kTags)
        if (t.name == tag) info = &t;
      if (!info) throw Error(ErrorCode::kParse, "unknown markup tag [" + std::string(tag) + "]", line_no);
      if (info->flag) u.flags.insert(*info->flag);
      plain += ' ';
      i = close + 1;
    }
    u.tokens = NormalizeText(plain);
    if (policy == NormalizationPolicy::kExcludeChunk && !u.flags.empty()) {
      ++out.dropped_flagged;
      continue;
    }
    if (u.tokens.empty() && !keep_empty) {
      ++out.dropped_empty;
      continue;
    }
    out.utterances.push_back(std::move(u));
  }
  return out;
}

std::string WriteTranscript(std::span<const Utterance> utterances) {
  std::string out;
  for (const auto &u : utterances)
    out += u.utterance_id + '\t' + u.conversation_id + '\t' + u.speaker_id + '\t' +
           Join(u.tokens, " ") + '\n';
  return out;
}

std::vector<ConversationInfo> CollectConversations(std::span<const Utterance> utterances) {
  std::map<std::string, std::set<std::string>> speakers;
  for (const auto &u : utterances) speakers[u.conversation_id].insert(u.speaker_id);
  std::vector<ConversationInfo> out;
  for (const auto &[conv, spk] : speakers)
    out.push_back({conv, std::vector<std::string>(spk.begin(), spk.end())});
  return out;
}

std::vector<CvSplit> MakeCvSplits(std::span<const ConversationInfo> conversations,
                                  std::span<const Utterance> utterances, std::uint64_t seed,
                                  double validation_fraction) {
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "validation fraction must lie in [0, 1)");
  std::set<std::string> ids;
  for (const auto &c : conversations) {
    std::set<std::string> distinct(c.speakers.begin(), c.speakers.end());
    if (distinct.size() != 2)
      throw Error(ErrorCode::kInvalidConversation,
                  "conversation '" + c.conversation_id + "' has " +
                      std::to_string(distinct.size()) + " speakers, expected 2");
    if (!ids.insert(c.conversation_id).second)
      throw Error(ErrorCode::kInvalidConversation,
                  "conversation '" + c.conversation_id + "' listed twice");
  }
  std::map<std::string, std::set<std::string>> utts_by_conv;
  for (const auto &u : utterances) utts_by_conv[u.conversation_id].insert(u.utterance_id);

  std::vector<CvSplit> splits;
  for (std::size_t index = 0; index < conversations.size(); ++index) {
    const auto &held_out = conversations[index];
    CvSplit split;
    split.split_id = held_out.conversation_id;
    std::set<std::string> spk(held_out.speakers.begin(), held_out.speakers.end());
    split.test_speakers.assign(spk.begin(), spk.end());
    split.validation_fraction = validation_fraction;
    split.seed = seed;
    for (const auto &id : ids)
      if (id != held_out.conversation_id) split.train_conversations.push_back(id);
    split.degenerate = split.train_conversations.empty();

    std::vector<std::string> pool;
    for (const auto &conv : split.train_conversations) {
      auto it = utts_by_conv.find(conv);
      if (it != utts_by_conv.end()) pool.insert(pool.end(), it->second.begin(), it->second.end());
    }
    std::sort(pool.begin(), pool.end());
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index)};
    std::mt19937_64 gen(seq);
    for (std::size_t i = pool.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(gen() % i);
      std::swap(pool[i - 1], pool[j]);
    }
    auto take = static_cast<std::size_t>(std::llround(validation_fraction * static_cast<double>(pool.size())));
    split.validation_utterances.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
    std::sort(split.validation_utterances.begin(), split.validation_utterances.end());
    splits.push_back(std::move(split));
  }
  return splits;
}

std::string WriteCvSplits(std::span<const CvSplit> splits) {
  std::string out = "# split_id\ttest_speakers\ttrain_conversations\tvalidation_utterances\tdegenerate\n";
  if (!splits.empty())
    out += "# seed=" + std::to_string(splits.front().seed) +
           " validation_fraction=" + FormatDouble(splits.front().validation_fraction) + "\n";
  for (const auto &s : splits)
    out += s.split_id + '\t' + Join(s.test_speakers, ",") + '\t' + Join(s.train_conversations, ",") +
           '\t' + Join(s.validation_utterances, ",") + '\t' + (s.degenerate ? "1" : "0") + '\n';
  return out;
}

WerBreakdown &WerBreakdown::operator+=(const WerBreakdown &other) {
  substitutions += other.substitutions;
  deletions += other.deletions;
  insertions += other.insertions;
  ref_length += other.ref_length;
  if (ref_length > 0) {
    wer = static_cast<double>(errors()) / static_cast<double>(ref_length);
    infinite = false;
  } else {
    infinite = errors() > 0;
    wer = infinite ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return *this;
}

WerBreakdown ComputeWer(std::span<const std::string> ref, std::span<const std::string> hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t & { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      at(i, j) = std::min({at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0u : 1u),
                           at(i - 1, j) + 1, at(i, j - 1) + 1});

  WerBreakdown r;
  r.ref_length = n;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      std::size_t diag = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0u : 1u);
      if (diag == at(i, j)) {
        if (ref[i - 1] != hyp[j - 1]) ++r.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i - 1, j) + 1 == at(i, j)) {
      ++r.deletions;
      --i;
    } else {
      ++r.insertions;
      --j;
    }
  }
  if (n == 0) {
    r.infinite = m > 0;
    r.wer = r.infinite ? std::numeric_limits<double>::infinity() : 0.0;
  } else {
    r.wer = static_cast<double>(r.errors()) / static_cast<double>(n);
  }
  return r;
}

std::map<std::string, std::vector<std::string>, std::less<>> HypothesisMap(
    std::span<const Utterance> hyps) {
  std::map<std::string, std::vector<std::string>, std::less<>> out;
  for (const auto &h : hyps) out[h.utterance_id] = h.tokens;
  return out;
}

std::vector<ConversationWer> ScoreConversations(
    std::span<const Utterance> refs,
    const std::map<std::string, std::vector<std::string>, std::less<>> &hyps,
    const std::set<std::string, std::less<>> *conversations) {
  std::map<std::string, WerBreakdown> totals;
  static const std::vector<std::string> kEmpty;
  for (const auto &u : refs) {
    if (conversations && !conversations->count(u.conversation_id)) continue;
    auto it = hyps.find(u.utterance_id);
    const auto &hyp = it == hyps.end() ? kEmpty : it->second;
    totals[u.conversation_id] += ComputeWer(u.tokens, hyp);
  }
  std::vector<ConversationWer> out;
  for (auto &[conv, b] : totals) out.push_back({conv, b});
  return out;
}

SummaryStats Aggregate(std::span<const ConversationWer> per_conversation) {
  SummaryStats s;
  std::vector<double> values;
  for (const auto &c : per_conversation) {
    if (c.breakdown.infinite || !std::isfinite(c.breakdown.wer)) {
      ++s.excluded_infinite;
    } else {
      values.push_back(c.breakdown.wer);
    }
  }
  if (values.empty()) throw Error(ErrorCode::kEmptyResults, "no finite per-conversation WERs");
  // Sorting first makes the floating-point sums independent of input order.
  std::sort(values.begin(), values.end());
  s.n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(sq / static_cast<double>(s.n));
  s.min = values.front();
  s.max = values.back();
  // Guard min <= mean <= max against rounding in the mean.
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

double OverallWer(std::span<const ConversationWer> per_conversation) {
  WerBreakdown total;
  for (const auto &c : per_conversation)
    if (!c.breakdown.infinite) total += c.breakdown;
  return total.ref_length == 0 ? 0.0 : total.wer;
}

std::string EmitReportText(std::span<const ReportRow> rows) {
  std::vector<std::vector<std::string>> table;
  table.push_back({"AM data", "LM data", "Lexicon", "WER mean/std [%]", "min [%]", "max [%]",
                   "overall [%]", "n"});
  for (const auto &r : rows)
    table.push_back({r.am_data, r.lm_data, r.lexicon,
                     Percent(r.stats.mean) + " / " + Percent(r.stats.stddev), Percent(r.stats.min),
                     Percent(r.stats.max), Percent(r.overall_wer), std::to_string(r.stats.n)});
  std::vector<std::size_t> width(table.front().size(), 0);
  for (const auto &row : table)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::string out;
  for (std::size_t r = 0; r < table.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < table[r].size(); ++c) {
      if (c > 0) line += "  ";
      line += table[r][c];
      if (c + 1 < table[r].size()) line.append(width[c] - table[r][c].size(), ' ');
    }
    out += line + '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t w : width) total += w;
      out += std::string(total + 2 * (width.size() - 1), '-') + '\n';
    }
  }
  std::size_t excluded = 0;
  for (const auto &r : rows) excluded += r.stats.excluded_infinite;
  out += "\nStatistics over per-conversation WERs, conversations weighted equally;\n"
         "std is the population standard deviation; overall is token-weighted.\n";
  if (excluded > 0)
    out += "Conversations with an empty reference and non-empty hypothesis excluded: " +
           std::to_string(excluded) + "\n";
  return out;
}

std::string EmitReportCsv(std::span<const ReportRow> rows) {
  std::string out = "am_data,lm_data,lexicon,mean,std,min,max,overall,n,excluded_infinite\r\n";
  for (const auto &r : rows)
    out += CsvField(r.am_data) + ',' + CsvField(r.lm_data) + ',' + CsvField(r.lexicon) + ',' +
           FormatDouble(r.stats.mean) + ',' + FormatDouble(r.stats.stddev) + ',' +
           FormatDouble(r.stats.min) + ',' + FormatDouble(r.stats.max) + ',' +
           FormatDouble(r.overall_wer) + ',' + std::to_string(r.stats.n) + ',' +
           std::to_string(r.stats.excluded_infinite) + "\r\n";
  return out;
}

std::string WritePerConversation(std::span<const ConversationWer> per_conversation) {
  std::string out = "conversation\tsubstitutions\tdeletions\tinsertions\tref_length\twer\n";
  for (const auto &c : per_conversation) {
    const auto &b = c.breakdown;
    out += c.conversation_id + '\t' + std::to_string(b.substitutions) + '\t' +
           std::to_string(b.deletions) + '\t' + std::to_string(b.insertions) + '\t' +
           std::to_string(b.ref_length) + '\t' + (b.infinite ? "inf" : FormatDouble(b.wer)) + '\n';
  }
  return out;
}

}  // namespace lexforge
