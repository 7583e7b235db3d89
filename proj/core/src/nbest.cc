// core/src/nbest.cc

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

#include "lexforge/nbest.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "lexforge/error.h"
#include "lexforge/text.h"

namespace lexforge {

std::vector<NBestList> ReadNBest(std::string_view text) {
  std::vector<NBestList> lists;
  std::map<std::string, std::size_t, std::less<>> index;
  std::size_t line_no = 0;
  for (std::string_view line : SplitLines(text)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto cols = SplitChar(line, '\t');
    if (cols.size() < 4) throw Error(ErrorCode::kParse, "expected at least 4 fields", line_no);
    std::string utt(Trim(cols[0]));
    if (utt.empty()) throw Error(ErrorCode::kParse, "empty utterance id", line_no);
    auto rank = ParseInt(Trim(cols[1]));
    auto ac = ParseDouble(Trim(cols[2]));
    auto lm = ParseDouble(Trim(cols[3]));
    if (!rank || *rank < 1) throw Error(ErrorCode::kParse, "bad rank", line_no);
    if (!ac || !lm || !std::isfinite(*ac) || !std::isfinite(*lm))
      throw Error(ErrorCode::kParse, "scores must be finite numbers", line_no);
    NBestHypothesis h;
    h.rank = static_cast<std::size_t>(*rank);
    h.acoustic_score = *ac;
    h.lm_score = *lm;
    for (std::size_t i = 4; i < cols.size(); ++i)
      for (auto &tok : SplitWhitespace(cols[i])) h.tokens.push_back(std::move(tok));
    auto [it, inserted] = index.emplace(utt, lists.size());
    if (inserted) lists.push_back(NBestList{utt, {}});
    lists[it->second].hypotheses.push_back(std::move(h));
  }
  return lists;
}

std::string WriteNBest(std::span<const NBestList> lists) {
  std::string out;
  for (const auto &list : lists) {
    for (const auto &h : list.hypotheses) {
      out += list.utterance_id + '\t' + std::to_string(h.rank) + '\t' +
             FormatDouble(h.acoustic_score) + '\t' + FormatDouble(h.lm_score) + '\t' +
             Join(h.tokens, " ") + '\n';
    }
  }
  return out;
}

double CombinedScore(const NBestHypothesis &h, double lm_weight) {
  return h.acoustic_score + lm_weight * h.lm_score;
}

NBestList RescoreNBest(const NBestList &nbest, const NGramModel &model, double lm_weight) {
  if (nbest.hypotheses.empty())
    throw Error(ErrorCode::kEmptyNBest, "no hypotheses for '" + nbest.utterance_id + "'");
  if (!std::isfinite(lm_weight) || lm_weight < 0.0)
    throw Error(ErrorCode::kInvalidArgument, "lm weight must be a finite non-negative number");
  NBestList out = nbest;
  for (auto &h : out.hypotheses) h.lm_score = model.SentenceLogProb(h.tokens);
  std::stable_sort(out.hypotheses.begin(), out.hypotheses.end(),
                   [lm_weight](const NBestHypothesis &x, const NBestHypothesis &y) {
                     return CombinedScore(x, lm_weight) > CombinedScore(y, lm_weight);
                   });
  for (std::size_t i = 0; i < out.hypotheses.size(); ++i) out.hypotheses[i].rank = i + 1;
  return out;
}

}  // namespace lexforge
