// core/include/lexforge/nbest.h

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

// N-best lists and their rescoring with an n-gram model.

#ifndef LEXFORGE_NBEST_H_
#define LEXFORGE_NBEST_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexforge/ngram.h"

namespace lexforge {

struct NBestHypothesis {
  std::size_t rank = 0;  // 1-based
  double acoustic_score = 0.0;
  double lm_score = 0.0;  // log10
  std::vector<std::string> tokens;
};

struct NBestList {
  std::string utterance_id;
  std::vector<NBestHypothesis> hypotheses;
};

/// TSV `utt<TAB>rank<TAB>acoustic<TAB>lm<TAB>tokens`; the token field is
/// space-separated (further tab-separated fields are appended to it). Lists
/// are returned in order of first appearance, hypotheses in file order.
/// Non-finite scores throw ParseError.
std::vector<NBestList> ReadNBest(std::string_view text);
std::string WriteNBest(std::span<const NBestList> lists);

/// Replaces each lm_score by the model's sentence log10 probability and
/// sorts stably by acoustic + lm_weight * lm_score, best first; ranks are
/// renumbered. Throws EmptyNBest for an empty list and InvalidArgument for a
/// negative or non-finite weight.
NBestList RescoreNBest(const NBestList &nbest, const NGramModel &model, double lm_weight = 1.0);

/// Combined score used for ranking.
double CombinedScore(const NBestHypothesis &h, double lm_weight);

}  // namespace lexforge

#endif  // LEXFORGE_NBEST_H_
