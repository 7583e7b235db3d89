// core/src/ngram.cc

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

#include "lexforge/ngram.h"

#include <cmath>
#include <functional>
#include <limits>
#include <unordered_map>

#include "lexforge/error.h"
#include "lexforge/text.h"

namespace lexforge {

namespace {

// Hash for n-gram keys of the unordered scratch tables used while counting
// and training; the public tables stay ordered for deterministic output.
struct NGramHash {
  std::size_t operator()(const NGram &ng) const noexcept {
    std::size_t h = 0;
    for (const auto &w : ng) h = h * 1099511628211ULL ^ std::hash<std::string>{}(w);
    return h;
  }
};

template <typename V>
using NGramTable = std::unordered_map<NGram, V, NGramHash>;

}  // namespace

std::uint64_t CountTable::Count(const NGram &ngram) const {
  auto it = counts.find(ngram);
  return it == counts.end() ? 0 : it->second;
}

void CountTable::Merge(const CountTable &other) {
  if (other.order != order)
    throw Error(ErrorCode::kInvalidOrder, "cannot merge count tables of different order");
  for (const auto &[ng, c] : other.counts) counts[ng] += c;
  vocabulary.insert(other.vocabulary.begin(), other.vocabulary.end());
}

CountTable CountNGrams(std::span<const Sentence> corpus, int order,
                       const std::set<std::string, std::less<>> *vocabulary) {
  if (order < 1 || order > kMaxNGramOrder)
    throw Error(ErrorCode::kInvalidOrder,
                "order " + std::to_string(order) + " outside [1, " +
                    std::to_string(kMaxNGramOrder) + "]");
  CountTable table;
  table.order = order;
  if (vocabulary) table.vocabulary = *vocabulary;
  table.vocabulary.emplace(kSentenceBegin);
  table.vocabulary.emplace(kSentenceEnd);
  table.vocabulary.emplace(kUnknownWord);

  NGramTable<std::uint64_t> counts;
  Sentence padded;
  for (const Sentence &sentence : corpus) {
    padded.assign(static_cast<std::size_t>(order - 1), std::string(kSentenceBegin));
    for (const std::string &tok : sentence) {
      if (vocabulary && !table.vocabulary.count(tok)) {
        padded.emplace_back(kUnknownWord);
      } else {
        if (!vocabulary) table.vocabulary.insert(tok);
        padded.push_back(tok);
      }
    }
    padded.emplace_back(kSentenceEnd);
    for (std::size_t i = 0; i < padded.size(); ++i) {
      for (int n = 1; n <= order && i + n <= padded.size(); ++n)
        ++counts[NGram(padded.begin() + static_cast<std::ptrdiff_t>(i),
                       padded.begin() + static_cast<std::ptrdiff_t>(i + n))];
    }
  }
  for (auto &[ng, c] : counts) table.counts.emplace(ng, c);
  return table;
}

std::string NGramModel::MapToken(std::string_view token) const {
  if (vocabulary.count(token)) return std::string(token);
  return std::string(kUnknownWord);
}

double NGramModel::LogProb(std::string_view word, std::span<const std::string> history) const {
  const std::size_t max_hist = static_cast<std::size_t>(order - 1);
  const std::size_t hlen = std::min(max_hist, history.size());
  NGram key;
  key.reserve(hlen + 1);
  for (std::size_t i = history.size() - hlen; i < history.size(); ++i)
    key.push_back(MapToken(history[i]));
  key.push_back(MapToken(word));

  double backoff = 0.0;
  for (std::size_t n = hlen;; --n) {
    // key currently holds the last n history tokens followed by the word.
    auto it = log_probs.find(key);
    if (it != log_probs.end()) return backoff + it->second;
    if (n == 0) break;
    NGram context(key.begin(), key.end() - 1);
    auto bo = backoff_weights.find(context);
    if (bo != backoff_weights.end()) backoff += bo->second;
    key.erase(key.begin());
  }
  return -std::numeric_limits<double>::infinity();
}

double NGramModel::SentenceLogProb(std::span<const std::string> tokens,
                                   std::size_t *skipped) const {
  Sentence history(static_cast<std::size_t>(std::max(order - 1, 0)),
                   std::string(kSentenceBegin));
  double total = 0.0;
  std::size_t miss = 0;
  auto score = [&](std::string_view w) {
    double lp = LogProb(w, history);
    if (std::isinf(lp)) {
      ++miss;
    } else {
      total += lp;
    }
    history.emplace_back(w);
  };
  for (const std::string &t : tokens) score(t);
  score(kSentenceEnd);
  if (skipped) *skipped = miss;
  return total;
}

std::vector<std::string> NGramModel::PredictedVocabulary() const {
  std::vector<std::string> out;
  for (const auto &w : vocabulary)
    if (w != kSentenceBegin) out.push_back(w);
  return out;
}

NGramModel TrainWittenBell(const CountTable &counts) {
  if (counts.order < 1 || counts.order > kMaxNGramOrder)
    throw Error(ErrorCode::kInvalidOrder, "count table order out of range");
  NGramModel model;
  model.order = counts.order;
  model.vocabulary = counts.vocabulary;
  const auto predicted = model.PredictedVocabulary();
  if (predicted.empty()) throw Error(ErrorCode::kEmptyVocab, "no predictable words");
  const double uniform = 1.0 / static_cast<double>(predicted.size());

  // Continuation totals c(h) and types T(h) per history, over predictable
  // words only. Keyed by the history n-gram (length 0..order-1).
  struct HistoryStats {
    std::uint64_t tokens = 0;
    std::uint64_t types = 0;
  };
  NGramTable<HistoryStats> history_stats;
  for (const auto &[ng, c] : counts.counts) {
    if (c == 0 || ng.back() == kSentenceBegin) continue;
    if (!counts.vocabulary.count(ng.back()))
      throw Error(ErrorCode::kInvalidArgument, "counted token '" + ng.back() + "' not in vocabulary");
    auto &hs = history_stats[NGram(ng.begin(), ng.end() - 1)];
    hs.tokens += c;
    hs.types += 1;
  }

  // Interpolated probabilities, level by level. `lower` holds level n-1.
  NGramTable<double> lower;
  for (int n = 1; n <= counts.order; ++n) {
    NGramTable<double> level;
    auto interpolate = [&](const NGram &ng, std::uint64_t c) {
      NGram history(ng.begin(), ng.end() - 1);
      double backed = uniform;
      if (n > 1) backed = lower.at(NGram(ng.begin() + 1, ng.end()));
      auto hs = history_stats.find(history);
      if (hs == history_stats.end() || hs->second.tokens == 0) return backed;
      double ch = static_cast<double>(hs->second.tokens);
      double th = static_cast<double>(hs->second.types);
      return (static_cast<double>(c) + th * backed) / (ch + th);
    };
    if (n == 1) {
      for (const std::string &w : predicted) level[NGram{w}] = interpolate(NGram{w}, counts.Count(NGram{w}));
    } else {
      for (const auto &[ng, c] : counts.counts) {
        if (static_cast<int>(ng.size()) != n || c == 0 || ng.back() == kSentenceBegin) continue;
        level[ng] = interpolate(ng, c);
      }
    }
    for (const auto &[ng, p] : level) model.log_probs[ng] = std::log10(p);
    lower = std::move(level);
  }

  // <s>-final n-grams are never predicted but carry histories.
  if (model.vocabulary.count(kSentenceBegin))
    model.log_probs[NGram{std::string(kSentenceBegin)}] = kNeverPredicted;
  for (const auto &[ng, c] : counts.counts) {
    if (c > 0 && ng.back() == kSentenceBegin && static_cast<int>(ng.size()) < counts.order)
      model.log_probs.emplace(ng, kNeverPredicted);
  }

  for (const auto &[history, hs] : history_stats) {
    if (history.empty() || hs.tokens == 0) continue;
    if (!model.log_probs.count(history)) continue;
    double bow = static_cast<double>(hs.types) /
                 (static_cast<double>(hs.tokens) + static_cast<double>(hs.types));
    model.backoff_weights[history] = std::log10(bow);
  }
  return model;
}

PerplexityResult Perplexity(const NGramModel &model, std::span<const Sentence> corpus) {
  PerplexityResult r;
  for (const Sentence &s : corpus) {
    std::size_t skipped = 0;
    r.log10_prob += model.SentenceLogProb(s, &skipped);
    r.scored_tokens += s.size() + 1 - skipped;
    r.skipped_tokens += skipped;
    ++r.sentences;
  }
  if (r.scored_tokens == 0) throw Error(ErrorCode::kEmptyCorpus, "nothing to score");
  r.perplexity = std::pow(10.0, -r.log10_prob / static_cast<double>(r.scored_tokens));
  return r;
}

std::string WriteArpa(const NGramModel &model) {
  std::vector<std::vector<const std::pair<const NGram, double> *>> by_order(
      static_cast<std::size_t>(model.order) + 1);
  for (const auto &entry : model.log_probs) {
    if (entry.first.empty() || static_cast<int>(entry.first.size()) > model.order)
      throw Error(ErrorCode::kInvalidArgument, "n-gram length outside model order");
    by_order[entry.first.size()].push_back(&entry);
  }
  std::string out = "\n\\data\\\n";
  for (int n = 1; n <= model.order; ++n)
    out += "ngram " + std::to_string(n) + "=" + std::to_string(by_order[n].size()) + "\n";
  for (int n = 1; n <= model.order; ++n) {
    out += "\n\\" + std::to_string(n) + "-grams:\n";
    for (const auto *entry : by_order[n]) {
      out += FormatDouble(entry->second);
      out += '\t';
      out += Join(entry->first, " ");
      if (n < model.order) {
        auto bo = model.backoff_weights.find(entry->first);
        if (bo != model.backoff_weights.end()) {
          out += '\t';
          out += FormatDouble(bo->second);
        }
      }
      out += '\n';
    }
  }
  out += "\n\\end\\\n";
  return out;
}

NGramModel ReadArpa(std::string_view text) {
  auto lines = SplitLines(text);
  std::size_t i = 0;
  auto skip_blank = [&] {
    while (i < lines.size() && Trim(lines[i]).empty()) ++i;
  };
  skip_blank();
  if (i >= lines.size() || Trim(lines[i]) != "\\data\\")
    throw Error(ErrorCode::kParse, "missing \\data\\ header", i + 1);
  ++i;
  std::vector<std::size_t> declared;
  for (; i < lines.size(); ++i) {
    std::string_view t = Trim(lines[i]);
    if (t.empty()) continue;
    if (t.rfind("ngram ", 0) != 0) break;
    auto eq = t.find('=');
    auto n = ParseInt(t.substr(6, eq == std::string_view::npos ? 0 : eq - 6));
    auto c = eq == std::string_view::npos ? std::nullopt : ParseInt(t.substr(eq + 1));
    if (!n || !c || *n < 1 || *c < 0) throw Error(ErrorCode::kParse, "bad ngram count line", i + 1);
    if (static_cast<std::size_t>(*n) != declared.size() + 1)
      throw Error(ErrorCode::kParse, "ngram counts out of order", i + 1);
    declared.push_back(static_cast<std::size_t>(*c));
  }
  if (declared.empty()) throw Error(ErrorCode::kParse, "no ngram counts in header", i + 1);

  NGramModel model;
  model.order = static_cast<int>(declared.size());
  if (model.order > kMaxNGramOrder)
    throw Error(ErrorCode::kInvalidOrder, "ARPA order above " + std::to_string(kMaxNGramOrder));
  bool ended = false;
  for (std::size_t n = 1; n <= declared.size(); ++n) {
    skip_blank();
    std::string expect = "\\" + std::to_string(n) + "-grams:";
    if (i >= lines.size() || Trim(lines[i]) != expect)
      throw Error(ErrorCode::kParse, "expected " + expect, i + 1);
    ++i;
    std::size_t seen = 0;
    for (; i < lines.size(); ++i) {
      std::string_view t = Trim(lines[i]);
      if (t.empty()) continue;
      if (t.front() == '\\') break;
      auto fields = SplitWhitespace(t);
      if (fields.size() != n + 1 && fields.size() != n + 2)
        throw Error(ErrorCode::kParse, "malformed " + std::to_string(n) + "-gram line", i + 1);
      auto lp = ParseDouble(fields[0]);
      if (!lp) throw Error(ErrorCode::kParse, "bad log probability '" + fields[0] + "'", i + 1);
      NGram ng(fields.begin() + 1, fields.begin() + 1 + static_cast<std::ptrdiff_t>(n));
      if (fields.size() == n + 2) {
        auto bo = ParseDouble(fields.back());
        if (!bo) throw Error(ErrorCode::kParse, "bad backoff weight '" + fields.back() + "'", i + 1);
        model.backoff_weights[ng] = *bo;
      }
      if (n == 1) model.vocabulary.insert(ng[0]);
      if (!model.log_probs.emplace(std::move(ng), *lp).second)
        throw Error(ErrorCode::kParse, "duplicate n-gram", i + 1);
      ++seen;
    }
    if (seen != declared[n - 1])
      throw Error(ErrorCode::kParse,
                  "header declares " + std::to_string(declared[n - 1]) + " " +
                      std::to_string(n) + "-grams, body has " + std::to_string(seen),
                  i + 1);
  }
  skip_blank();
  if (i < lines.size() && Trim(lines[i]) == "\\end\\") ended = true;
  if (!ended) throw Error(ErrorCode::kParse, "missing \\end\\ marker", i + 1);
  return model;
}

}  // namespace lexforge
