// core/src/lexicon.cc

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

#include "lexforge/lexicon.h"

#include <algorithm>

#include "lexforge/error.h"
#include "lexforge/text.h"

namespace lexforge {

const char *ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kCanonical: return "canonical";
    case Provenance::kRule: return "rule";
    case Provenance::kManual: return "manual";
    case Provenance::kAligned: return "aligned";
    case Provenance::kMerged: return "merged";
  }
  return "rule";
}

const char *FlavorName(LexiconFlavor f) {
  switch (f) {
    case LexiconFlavor::kStandard: return "standard";
    case LexiconFlavor::kAllPVs: return "allPVs";
    case LexiconFlavor::kUsedPVs: return "usedPVs";
    case LexiconFlavor::kLikelyPVs: return "likelyPVs";
    case LexiconFlavor::kCustom: return "custom";
  }
  return "custom";
}

std::optional<LexiconFlavor> ParseFlavor(std::string_view s) {
  for (LexiconFlavor f : {LexiconFlavor::kStandard, LexiconFlavor::kAllPVs,
                          LexiconFlavor::kUsedPVs, LexiconFlavor::kLikelyPVs,
                          LexiconFlavor::kCustom})
    if (s == FlavorName(f)) return f;
  return std::nullopt;
}

const LexiconVariant *LexiconEntry::Canonical() const {
  if (!variants.empty() && variants.front().provenance == Provenance::kCanonical)
    return &variants.front();
  return nullptr;
}

const LexiconVariant *LexiconEntry::Find(const Pronunciation &pron) const {
  for (const auto &v : variants)
    if (v.pron == pron) return &v;
  return nullptr;
}

namespace {

bool ValidWord(std::string_view w) {
  if (w.empty()) return false;
  return std::none_of(w.begin(), w.end(),
                      [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
}

void CheckEntry(const LexiconEntry &e) {
  if (!ValidWord(e.word))
    throw Error(ErrorCode::kInvalidArgument, "invalid lexicon word '" + e.word + "'");
  if (e.variants.empty())
    throw Error(ErrorCode::kInvalidArgument, "entry '" + e.word + "' has no variants");
  std::size_t canonical = 0;
  for (std::size_t i = 0; i < e.variants.size(); ++i) {
    const auto &v = e.variants[i];
    if (v.pron.empty())
      throw Error(ErrorCode::kInvalidArgument, "empty pronunciation for '" + e.word + "'");
    if (v.provenance == Provenance::kCanonical) {
      ++canonical;
      if (i != 0)
        throw Error(ErrorCode::kInvalidArgument,
                    "canonical variant of '" + e.word + "' must come first");
    }
    for (std::size_t j = 0; j < i; ++j)
      if (e.variants[j].pron == v.pron)
        throw Error(ErrorCode::kInvalidArgument, "duplicate variant for '" + e.word + "'");
  }
  if (canonical > 1)
    throw Error(ErrorCode::kInvalidArgument, "entry '" + e.word + "' has several canonicals");
}

}  // namespace

void Lexicon::Insert(LexiconEntry entry) {
  CheckEntry(entry);
  if (entries_.count(entry.word))
    throw Error(ErrorCode::kInvalidArgument, "word '" + entry.word + "' already present");
  std::string key = entry.word;
  entries_.emplace(std::move(key), std::move(entry));
}

bool Lexicon::AddVariant(const std::string &word, LexiconVariant variant) {
  auto it = entries_.find(word);
  if (it == entries_.end()) {
    LexiconEntry e;
    e.word = word;
    e.variants.push_back(std::move(variant));
    Insert(std::move(e));
    return true;
  }
  if (it->second.Contains(variant.pron)) return false;
  if (variant.provenance == Provenance::kCanonical)
    throw Error(ErrorCode::kInvalidArgument, "second canonical for '" + word + "'");
  it->second.variants.push_back(std::move(variant));
  return true;
}

const LexiconEntry *Lexicon::Find(std::string_view word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

std::size_t Lexicon::VariantCount() const {
  std::size_t n = 0;
  for (const auto &[w, e] : entries_) n += e.variants.size();
  return n;
}

Lexicon BuildStandard(std::span<const CanonicalWord> words, const RuleSet &switch_rules,
                      const PhoneInventory *source) {
  Lexicon lex(LexiconFlavor::kStandard);
  std::map<std::string, const CanonicalWord *> seen;
  for (const CanonicalWord &w : words) {
    auto [it, inserted] = seen.emplace(w.word, &w);
    if (!inserted) {
      if (it->second->pron != w.pron)
        throw Error(ErrorCode::kConflictingCanonical,
                    "word '" + w.word + "' has conflicting canonical pronunciations [" +
                        FormatPronunciation(it->second->pron) + "] and [" +
                        FormatPronunciation(w.pron) + "]");
      continue;
    }
    if (source) {
      auto check = ValidatePronunciation(w.pron, *source);
      if (!check.ok)
        throw Error(ErrorCode::kUnknownPhone,
                    "canonical form of '" + w.word + "' uses unknown phone(s) " +
                        Join(check.unknown, ","));
    }
    LexiconEntry entry;
    entry.word = w.word;
    entry.language_tag = w.language_tag;
    Pronunciation pron = w.language_tag ? w.pron : ApplyObligatory(w.pron, switch_rules, source);
    entry.variants.push_back({std::move(pron), Provenance::kCanonical, std::nullopt});
    lex.Insert(std::move(entry));
  }
  return lex;
}

Lexicon BuildAllPvs(const Lexicon &standard, const RuleSet &variant_rules,
                    std::span<const ManualVariant> manual, std::size_t cap,
                    const PhoneInventory *target) {
  if (cap == 0) throw Error(ErrorCode::kInvalidCap, "variant cap must be at least 1");
  std::map<std::string, std::vector<const ManualVariant *>> manual_by_word;
  for (const ManualVariant &m : manual) {
    if (!standard.Find(m.word))
      throw Error(ErrorCode::kUnknownWord, "manual variant for unknown word '" + m.word + "'");
    if (target) {
      auto check = ValidatePronunciation(m.pron, *target);
      if (!check.ok)
        throw Error(ErrorCode::kUnknownPhone, "manual variant of '" + m.word +
                                                  "' uses unknown phone(s) " +
                                                  Join(check.unknown, ","));
    }
    manual_by_word[m.word].push_back(&m);
  }

  Lexicon lex(LexiconFlavor::kAllPVs);
  for (const auto &[word, std_entry] : standard.entries()) {
    LexiconEntry entry;
    entry.word = word;
    entry.language_tag = std_entry.language_tag;
    const Pronunciation &canonical = std_entry.head().pron;
    if (std_entry.language_tag) {
      entry.variants.push_back({canonical, Provenance::kCanonical, std::nullopt});
    } else {
      for (Variant &v : GenerateVariants(canonical, variant_rules, cap)) {
        Provenance prov = v.fired.empty() ? Provenance::kCanonical : Provenance::kRule;
        entry.variants.push_back({std::move(v.pron), prov, std::nullopt});
      }
    }
    if (auto it = manual_by_word.find(word); it != manual_by_word.end()) {
      for (const ManualVariant *m : it->second)
        if (!entry.Contains(m->pron))
          entry.variants.push_back({m->pron, Provenance::kManual, std::nullopt});
    }
    lex.Insert(std::move(entry));
  }
  return lex;
}

std::string WriteLexicon(const Lexicon &lex) {
  std::string out;
  for (const auto &[word, entry] : lex.entries()) {
    for (const auto &v : entry.variants) {
      out += word;
      out += '\t';
      out += FormatPronunciation(v.pron);
      if (v.probability) {
        out += '\t';
        out += FormatDouble(*v.probability);
      }
      out += '\n';
    }
  }
  return out;
}

namespace {

struct LexLine {
  std::string word;
  Pronunciation pron;
  std::optional<double> prob;
  std::optional<std::string> tag;
};

// Shared by the lexicon, addenda and canonical-list readers. `third` selects
// how a third tab column is interpreted.
enum class ThirdColumn { kProbability, kLanguageTag };

std::optional<LexLine> ParseLexLine(std::string_view line, std::size_t line_no,
                                    ThirdColumn third) {
  if (Trim(line).empty()) return std::nullopt;
  LexLine out;
  if (line.find('\t') != std::string_view::npos) {
    auto cols = SplitChar(line, '\t');
    out.word = std::string(Trim(cols[0]));
    if (cols.size() < 2) throw Error(ErrorCode::kParse, "missing pronunciation", line_no);
    out.pron = ParsePronunciation(cols[1]);
    if (cols.size() >= 3 && !Trim(cols[2]).empty()) {
      if (third == ThirdColumn::kProbability) {
        auto p = ParseDouble(cols[2]);
        if (!p || *p < 0.0 || *p > 1.0)
          throw Error(ErrorCode::kParse, "bad probability '" + cols[2] + "'", line_no);
        out.prob = *p;
      } else {
        out.tag = std::string(Trim(cols[2]));
      }
    }
    if (cols.size() > 3) throw Error(ErrorCode::kParse, "too many columns", line_no);
  } else {
    auto toks = SplitWhitespace(line);
    out.word = toks[0];
    out.pron.assign(toks.begin() + 1, toks.end());
  }
  if (out.word.empty()) throw Error(ErrorCode::kParse, "missing word", line_no);
  if (out.pron.empty())
    throw Error(ErrorCode::kParse, "no phones for '" + out.word + "'", line_no);
  return out;
}

}  // namespace

Lexicon ReadLexicon(std::string_view text, LexiconFlavor flavor) {
  Lexicon lex(flavor);
  std::size_t collapsed = 0;
  std::size_t line_no = 0;
  for (std::string_view line : SplitLines(text)) {
    ++line_no;
    auto parsed = ParseLexLine(line, line_no, ThirdColumn::kProbability);
    if (!parsed) continue;
    bool is_new_word = lex.Find(parsed->word) == nullptr;
    LexiconVariant v{std::move(parsed->pron),
                     is_new_word ? Provenance::kCanonical : Provenance::kRule, parsed->prob};
    if (!lex.AddVariant(parsed->word, std::move(v))) ++collapsed;
  }
  lex.set_collapsed_duplicates(collapsed);
  return lex;
}

std::vector<ManualVariant> ReadManualAddenda(std::string_view text) {
  std::vector<ManualVariant> out;
  std::size_t line_no = 0;
  bool header_seen = false;
  for (std::string_view line : SplitLines(text)) {
    ++line_no;
    std::string_view t = Trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      if (!header_seen && Trim(t.substr(1)) == "manual") header_seen = true;
      continue;
    }
    if (!header_seen)
      throw Error(ErrorCode::kParse, "manual addenda must start with '# manual'", line_no);
    auto parsed = ParseLexLine(line, line_no, ThirdColumn::kProbability);
    out.push_back({std::move(parsed->word), std::move(parsed->pron)});
  }
  return out;
}

std::vector<CanonicalWord> ReadCanonicalList(std::string_view text) {
  std::vector<CanonicalWord> out;
  std::size_t line_no = 0;
  for (std::string_view line : SplitLines(text)) {
    ++line_no;
    std::string_view t = Trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto parsed = ParseLexLine(line, line_no, ThirdColumn::kLanguageTag);
    out.push_back({std::move(parsed->word), std::move(parsed->pron), std::move(parsed->tag)});
  }
  return out;
}

LexiconStats ComputeStats(const Lexicon &lex) {
  LexiconStats s;
  s.entry_count = lex.size();
  s.empty = lex.empty();
  for (const auto &[w, e] : lex.entries()) {
    s.variant_count += e.variants.size();
    s.max_variants_single_word = std::max(s.max_variants_single_word, e.variants.size());
  }
  if (!s.empty)
    s.avg_variants_per_word =
        static_cast<double>(s.variant_count) / static_cast<double>(s.entry_count);
  return s;
}

Lexicon MergeLexicons(const Lexicon &a, const Lexicon &b) {
  Lexicon out(a.flavor() == b.flavor() ? a.flavor() : LexiconFlavor::kCustom);
  for (const auto &note : a.notes()) out.AddNote(note);
  for (const auto &note : b.notes()) out.AddNote(note);
  for (const auto &[word, entry] : a.entries()) out.Insert(entry);
  for (const auto &[word, entry] : b.entries()) {
    const LexiconEntry *existing = out.Find(word);
    if (!existing) {
      out.Insert(entry);
      continue;
    }
    // Copied: AddVariant below may reallocate the entry's variants.
    std::optional<Pronunciation> ca;
    if (const LexiconVariant *c = existing->Canonical()) ca = c->pron;
    const LexiconVariant *cb = entry.Canonical();
    for (const auto &v : entry.variants) {
      LexiconVariant copy = v;
      if (copy.provenance == Provenance::kCanonical) {
        if (ca && *ca == copy.pron) continue;
        copy.provenance = Provenance::kMerged;
      }
      out.AddVariant(word, std::move(copy));
    }
    if (ca && cb && *ca != cb->pron)
      out.AddNote("conflict: '" + word + "' canonical [" + FormatPronunciation(*ca) +
                  "] kept over [" + FormatPronunciation(cb->pron) + "]");
  }
  return out;
}

Lexicon MapLexicon(const Lexicon &lex, const PhoneMap &map) {
  Lexicon out(lex.flavor());
  for (const auto &[word, entry] : lex.entries()) {
    LexiconEntry mapped;
    mapped.word = word;
    mapped.language_tag = entry.language_tag;
    for (const auto &v : entry.variants) {
      Pronunciation p = MapPronunciation(v.pron, map);
      if (!mapped.Contains(p)) mapped.variants.push_back({std::move(p), v.provenance, v.probability});
    }
    out.Insert(std::move(mapped));
  }
  return out;
}

}  // namespace lexforge
