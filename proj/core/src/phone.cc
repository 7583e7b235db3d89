// core/src/phone.cc

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

#include "lexforge/phone.h"

#include <algorithm>
#include <set>

#include "lexforge/error.h"
#include "lexforge/text.h"

namespace lexforge {

Pronunciation ParsePronunciation(std::string_view text) { return SplitWhitespace(text); }

std::string FormatPronunciation(const Pronunciation &pron) { return Join(pron, " "); }

const char *PlaceName(Place p) {
  switch (p) {
    case Place::kLabial: return "labial";
    case Place::kAlveolar: return "alveolar";
    case Place::kPostalveolar: return "postalveolar";
    case Place::kPalatal: return "palatal";
    case Place::kVelar: return "velar";
    case Place::kGlottal: return "glottal";
    case Place::kNone: return "none";
  }
  return "none";
}

const char *MannerName(Manner m) {
  switch (m) {
    case Manner::kPlosive: return "plosive";
    case Manner::kFricative: return "fricative";
    case Manner::kAffricate: return "affricate";
    case Manner::kNasal: return "nasal";
    case Manner::kLiquid: return "liquid";
    case Manner::kGlide: return "glide";
    case Manner::kVowel: return "vowel";
  }
  return "vowel";
}

std::optional<Place> ParsePlace(std::string_view s) {
  for (Place p : {Place::kLabial, Place::kAlveolar, Place::kPostalveolar, Place::kPalatal,
                  Place::kVelar, Place::kGlottal, Place::kNone})
    if (s == PlaceName(p)) return p;
  return std::nullopt;
}

std::optional<Manner> ParseManner(std::string_view s) {
  for (Manner m : {Manner::kPlosive, Manner::kFricative, Manner::kAffricate, Manner::kNasal,
                   Manner::kLiquid, Manner::kGlide, Manner::kVowel})
    if (s == MannerName(m)) return m;
  return std::nullopt;
}

std::string Phone::ShortCounterpart() const {
  if (!short_form.empty()) return short_form;
  if (symbol.size() > 1 && symbol.back() == ':') return symbol.substr(0, symbol.size() - 1);
  return symbol;
}

void PhoneInventory::Add(Phone phone) {
  if (phone.symbol.empty() ||
      std::any_of(phone.symbol.begin(), phone.symbol.end(),
                  [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }))
    throw Error(ErrorCode::kInvalidArgument, "phone symbol must be non-empty without whitespace");
  if (phone.manner != Manner::kVowel && (phone.diphthong || phone.long_vowel))
    throw Error(ErrorCode::kInvalidArgument,
                "phone '" + phone.symbol + "': long/diph are only valid for vowels");
  if (phone.components) phone.diphthong = true;
  if (index_.count(phone.symbol))
    throw Error(ErrorCode::kDuplicatePhone, "duplicate phone '" + phone.symbol + "'");
  index_.emplace(phone.symbol, phones_.size());
  phones_.push_back(std::move(phone));
}

const Phone *PhoneInventory::Find(std::string_view symbol) const {
  auto it = index_.find(std::string(symbol));
  return it == index_.end() ? nullptr : &phones_[it->second];
}

std::vector<std::string> PhoneInventory::Symbols() const {
  std::vector<std::string> out;
  out.reserve(phones_.size());
  for (const auto &p : phones_) out.push_back(p.symbol);
  return out;
}

PhoneInventory ParseInventory(std::string_view text, std::string name) {
  PhoneInventory inv(std::move(name));
  std::size_t line_no = 0;
  for (std::string_view raw : SplitLines(text)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto fields = SplitWhitespace(line);
    if (fields.empty()) continue;
    if (fields.size() < 2)
      throw Error(ErrorCode::kParse, "expected '<symbol> <manner> ...'", line_no);
    Phone phone;
    phone.symbol = fields[0];
    auto manner = ParseManner(fields[1]);
    if (!manner) throw Error(ErrorCode::kParse, "unknown manner '" + fields[1] + "'", line_no);
    phone.manner = *manner;
    for (std::size_t i = 2; i < fields.size(); ++i) {
      const std::string &f = fields[i];
      if (f == "voiced") {
        phone.voiced = true;
      } else if (f == "long") {
        phone.long_vowel = true;
      } else if (f == "diph") {
        phone.diphthong = true;
      } else if (f.rfind("place=", 0) == 0) {
        auto place = ParsePlace(f.substr(6));
        if (!place) throw Error(ErrorCode::kParse, "unknown place in '" + f + "'", line_no);
        phone.place = *place;
      } else if (f.rfind("short=", 0) == 0 && f.size() > 6) {
        phone.short_form = f.substr(6);
      } else if (f.rfind("diph=", 0) == 0) {
        std::string spec = f.substr(5);
        auto plus = spec.find('+');
        if (plus == std::string::npos || plus == 0 || plus + 1 == spec.size())
          throw Error(ErrorCode::kParse, "malformed diphthong field '" + f + "'", line_no);
        phone.diphthong = true;
        phone.components = std::make_pair(spec.substr(0, plus), spec.substr(plus + 1));
      } else {
        throw Error(ErrorCode::kParse, "unknown feature field '" + f + "'", line_no);
      }
    }
    if (phone.manner != Manner::kVowel && (phone.long_vowel || phone.diphthong))
      throw Error(ErrorCode::kParse, "long/diph on non-vowel '" + phone.symbol + "'", line_no);
    if (inv.Contains(phone.symbol))
      throw Error(ErrorCode::kDuplicatePhone, "duplicate phone '" + phone.symbol + "'", line_no);
    inv.Add(std::move(phone));
  }
  return inv;
}

std::string WriteInventory(const PhoneInventory &inv) {
  std::string out;
  for (const Phone &p : inv.phones()) {
    out += p.symbol;
    out += ' ';
    out += MannerName(p.manner);
    if (p.place != Place::kNone) out += std::string(" place=") + PlaceName(p.place);
    if (p.voiced) out += " voiced";
    if (p.long_vowel) out += " long";
    if (!p.short_form.empty()) out += " short=" + p.short_form;
    if (p.components)
      out += " diph=" + p.components->first + "+" + p.components->second;
    else if (p.diphthong)
      out += " diph";
    out += '\n';
  }
  return out;
}

void PhoneMap::Set(std::string source, std::vector<std::string> target) {
  entries_[std::move(source)] = std::move(target);
}

const std::vector<std::string> *PhoneMap::Find(std::string_view source) const {
  auto it = entries_.find(source);
  return it == entries_.end() ? nullptr : &it->second;
}

PhoneMap PhoneMap::Identity(const PhoneInventory &inv) {
  PhoneMap map;
  for (const Phone &p : inv.phones()) map.Set(p.symbol, {p.symbol});
  return map;
}

std::optional<ReductionSet> ReductionSet::Parse(std::string_view text) {
  ReductionSet set;
  std::string normalized(text);
  std::replace(normalized.begin(), normalized.end(), '+', ',');
  for (const std::string &raw : SplitChar(normalized, ',')) {
    std::string tok(Trim(raw));
    if (tok.empty() || tok == "none") continue;
    if (tok == "R1" || tok == "r1") set.devoice = true;
    else if (tok == "R2" || tok == "r2") set.split_diphthongs = true;
    else if (tok == "R3" || tok == "r3") set.merge_length = true;
    else return std::nullopt;
  }
  return set;
}

std::string ReductionSet::ToString() const {
  std::vector<std::string> parts;
  if (devoice) parts.push_back("R1");
  if (split_diphthongs) parts.push_back("R2");
  if (merge_length) parts.push_back("R3");
  return parts.empty() ? "none" : Join(parts, ",");
}

namespace {

// One reduction step: rewrites `current` in place and returns the step map
// (only entries for phones that changed).
using StepMap = std::map<std::string, std::vector<std::string>>;

PhoneInventory Without(const PhoneInventory &inv, const StepMap &removed) {
  PhoneInventory out(inv.name());
  for (const Phone &p : inv.phones())
    if (!removed.count(p.symbol)) out.Add(p);
  return out;
}

StepMap DevoiceStep(PhoneInventory &current) {
  StepMap step;
  for (const Phone &p : current.phones()) {
    bool sibilant_class = (p.manner == Manner::kFricative || p.manner == Manner::kAffricate) &&
                          (p.place == Place::kAlveolar || p.place == Place::kPostalveolar);
    if (!sibilant_class || !p.voiced) continue;
    const Phone *target = nullptr;
    for (const Phone &q : current.phones()) {
      if (!q.voiced && q.manner == p.manner && q.place == p.place) {
        target = &q;
        break;
      }
    }
    if (!target)
      throw Error(ErrorCode::kMissingCounterpart,
                  "no voiceless counterpart for '" + p.symbol + "'");
    step[p.symbol] = {target->symbol};
  }
  current = Without(current, step);
  return step;
}

StepMap SplitStep(PhoneInventory &current) {
  StepMap step;
  std::vector<std::string> introduced;
  for (const Phone &p : current.phones()) {
    if (!p.diphthong) continue;
    if (!p.components)
      throw Error(ErrorCode::kMissingDiphthongComponents,
                  "diphthong '" + p.symbol + "' has no diph=<a>+<b> annotation");
    step[p.symbol] = {p.components->first, p.components->second};
    for (const std::string &c : {p.components->first, p.components->second}) {
      if (!current.Contains(c) &&
          std::find(introduced.begin(), introduced.end(), c) == introduced.end())
        introduced.push_back(c);
    }
  }
  PhoneInventory next = Without(current, step);
  for (const std::string &c : introduced) {
    if (next.Contains(c)) continue;
    Phone added;
    added.symbol = c;
    added.manner = Manner::kVowel;
    next.Add(std::move(added));
  }
  current = std::move(next);
  return step;
}

StepMap MergeLengthStep(PhoneInventory &current) {
  StepMap step;
  for (const Phone &p : current.phones()) {
    if (!p.long_vowel) continue;
    std::string short_symbol = p.ShortCounterpart();
    const Phone *target = current.Find(short_symbol);
    if (short_symbol == p.symbol || !target || target->long_vowel)
      throw Error(ErrorCode::kMissingCounterpart,
                  "no short counterpart for long vowel '" + p.symbol + "'");
    step[p.symbol] = {short_symbol};
  }
  current = Without(current, step);
  return step;
}

std::vector<std::string> ApplyStep(const std::vector<std::string> &seq, const StepMap &step) {
  std::vector<std::string> out;
  for (const std::string &s : seq) {
    auto it = step.find(s);
    if (it == step.end()) {
      out.push_back(s);
    } else {
      out.insert(out.end(), it->second.begin(), it->second.end());
    }
  }
  return out;
}

}  // namespace

Reduction BuildReduction(const PhoneInventory &inv, const ReductionSet &rules) {
  PhoneInventory current = inv;
  std::vector<StepMap> steps;
  if (rules.devoice) steps.push_back(DevoiceStep(current));
  if (rules.split_diphthongs) steps.push_back(SplitStep(current));
  if (rules.merge_length) steps.push_back(MergeLengthStep(current));

  PhoneMap map;
  for (const Phone &p : inv.phones()) {
    std::vector<std::string> image{p.symbol};
    for (const StepMap &step : steps) image = ApplyStep(image, step);
    map.Set(p.symbol, std::move(image));
  }
  for (const Phone &p : current.phones())
    if (!map.Find(p.symbol)) map.Set(p.symbol, {p.symbol});

  std::string name = inv.name().empty() ? "reduced" : inv.name() + "-reduced";
  current.set_name(std::move(name));
  return {std::move(current), std::move(map)};
}

Pronunciation MapPronunciation(const Pronunciation &pron, const PhoneMap &map) {
  Pronunciation out;
  out.reserve(pron.size());
  for (const std::string &phone : pron) {
    const auto *image = map.Find(phone);
    if (!image) throw Error(ErrorCode::kUnknownPhone, "unmapped phone '" + phone + "'");
    out.insert(out.end(), image->begin(), image->end());
  }
  return out;
}

PronunciationCheck ValidatePronunciation(const Pronunciation &pron, const PhoneInventory &inv) {
  PronunciationCheck check;
  check.empty = pron.empty();
  for (const std::string &phone : pron) {
    if (!inv.Contains(phone) &&
        std::find(check.unknown.begin(), check.unknown.end(), phone) == check.unknown.end())
      check.unknown.push_back(phone);
  }
  check.ok = !check.empty && check.unknown.empty();
  return check;
}

}  // namespace lexforge
