// core/include/lexforge/phone.h

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

// Phone inventories and the three phone-set reductions:
//
//   R1  voiced alveolar/postalveolar fricatives and affricates -> voiceless
//   R2  diphthongs -> their two component phones
//   R3  long vowels -> short counterparts
//
// Reductions are always applied in the order R1, R2, R3 and are compiled into
// an explicit PhoneMap that can be applied to any pronunciation.

#ifndef LEXFORGE_PHONE_H_
#define LEXFORGE_PHONE_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lexforge {

/// A phone sequence. Symbols are SAMPA-style tokens such as "a:", "tS", "aI".
using Pronunciation = std::vector<std::string>;

Pronunciation ParsePronunciation(std::string_view text);
std::string FormatPronunciation(const Pronunciation &pron);

enum class Place { kLabial, kAlveolar, kPostalveolar, kPalatal, kVelar, kGlottal, kNone };
enum class Manner { kPlosive, kFricative, kAffricate, kNasal, kLiquid, kGlide, kVowel };

const char *PlaceName(Place p);
const char *MannerName(Manner m);
std::optional<Place> ParsePlace(std::string_view s);
std::optional<Manner> ParseManner(std::string_view s);

struct Phone {
  std::string symbol;
  Manner manner = Manner::kVowel;
  Place place = Place::kNone;
  bool voiced = false;
  bool long_vowel = false;
  /// Marked as a diphthong; `components` may still be missing.
  bool diphthong = false;
  std::optional<std::pair<std::string, std::string>> components;
  /// Explicit short counterpart of a long vowel; empty means "symbol minus
  /// trailing ':'".
  std::string short_form;

  std::string ShortCounterpart() const;
};

class PhoneInventory {
 public:
  PhoneInventory() = default;
  explicit PhoneInventory(std::string name) : name_(std::move(name)) {}

  /// Throws DuplicatePhone if the symbol is already present and
  /// InvalidArgument if the phone violates a feature invariant.
  void Add(Phone phone);

  const Phone *Find(std::string_view symbol) const;
  bool Contains(std::string_view symbol) const { return Find(symbol) != nullptr; }

  const std::vector<Phone> &phones() const { return phones_; }
  std::size_t size() const { return phones_.size(); }
  bool empty() const { return phones_.empty(); }
  const std::string &name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  std::vector<std::string> Symbols() const;

 private:
  std::string name_;
  std::vector<Phone> phones_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Parses the inventory file format:
///   <symbol> <manner> [place=<p>] [voiced] [long] [short=<s>] [diph[=<s1>+<s2>]]
/// '#' starts a comment, blank lines are ignored.
PhoneInventory ParseInventory(std::string_view text, std::string name = "");
std::string WriteInventory(const PhoneInventory &inv);

/// Total mapping from source phone symbols to target phone sequences.
class PhoneMap {
 public:
  void Set(std::string source, std::vector<std::string> target);
  const std::vector<std::string> *Find(std::string_view source) const;
  const std::map<std::string, std::vector<std::string>, std::less<>> &entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  static PhoneMap Identity(const PhoneInventory &inv);

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> entries_;
};

struct ReductionSet {
  bool devoice = false;        // R1
  bool split_diphthongs = false;  // R2
  bool merge_length = false;   // R3

  static ReductionSet All() { return {true, true, true}; }
  /// Accepts a comma- or '+'-separated list such as "R1,R2,R3"; empty or
  /// "none" means no reduction. Returns nullopt on an unknown token.
  static std::optional<ReductionSet> Parse(std::string_view text);
  bool empty() const { return !devoice && !split_diphthongs && !merge_length; }
  std::string ToString() const;
};

struct Reduction {
  PhoneInventory inventory;
  PhoneMap map;
};

/// Builds the reduced inventory and the composed phone map. The map covers
/// every source phone plus any component phone introduced by R2, so applying
/// it to an already reduced pronunciation is the identity.
Reduction BuildReduction(const PhoneInventory &inv, const ReductionSet &rules);

/// Concatenates per-phone images. Throws UnknownPhone naming the symbol.
Pronunciation MapPronunciation(const Pronunciation &pron, const PhoneMap &map);

struct PronunciationCheck {
  bool ok = false;
  bool empty = false;
  std::vector<std::string> unknown;  // distinct, in order of first occurrence
};

PronunciationCheck ValidatePronunciation(const Pronunciation &pron, const PhoneInventory &inv);

}  // namespace lexforge

#endif  // LEXFORGE_PHONE_H_
