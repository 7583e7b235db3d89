// core/src/rules.cc

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

#include "lexforge/rules.h"

#include <algorithm>
#include <set>
#include <utility>

#include "lexforge/error.h"
#include "lexforge/text.h"

namespace lexforge {

namespace {

constexpr std::string_view kEmptySymbol = "\xE2\x88\x85";  // ∅

bool IsClassRef(std::string_view tok) {
  return tok.size() >= 3 && tok.front() == '[' && tok.back() == ']';
}

std::optional<RuleCategory> ParseCategory(std::string_view s) {
  if (s == "switch") return RuleCategory::kSwitch;
  if (s == "connected-speech") return RuleCategory::kConnectedSpeech;
  if (s == "variety-specific") return RuleCategory::kVarietySpecific;
  if (s == "manual-template") return RuleCategory::kManualTemplate;
  return std::nullopt;
}

std::optional<RuleMode> ParseMode(std::string_view s) {
  if (s == "obligatory") return RuleMode::kObligatory;
  if (s == "optional") return RuleMode::kOptional;
  return std::nullopt;
}

struct ClassDef {
  std::vector<std::string> members;
  bool boundary = false;
};

class RuleParser {
 public:
  RuleSet Parse(std::string_view text, std::string name) {
    RuleSet set;
    set.name = std::move(name);
    auto lines = SplitLines(text);
    // Classes first so that rules may reference classes defined further down.
    for (std::size_t i = 0; i < lines.size(); ++i) {
      auto toks = Tokens(lines[i]);
      if (!toks.empty() && toks[0] == "CLASS") ParseClass(toks, i + 1);
    }
    std::set<std::string> ids;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      auto toks = Tokens(lines[i]);
      if (toks.empty() || toks[0] == "CLASS") continue;
      if (toks[0] != "RULE")
        throw Error(ErrorCode::kParse, "expected RULE or CLASS, got '" + toks[0] + "'", i + 1);
      RewriteRule rule = ParseRule(toks, i + 1);
      if (!ids.insert(rule.id).second)
        throw Error(ErrorCode::kDuplicateRule, "duplicate rule id '" + rule.id + "'", i + 1);
      set.rules.push_back(std::move(rule));
    }
    for (const auto &[cls, def] : classes_) {
      auto members = def.members;
      if (def.boundary) members.push_back("#");
      set.classes.emplace(cls, std::move(members));
    }
    return set;
  }

 private:
  static std::vector<std::string> Tokens(std::string_view line) {
    std::string_view t = Trim(line);
    if (t.empty() || t.front() == '#') return {};
    return SplitWhitespace(t);
  }

  void ParseClass(const std::vector<std::string> &toks, std::size_t line) {
    if (toks.size() < 4 || toks[2] != "=")
      throw Error(ErrorCode::kParse, "expected 'CLASS <NAME> = <sym> ...'", line);
    std::string name = toks[1];
    if (IsClassRef(name)) name = name.substr(1, name.size() - 2);
    if (classes_.count(name))
      throw Error(ErrorCode::kParse, "class '" + name + "' defined twice", line);
    ClassDef def;
    std::set<std::string> members;
    for (std::size_t i = 3; i < toks.size(); ++i) {
      const std::string &tok = toks[i];
      if (tok == "#") {
        def.boundary = true;
      } else if (IsClassRef(tok)) {
        auto it = classes_.find(tok.substr(1, tok.size() - 2));
        if (it == classes_.end())
          throw Error(ErrorCode::kParse, "unknown feature class " + tok, line);
        members.insert(it->second.members.begin(), it->second.members.end());
        def.boundary = def.boundary || it->second.boundary;
      } else {
        members.insert(tok);
      }
    }
    def.members.assign(members.begin(), members.end());
    classes_.emplace(std::move(name), std::move(def));
  }

  PatternElement Element(const std::string &tok, std::size_t line) const {
    PatternElement e;
    if (tok == "#") {
      e.kind = PatternElement::Kind::kBoundary;
      e.symbol = "#";
    } else if (IsClassRef(tok)) {
      std::string name = tok.substr(1, tok.size() - 2);
      auto it = classes_.find(name);
      if (it == classes_.end())
        throw Error(ErrorCode::kParse, "unknown feature class " + tok, line);
      e.kind = PatternElement::Kind::kClass;
      e.symbol = name;
      e.members = it->second.members;
      e.matches_boundary = it->second.boundary;
    } else {
      e.kind = PatternElement::Kind::kPhone;
      e.symbol = tok;
    }
    return e;
  }

  Pattern ParsePattern(const std::vector<std::string> &toks, std::size_t begin, std::size_t end,
                       std::size_t line) const {
    Pattern out;
    if (end - begin == 1 && toks[begin] == kEmptySymbol) return out;
    for (std::size_t i = begin; i < end; ++i) {
      if (toks[i] == kEmptySymbol)
        throw Error(ErrorCode::kParse, "'\xE2\x88\x85' must stand alone", line);
      out.push_back(Element(toks[i], line));
    }
    return out;
  }

  RewriteRule ParseRule(const std::vector<std::string> &toks, std::size_t line) const {
    if (toks.size() < 5) throw Error(ErrorCode::kParse, "truncated RULE statement", line);
    RewriteRule rule;
    rule.line = line;
    rule.id = toks[1];
    auto category = ParseCategory(toks[2]);
    if (!category) throw Error(ErrorCode::kParse, "unknown rule category '" + toks[2] + "'", line);
    auto mode = ParseMode(toks[3]);
    if (!mode) throw Error(ErrorCode::kParse, "unknown rule mode '" + toks[3] + "'", line);
    rule.category = *category;
    rule.mode = *mode;
    if (rule.category == RuleCategory::kSwitch && rule.mode != RuleMode::kObligatory)
      throw Error(ErrorCode::kModeConflict, "switch rule '" + rule.id + "' must be obligatory",
                  line);
    if ((rule.category == RuleCategory::kConnectedSpeech ||
         rule.category == RuleCategory::kVarietySpecific) &&
        rule.mode != RuleMode::kOptional)
      throw Error(ErrorCode::kModeConflict,
                  "phonological rule '" + rule.id + "' must be optional", line);

    auto find = [&](std::string_view what, std::size_t from) {
      for (std::size_t i = from; i < toks.size(); ++i)
        if (toks[i] == what) return i;
      return toks.size();
    };
    std::size_t arrow = find("->", 4);
    if (arrow == toks.size()) throw Error(ErrorCode::kParse, "missing '->'", line);
    std::size_t slash = find("/", arrow + 1);
    if (slash == toks.size()) throw Error(ErrorCode::kParse, "rule lacks '/ <left> _ <right>'", line);

    rule.focus = ParsePattern(toks, 4, arrow, line);
    for (const auto &e : rule.focus) {
      if (e.kind == PatternElement::Kind::kBoundary || e.matches_boundary)
        throw Error(ErrorCode::kParse, "word boundary not allowed in focus", line);
    }
    if (rule.focus.empty() && rule.category != RuleCategory::kManualTemplate)
      throw Error(ErrorCode::kParse, "empty focus in rule '" + rule.id + "'", line);

    Pattern replacement = ParsePattern(toks, arrow + 1, slash, line);
    for (const auto &e : replacement) {
      if (e.kind != PatternElement::Kind::kPhone)
        throw Error(ErrorCode::kParse, "replacement must list phone symbols only", line);
      rule.replacement.push_back(e.symbol);
    }

    if (slash < toks.size()) {
      std::size_t under = find("_", slash + 1);
      if (under == toks.size()) throw Error(ErrorCode::kParse, "context lacks '_'", line);
      if (find("_", under + 1) != toks.size())
        throw Error(ErrorCode::kParse, "context has more than one '_'", line);
      rule.left_context = ParsePattern(toks, slash + 1, under, line);
      rule.right_context = ParsePattern(toks, under + 1, toks.size(), line);
      for (std::size_t i = 1; i < rule.left_context.size(); ++i)
        if (rule.left_context[i].kind == PatternElement::Kind::kBoundary)
          throw Error(ErrorCode::kParse, "'#' must be the first left-context element", line);
      for (std::size_t i = 0; i + 1 < rule.right_context.size(); ++i)
        if (rule.right_context[i].kind == PatternElement::Kind::kBoundary)
          throw Error(ErrorCode::kParse, "'#' must be the last right-context element", line);
    }
    return rule;
  }

  std::map<std::string, ClassDef> classes_;
};

}  // namespace

const char *RuleCategoryName(RuleCategory c) {
  switch (c) {
    case RuleCategory::kSwitch: return "switch";
    case RuleCategory::kConnectedSpeech: return "connected-speech";
    case RuleCategory::kVarietySpecific: return "variety-specific";
    case RuleCategory::kManualTemplate: return "manual-template";
  }
  return "switch";
}

const char *RuleModeName(RuleMode m) {
  return m == RuleMode::kObligatory ? "obligatory" : "optional";
}

bool PatternElement::MatchesPhone(std::string_view phone) const {
  switch (kind) {
    case Kind::kPhone: return symbol == phone;
    case Kind::kClass: return std::binary_search(members.begin(), members.end(), phone);
    case Kind::kBoundary: return false;
  }
  return false;
}

std::string PatternElement::ToString() const {
  return kind == Kind::kClass ? "[" + symbol + "]" : symbol;
}

const RewriteRule *RuleSet::Find(std::string_view id) const {
  for (const auto &r : rules)
    if (r.id == id) return &r;
  return nullptr;
}

RuleSet ParseRuleFile(std::string_view text, std::string name) {
  return RuleParser().Parse(text, std::move(name));
}

std::vector<std::string> UnknownRuleSymbols(const RuleSet &rules, const PhoneInventory &inv) {
  std::vector<std::string> unknown;
  auto note = [&](const std::string &s) {
    if (s == "#" || inv.Contains(s)) return;
    if (std::find(unknown.begin(), unknown.end(), s) == unknown.end()) unknown.push_back(s);
  };
  for (const auto &[name, members] : rules.classes)
    for (const auto &m : members) note(m);
  for (const auto &rule : rules.rules) {
    for (const Pattern *p : {&rule.focus, &rule.left_context, &rule.right_context})
      for (const auto &e : *p)
        if (e.kind == PatternElement::Kind::kPhone) note(e.symbol);
    for (const auto &s : rule.replacement) note(s);
  }
  return unknown;
}

bool MatchContext(const RewriteRule &rule, std::span<const std::string> pron,
                  std::size_t position) {
  const std::size_t n = pron.size();
  const std::size_t flen = rule.focus.size();
  if (flen == 0 || position > n || flen > n - position) return false;
  for (std::size_t i = 0; i < flen; ++i)
    if (!rule.focus[i].MatchesPhone(pron[position + i])) return false;

  // Left context, matched right to left ending just before the focus.
  std::size_t cursor = position;
  for (auto it = rule.left_context.rbegin(); it != rule.left_context.rend(); ++it) {
    if (it->kind == PatternElement::Kind::kBoundary) {
      if (cursor != 0) return false;
      continue;
    }
    if (cursor == 0) {
      if (it->matches_boundary) continue;
      return false;
    }
    if (!it->MatchesPhone(pron[cursor - 1])) return false;
    --cursor;
  }

  cursor = position + flen;
  for (const auto &e : rule.right_context) {
    if (e.kind == PatternElement::Kind::kBoundary) {
      if (cursor != n) return false;
      continue;
    }
    if (cursor == n) {
      if (e.matches_boundary) continue;
      return false;
    }
    if (!e.MatchesPhone(pron[cursor])) return false;
    ++cursor;
  }
  return true;
}

bool RuleMatches(const RewriteRule &rule, std::span<const std::string> pron) {
  for (std::size_t i = 0; i < pron.size(); ++i)
    if (MatchContext(rule, pron, i)) return true;
  return false;
}

Pronunciation ApplyRule(const RewriteRule &rule, const Pronunciation &pron) {
  Pronunciation out;
  out.reserve(pron.size() + rule.replacement.size());
  std::size_t i = 0;
  while (i < pron.size()) {
    if (MatchContext(rule, pron, i)) {
      out.insert(out.end(), rule.replacement.begin(), rule.replacement.end());
      i += rule.focus.size();
    } else {
      out.push_back(pron[i]);
      ++i;
    }
  }
  return out;
}

Pronunciation ApplyObligatory(const Pronunciation &pron, const RuleSet &rules,
                              const PhoneInventory *target) {
  Pronunciation current = pron;
  for (const RewriteRule &rule : rules.rules) {
    if (rule.mode != RuleMode::kObligatory)
      throw Error(ErrorCode::kInvalidArgument,
                  "rule '" + rule.id + "' is optional; obligatory application requested");
    if (!RuleMatches(rule, current)) continue;
    if (target) {
      for (const std::string &s : rule.replacement)
        if (!target->Contains(s))
          throw Error(ErrorCode::kUnknownPhone,
                      "rule '" + rule.id + "' introduces unknown phone '" + s + "'");
    }
    current = ApplyRule(rule, current);
  }
  return current;
}

namespace {

bool BetterKey(const std::vector<std::string> &a, const std::vector<std::string> &b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

std::vector<Variant> GenerateVariants(const Pronunciation &pron, const RuleSet &rules,
                                      std::size_t cap) {
  if (cap == 0) throw Error(ErrorCode::kInvalidCap, "variant cap must be at least 1");
  for (const RewriteRule &rule : rules.rules)
    if (rule.mode != RuleMode::kOptional)
      throw Error(ErrorCode::kInvalidArgument,
                  "rule '" + rule.id + "' is obligatory; variant generation needs optional rules");

  // State after processing a prefix of the rule list: every distinct
  // pronunciation reached so far, with the best-priority fired sequence that
  // reaches it. Best-priority prefixes stay best after any common suffix, so
  // keeping one sequence per pronunciation loses nothing.
  std::map<Pronunciation, std::vector<std::string>> states;
  states.emplace(pron, std::vector<std::string>{});
  for (const RewriteRule &rule : rules.rules) {
    if (rule.focus.empty()) continue;
    std::vector<std::pair<Pronunciation, std::vector<std::string>>> fired;
    for (const auto &[current, ids] : states) {
      if (!RuleMatches(rule, current)) continue;
      Pronunciation next = ApplyRule(rule, current);
      if (next == current) continue;
      auto next_ids = ids;
      next_ids.push_back(rule.id);
      fired.emplace_back(std::move(next), std::move(next_ids));
    }
    for (auto &[next, ids] : fired) {
      auto it = states.find(next);
      if (it == states.end()) {
        states.emplace(std::move(next), std::move(ids));
      } else if (BetterKey(ids, it->second)) {
        it->second = std::move(ids);
      }
    }
  }

  std::vector<Variant> out;
  out.reserve(states.size());
  for (auto &[p, ids] : states) out.push_back({p, ids});
  std::sort(out.begin(), out.end(),
            [](const Variant &a, const Variant &b) { return BetterKey(a.fired, b.fired); });
  if (out.size() > cap) out.resize(cap);
  return out;
}

}  // namespace lexforge
