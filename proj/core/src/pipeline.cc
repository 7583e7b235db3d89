// core/src/pipeline.cc

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

#include "lexforge/pipeline.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "lexforge/error.h"
#include "lexforge/nbest.h"
#include "lexforge/ngram.h"
#include "lexforge/phone.h"
#include "lexforge/rules.h"
#include "lexforge/text.h"

namespace fs = std::filesystem;

namespace lexforge {

namespace {

constexpr const char *kManifestName = "manifest.txt";

std::string StripQuotes(std::string_view v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return std::string(v.substr(1, v.size() - 2));
  return std::string(v);
}

std::vector<std::string> ValuesOf(const ConfigEntries &entries, std::string_view key) {
  std::vector<std::string> out;
  for (const auto &[k, v] : entries)
    if (k == key) out.push_back(v);
  return out;
}

std::optional<std::string> SingleValue(const ConfigEntries &entries, const std::string &key) {
  auto values = ValuesOf(entries, key);
  if (values.empty()) return std::nullopt;
  if (values.size() > 1) throw ConfigError("key '" + key + "' given more than once");
  return values.front();
}

fs::path ResolveExisting(const fs::path &base, const std::string &key, const std::string &value) {
  fs::path p(value);
  if (p.is_relative()) p = base / p;
  p = p.lexically_normal();
  if (!fs::is_regular_file(p))
    throw ConfigError("key '" + key + "': file not found: " + p.string());
  return p;
}

int ParseIntKey(const std::string &key, const std::string &value, int lo, int hi) {
  auto v = ParseInt(Trim(value));
  if (!v || *v < lo || *v > hi)
    throw ConfigError("key '" + key + "' must be an integer in [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "], got '" + value + "'");
  return static_cast<int>(*v);
}

double ParseDoubleKey(const std::string &key, const std::string &value) {
  auto v = ParseDouble(Trim(value));
  if (!v) throw ConfigError("key '" + key + "' must be a number, got '" + value + "'");
  return *v;
}

std::string CellSafe(std::string_view s) {
  std::string out;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '.' || c == '-' || c == '_';
    out += ok ? c : '_';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stage helpers

fs::path Out(const RunConfig &c, std::string_view rel) { return c.output_dir / fs::path(rel); }

void Emit(const RunConfig &c, StageResult &r, const std::string &rel, std::string_view contents) {
  WriteFile(Out(c, rel), contents);
  r.artifacts.push_back(rel);
}

void Require(const RunConfig &c, std::string_view rel, std::string_view producer) {
  if (!fs::is_regular_file(Out(c, rel)))
    throw MissingDependency(std::string(rel) + " (produced by --stage " + std::string(producer) + ")");
}

Reduction LoadReduction(const RunConfig &c, PhoneInventory *source) {
  *source = ParseInventory(ReadFile(c.inventory), "source");
  return BuildReduction(*source, c.reduction);
}

std::string NormalizeWord(const std::string &word) {
  auto tokens = NormalizeText(word);
  if (tokens.size() != 1)
    throw Error(ErrorCode::kParse, "word '" + word + "' does not normalize to a single token");
  return tokens.front();
}

void CheckRuleSymbols(const RuleSet &rules, const PhoneInventory &inv) {
  auto unknown = UnknownRuleSymbols(rules, inv);
  if (!unknown.empty())
    throw Error(ErrorCode::kUnknownPhone,
                "rule set '" + rules.name + "' uses phones outside the inventory: " + Join(unknown, ","));
}

std::vector<Utterance> LoadCorpus(const CorpusSpec &spec) {
  return NormalizeTranscript(ReadFile(spec.path), spec.policy).utterances;
}

std::string StatsLine(const char *flavor, const Lexicon &lex) {
  LexiconStats s = ComputeStats(lex);
  return std::string(flavor) + '\t' + std::to_string(s.entry_count) + '\t' +
         std::to_string(s.variant_count) + '\t' + FormatDouble(s.avg_variants_per_word) + '\t' +
         std::to_string(s.max_variants_single_word) + '\t' + (s.empty ? "1" : "0") + '\n';
}

constexpr const char *kStatsHeader = "flavor\tentries\tvariants\tavg_variants_per_word\tmax_variants\tempty\n";

void RunLexiconStage(const RunConfig &c, StageResult &r) {
  PhoneInventory source;
  Reduction red = LoadReduction(c, &source);
  RuleSet switch_rules = ParseRuleFile(ReadFile(c.switch_rules), "switch");
  RuleSet variant_rules = ParseRuleFile(ReadFile(c.variant_rules), "variant");
  CheckRuleSymbols(switch_rules, source);
  CheckRuleSymbols(variant_rules, source);

  auto words = ReadCanonicalList(ReadFile(c.canonical));
  for (auto &w : words) w.word = NormalizeWord(w.word);
  std::vector<ManualVariant> manual;
  if (c.manual_addenda) manual = ReadManualAddenda(ReadFile(*c.manual_addenda));
  for (auto &m : manual) m.word = NormalizeWord(m.word);

  Lexicon standard = BuildStandard(words, switch_rules, &source);
  Lexicon all = BuildAllPvs(standard, variant_rules, manual, c.variant_cap, &source);
  Lexicon standard_out = MapLexicon(standard, red.map);
  Lexicon all_out = MapLexicon(all, red.map);

  Emit(c, r, "lexicon/standard.lex", WriteLexicon(standard_out));
  Emit(c, r, "lexicon/allPVs.lex", WriteLexicon(all_out));
  Emit(c, r, "lexicon/stats.tsv",
       std::string(kStatsHeader) + StatsLine("standard", standard_out) + StatsLine("allPVs", all_out));

  std::set<std::string> oov;
  for (const auto &spec : c.corpora)
    for (const auto &u : LoadCorpus(spec))
      for (const auto &t : u.tokens)
        if (!standard_out.Find(t)) oov.insert(t);
  std::string oov_text;
  for (const auto &w : oov) oov_text += w + '\n';
  Emit(c, r, "lexicon/oov_words.txt", oov_text);
  r.messages.push_back("standard: " + std::to_string(standard_out.size()) + " words; allPVs: " +
                       std::to_string(all_out.VariantCount()) + " variants");
}

void RunPruneStage(const RunConfig &c, StageResult &r) {
  if (!c.alignments) throw MissingDependency("alignments (config key 'alignments')");
  Require(c, "lexicon/allPVs.lex", "lexicon");
  PhoneInventory source;
  Reduction red = LoadReduction(c, &source);
  Lexicon all = ReadLexicon(ReadFile(Out(c, "lexicon/allPVs.lex")), LexiconFlavor::kAllPVs);
  auto obs = IngestAlignments(ReadFile(*c.alignments), &red.inventory);

  PronProbTable probs = EstimateProbs(CountVariants(obs), c.prob_scheme);
  UsedPvsResult used = BuildUsedPvs(all, probs);
  LikelyPvsOptions options;
  options.threshold = c.threshold;
  options.retain_canonical = c.retain_canonical;
  Lexicon likely = BuildLikelyPvs(all, probs, options);

  Emit(c, r, "lexicon/usedPVs.lex", WriteLexicon(used.lexicon));
  Emit(c, r, "lexicon/likelyPVs.lex", WriteLexicon(likely));
  Emit(c, r, "prune/pron_probs.tsv", WritePronProbTable(probs));
  Emit(c, r, "prune/out_of_lexicon.tsv", WriteOutOfLexiconReport(FindOutOfLexicon(all, obs)));
  Emit(c, r, "prune/stats.tsv",
       std::string(kStatsHeader) + StatsLine("usedPVs", used.lexicon) + StatsLine("likelyPVs", likely));
  r.messages.push_back("pruned with " + std::to_string(obs.size()) + " aligned tokens");
}

std::vector<Sentence> ReadPlainText(const fs::path &path) {
  std::vector<Sentence> out;
  const std::string text = ReadFile(path);
  for (std::string_view line : SplitLines(text)) {
    auto tokens = NormalizeText(line);
    if (!tokens.empty()) out.push_back(std::move(tokens));
  }
  return out;
}

std::vector<std::string> ReadSplitIds(const RunConfig &c) {
  std::vector<std::string> ids;
  const std::string text = ReadFile(Out(c, "splits/cv_splits.tsv"));
  for (std::string_view line : SplitLines(text)) {
    if (line.empty() || line.front() == '#') continue;
    ids.push_back(SplitChar(line, '\t').front());
  }
  return ids;
}

void RunLmStage(const RunConfig &c, StageResult &r) {
  Require(c, "lexicon/standard.lex", "lexicon");
  Lexicon standard = ReadLexicon(ReadFile(Out(c, "lexicon/standard.lex")), LexiconFlavor::kStandard);
  std::set<std::string, std::less<>> vocabulary;
  for (const auto &[word, entry] : standard.entries()) vocabulary.insert(word);

  std::vector<Utterance> test_corpus = LoadCorpus(c.corpora.front());
  auto conversations = CollectConversations(test_corpus);
  auto splits = MakeCvSplits(conversations, test_corpus, c.seed, c.validation_fraction);
  Emit(c, r, "splits/cv_splits.tsv", WriteCvSplits(splits));

  std::vector<Sentence> shared;
  for (std::size_t i = 1; i < c.corpora.size(); ++i)
    for (auto &u : LoadCorpus(c.corpora[i])) shared.push_back(std::move(u.tokens));
  for (const auto &p : c.lm_extra)
    for (auto &s : ReadPlainText(p)) shared.push_back(std::move(s));
  std::vector<Sentence> rescore_shared;
  for (const auto &p : c.rescore_extra)
    for (auto &s : ReadPlainText(p)) rescore_shared.push_back(std::move(s));

  std::string ppl = "split\tsentences\tscored_tokens\tskipped_tokens\tperplexity\n";
  for (const auto &split : splits) {
    std::set<std::string> train(split.train_conversations.begin(), split.train_conversations.end());
    std::set<std::string> validation(split.validation_utterances.begin(),
                                     split.validation_utterances.end());
    std::vector<Sentence> train_text;
    std::vector<Sentence> test_text;
    for (const auto &u : test_corpus) {
      if (u.conversation_id == split.split_id) {
        test_text.push_back(u.tokens);
      } else if (train.count(u.conversation_id) && !validation.count(u.utterance_id)) {
        train_text.push_back(u.tokens);
      }
    }
    std::vector<Sentence> text = train_text;
    text.insert(text.end(), shared.begin(), shared.end());
    NGramModel model = TrainWittenBell(CountNGrams(text, c.lm_order, &vocabulary));
    Emit(c, r, "lm/" + split.split_id + ".arpa", WriteArpa(model));
    if (c.rescore_order) {
      text.insert(text.end(), rescore_shared.begin(), rescore_shared.end());
      NGramModel rescore = TrainWittenBell(CountNGrams(text, *c.rescore_order, &vocabulary));
      Emit(c, r, "lm/" + split.split_id + ".rescore.arpa", WriteArpa(rescore));
    }
    PerplexityResult pr = Perplexity(model, test_text);
    ppl += split.split_id + '\t' + std::to_string(pr.sentences) + '\t' +
           std::to_string(pr.scored_tokens) + '\t' + std::to_string(pr.skipped_tokens) + '\t' +
           FormatDouble(pr.perplexity) + '\n';
  }
  Emit(c, r, "lm/perplexity.tsv", ppl);
  r.messages.push_back("trained language models for " + std::to_string(splits.size()) + " splits");
}

std::string LmDataLabel(const RunConfig &c) {
  std::vector<std::string> parts;
  for (const auto &spec : c.corpora) parts.push_back(spec.name);
  for (const auto &p : c.lm_extra) parts.push_back(p.stem().string());
  return Join(parts, "+");
}

void RunScoreStage(const RunConfig &c, StageResult &r) {
  if (!c.hypotheses) throw MissingDependency("hypotheses (config key 'hypotheses')");
  const std::string flavor_file = std::string("lexicon/") + FlavorName(c.lexicon_flavor) + ".lex";
  const bool pruned = c.lexicon_flavor == LexiconFlavor::kUsedPVs ||
                      c.lexicon_flavor == LexiconFlavor::kLikelyPVs;
  Require(c, flavor_file, pruned ? "prune" : "lexicon");
  Require(c, "splits/cv_splits.tsv", "lm");
  auto split_ids = ReadSplitIds(c);

  std::vector<Utterance> refs = LoadCorpus(c.corpora.front());
  auto hyps = HypothesisMap(
      NormalizeTranscript(ReadFile(*c.hypotheses), NormalizationPolicy::kStripSymbols, true)
          .utterances);

  if (c.nbest) {
    std::map<std::string, std::string, std::less<>> conv_of;
    for (const auto &u : refs) conv_of[u.utterance_id] = u.conversation_id;
    std::map<std::string, NGramModel> models;
    std::vector<NBestList> rescored;
    for (const auto &list : ReadNBest(ReadFile(*c.nbest))) {
      auto conv = conv_of.find(list.utterance_id);
      if (conv == conv_of.end()) continue;  // filtered out of the reference
      auto model = models.find(conv->second);
      if (model == models.end()) {
        std::string rel = "lm/" + conv->second + (c.rescore_order ? ".rescore.arpa" : ".arpa");
        Require(c, rel, "lm");
        model = models.emplace(conv->second, ReadArpa(ReadFile(Out(c, rel)))).first;
      }
      NBestList best = RescoreNBest(list, model->second, c.rescore_weight);
      hyps[best.utterance_id] = NormalizeText(Join(best.hypotheses.front().tokens, " "));
      rescored.push_back(std::move(best));
    }
    Emit(c, r, "score/rescored.nbest", WriteNBest(rescored));
  }

  std::set<std::string, std::less<>> scored(split_ids.begin(), split_ids.end());
  auto per_conv = ScoreConversations(refs, hyps, &scored);
  Emit(c, r, "score/per_conversation.tsv", WritePerConversation(per_conv));
  ReportRow row;
  row.am_data = c.am_data;
  row.lm_data = LmDataLabel(c);
  row.lexicon = FlavorName(c.lexicon_flavor);
  row.stats = Aggregate(per_conv);
  row.overall_wer = OverallWer(per_conv);
  std::vector<ReportRow> rows{row};
  Emit(c, r, "score/report.txt", EmitReportText(rows));
  Emit(c, r, "score/report.csv", EmitReportCsv(rows));
  r.report = row;
  r.messages.push_back("mean WER " + FormatFixed(100.0 * row.stats.mean, 2) + "% over " +
                       std::to_string(row.stats.n) + " conversations");
}

}  // namespace

const std::vector<std::string> &ConfigKeys() {
  static const std::vector<std::string> kKeys = {
      "inventory",      "switch_rules",     "variant_rules",  "manual_addenda",
      "canonical",      "corpus",           "alignments",     "hypotheses",
      "nbest",          "lexicon_flavor",   "lm_order",       "lm_extra",
      "rescore_order",  "rescore_extra",    "rescore_weight", "threshold",
      "prob_scheme",    "retain_canonical", "variant_cap",    "reduction",
      "seed",           "validation_fraction", "am_data",     "output_dir",
  };
  return kKeys;
}

bool IsRepeatableKey(std::string_view key) {
  return key == "corpus" || key == "lm_extra" || key == "rescore_extra";
}

ConfigEntries ParseConfigEntries(std::string_view text) {
  ConfigEntries entries;
  const auto &keys = ConfigKeys();
  std::size_t line_no = 0;
  for (std::string_view raw : SplitLines(text)) {
    ++line_no;
    std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    std::string key(Trim(line.substr(0, eq)));
    std::string value = StripQuotes(Trim(line.substr(eq + 1)));
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

void SetConfigValue(ConfigEntries &entries, const std::string &key, const std::string &value) {
  auto first = std::find_if(entries.begin(), entries.end(), [&](const auto &e) { return e.first == key; });
  if (first == entries.end()) {
    entries.emplace_back(key, value);
    return;
  }
  first->second = value;
  entries.erase(std::remove_if(first + 1, entries.end(), [&](const auto &e) { return e.first == key; }),
                entries.end());
}

std::string ConfigHash(const ConfigEntries &entries) {
  ConfigEntries sorted;
  for (const auto &e : entries)
    if (e.first != "output_dir") sorted.push_back(e);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto &a, const auto &b) { return a.first < b.first; });
  std::string canonical;
  for (const auto &[k, v] : sorted) canonical += k + '=' + v + '\n';
  return Hex64(Fnv1a64(canonical));
}

RunConfig BuildRunConfig(const ConfigEntries &entries, const fs::path &base_dir) {
  for (const auto &[k, v] : entries)
    if (ParseListValue(v)) throw ConfigError("key '" + k + "' holds a list; lists are only valid for sweep");
  for (const auto &key : ConfigKeys())
    if (!IsRepeatableKey(key)) SingleValue(entries, key);  // rejects repeats

  RunConfig c;
  c.entries = entries;
  c.config_hash = ConfigHash(entries);
  auto required = [&](const std::string &key) {
    auto v = SingleValue(entries, key);
    if (!v || v->empty()) throw ConfigError("missing required key '" + key + "'");
    return *v;
  };
  auto optional_path = [&](const std::string &key) -> std::optional<fs::path> {
    auto v = SingleValue(entries, key);
    if (!v || v->empty()) return std::nullopt;
    return ResolveExisting(base_dir, key, *v);
  };

  c.inventory = ResolveExisting(base_dir, "inventory", required("inventory"));
  c.switch_rules = ResolveExisting(base_dir, "switch_rules", required("switch_rules"));
  c.variant_rules = ResolveExisting(base_dir, "variant_rules", required("variant_rules"));
  c.canonical = ResolveExisting(base_dir, "canonical", required("canonical"));
  c.manual_addenda = optional_path("manual_addenda");
  c.alignments = optional_path("alignments");
  c.hypotheses = optional_path("hypotheses");
  c.nbest = optional_path("nbest");

  std::set<std::string> corpus_names;
  for (const auto &v : ValuesOf(entries, "corpus")) {
    auto parts = SplitChar(v, ':');
    if (parts.size() != 3) throw ConfigError("corpus must be 'name : path : policy', got '" + v + "'");
    CorpusSpec spec;
    spec.name = std::string(Trim(parts[0]));
    if (spec.name.empty() || !corpus_names.insert(spec.name).second)
      throw ConfigError("corpus names must be non-empty and unique");
    spec.path = ResolveExisting(base_dir, "corpus", std::string(Trim(parts[1])));
    auto policy = ParsePolicy(Trim(parts[2]));
    if (!policy) throw ConfigError("corpus policy must be exclude-chunk or strip-symbols");
    spec.policy = *policy;
    c.corpora.push_back(std::move(spec));
  }
  if (c.corpora.empty()) throw ConfigError("missing required key 'corpus'");
  for (const auto &v : ValuesOf(entries, "lm_extra")) c.lm_extra.push_back(ResolveExisting(base_dir, "lm_extra", v));
  for (const auto &v : ValuesOf(entries, "rescore_extra"))
    c.rescore_extra.push_back(ResolveExisting(base_dir, "rescore_extra", v));

  if (auto v = SingleValue(entries, "lexicon_flavor")) {
    auto f = ParseFlavor(Trim(*v));
    if (!f || *f == LexiconFlavor::kCustom)
      throw ConfigError("lexicon_flavor must be standard, allPVs, usedPVs or likelyPVs");
    c.lexicon_flavor = *f;
  }
  if (auto v = SingleValue(entries, "lm_order")) c.lm_order = ParseIntKey("lm_order", *v, 1, kMaxNGramOrder);
  if (auto v = SingleValue(entries, "rescore_order"); v && !v->empty())
    c.rescore_order = ParseIntKey("rescore_order", *v, 1, kMaxNGramOrder);
  if (!c.rescore_order && !c.rescore_extra.empty())
    throw ConfigError("rescore_extra requires rescore_order");
  if (auto v = SingleValue(entries, "rescore_weight")) {
    c.rescore_weight = ParseDoubleKey("rescore_weight", *v);
    if (!(c.rescore_weight >= 0.0) || !std::isfinite(c.rescore_weight))
      throw ConfigError("rescore_weight must be a finite non-negative number");
  }
  if (auto v = SingleValue(entries, "threshold")) {
    c.threshold = ParseDoubleKey("threshold", *v);
    if (!(c.threshold > 0.0 && c.threshold < 1.0)) throw ConfigError("threshold must lie in (0, 1)");
  }
  if (auto v = SingleValue(entries, "prob_scheme")) {
    auto s = ParseProbScheme(Trim(*v));
    if (!s) throw ConfigError("prob_scheme must be sum-normalized or max-normalized");
    c.prob_scheme = *s;
  }
  if (auto v = SingleValue(entries, "retain_canonical")) {
    std::string_view t = Trim(*v);
    if (t == "true") {
      c.retain_canonical = true;
    } else if (t == "false") {
      c.retain_canonical = false;
    } else {
      throw ConfigError("retain_canonical must be true or false");
    }
  }
  if (auto v = SingleValue(entries, "variant_cap"))
    c.variant_cap = static_cast<std::size_t>(ParseIntKey("variant_cap", *v, 1, 1 << 20));
  if (auto v = SingleValue(entries, "reduction")) {
    auto red = ReductionSet::Parse(Trim(*v));
    if (!red) throw ConfigError("reduction must be a list drawn from R1, R2, R3 or 'none'");
    c.reduction = *red;
  }
  {
    std::string s(Trim(required("seed")));
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ConfigError("seed must be a non-negative integer");
    c.seed = seed;
  }
  if (auto v = SingleValue(entries, "validation_fraction")) {
    c.validation_fraction = ParseDoubleKey("validation_fraction", *v);
    if (!(c.validation_fraction >= 0.0 && c.validation_fraction < 1.0))
      throw ConfigError("validation_fraction must lie in [0, 1)");
  }
  if (auto v = SingleValue(entries, "am_data"); v && !v->empty()) c.am_data = *v;
  fs::path out(required("output_dir"));
  c.output_dir = (out.is_relative() ? base_dir / out : out).lexically_normal();
  return c;
}

RunConfig LoadRunConfig(const fs::path &path, const ConfigEntries &overrides) {
  std::string text;
  try {
    text = ReadFile(path);
  } catch (const Error &e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  ConfigEntries entries = ParseConfigEntries(text);
  for (const auto &[k, v] : overrides) SetConfigValue(entries, k, v);
  fs::path base = path.parent_path();
  if (base.empty()) base = ".";
  return BuildRunConfig(entries, base);
}

const char *StageName(Stage s) {
  switch (s) {
    case Stage::kLexicon: return "lexicon";
    case Stage::kPrune: return "prune";
    case Stage::kLm: return "lm";
    case Stage::kScore: return "score";
    case Stage::kAll: return "all";
  }
  return "?";
}

std::optional<Stage> ParseStage(std::string_view s) {
  for (Stage st : {Stage::kLexicon, Stage::kPrune, Stage::kLm, Stage::kScore, Stage::kAll})
    if (s == StageName(st)) return st;
  return std::nullopt;
}

std::string BuildManifest(const RunConfig &config) {
  std::vector<std::pair<std::string, std::string>> files;
  if (fs::is_directory(config.output_dir)) {
    for (const auto &entry : fs::recursive_directory_iterator(config.output_dir)) {
      if (!entry.is_regular_file()) continue;
      std::string rel = fs::relative(entry.path(), config.output_dir).generic_string();
      if (rel == kManifestName) continue;
      files.emplace_back(rel, Hex64(Fnv1a64(ReadFile(entry.path()))));
    }
  }
  std::sort(files.begin(), files.end());
  std::string out = "config_hash\t" + config.config_hash + "\nseed\t" + std::to_string(config.seed) + "\n";
  for (const auto &[rel, hash] : files) out += rel + '\t' + hash + '\n';
  return out;
}

StageResult RunStage(const RunConfig &config, Stage stage) {
  StageResult result;
  if (stage == Stage::kAll) {
    if (!config.alignments) throw MissingDependency("alignments (config key 'alignments')");
    if (!config.hypotheses) throw MissingDependency("hypotheses (config key 'hypotheses')");
  }
  if (stage == Stage::kLexicon || stage == Stage::kAll) RunLexiconStage(config, result);
  if (stage == Stage::kPrune || stage == Stage::kAll) RunPruneStage(config, result);
  if (stage == Stage::kLm || stage == Stage::kAll) RunLmStage(config, result);
  if (stage == Stage::kScore || stage == Stage::kAll) RunScoreStage(config, result);
  WriteFile(config.output_dir / kManifestName, BuildManifest(config));
  return result;
}

std::optional<std::vector<std::string>> ParseListValue(std::string_view value) {
  std::string_view v = Trim(value);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') return std::nullopt;
  std::vector<std::string> items;
  for (std::string_view item : SplitChar(v.substr(1, v.size() - 2), ',')) {
    std::string s = StripQuotes(Trim(item));
    if (s.empty()) throw ConfigError("empty item in list value '" + std::string(value) + "'");
    items.push_back(std::move(s));
  }
  if (items.empty()) throw ConfigError("empty list value");
  return items;
}

std::vector<SweepCell> ExpandSweep(const ConfigEntries &entries) {
  // Each entry becomes an axis; plain values are axes of length one.
  std::vector<std::vector<std::string>> axes;
  for (const auto &[k, v] : entries) {
    auto list = ParseListValue(v);
    axes.push_back(list ? *list : std::vector<std::string>{v});
  }
  std::vector<SweepCell> cells;
  std::vector<std::size_t> pick(axes.size(), 0);
  while (true) {
    SweepCell cell;
    std::vector<std::string> name_parts;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      cell.entries.emplace_back(entries[i].first, axes[i][pick[i]]);
      if (axes[i].size() > 1) name_parts.push_back(entries[i].first + "=" + CellSafe(axes[i][pick[i]]));
    }
    cell.name = Join(name_parts, ",");
    // Substitute {key} placeholders with single-valued keys of this cell.
    std::map<std::string, std::string> values;
    for (const auto &[k, v] : cell.entries)
      if (!IsRepeatableKey(k)) values[k] = v;
    for (auto &[k, v] : cell.entries) {
      std::string out;
      for (std::size_t i = 0; i < v.size();) {
        auto close = v[i] == '{' ? v.find('}', i) : std::string::npos;
        if (close != std::string::npos) {
          std::string ref = v.substr(i + 1, close - i - 1);
          auto it = values.find(ref);
          if (it != values.end()) {
            out += it->second;
            i = close + 1;
            continue;
          }
          const auto &keys = ConfigKeys();
          if (std::find(keys.begin(), keys.end(), ref) != keys.end())
            throw ConfigError("placeholder {" + ref + "} in '" + k + "' has no single value");
        }
        out += v[i++];
      }
      v = std::move(out);
    }
    cells.push_back(std::move(cell));
    // Odometer increment, last axis fastest.
    std::size_t i = axes.size();
    while (i > 0) {
      --i;
      if (++pick[i] < axes[i].size()) break;
      pick[i] = 0;
      if (i == 0) return cells;
    }
    if (axes.empty()) return cells;
  }
}

}  // namespace lexforge
