// core/include/lexforge/pipeline.h

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

// Run configuration and the pipeline stages behind the command-line tool.
//
// A run configuration is a TOML-like text file of `key = value` lines
// ('#' comments). `corpus`, `lm_extra` and `rescore_extra` may be repeated.
// Relative paths are resolved against the directory of the config file.
//
// Stages and the artifacts they write under output_dir:
//
//   lexicon  lexicon/standard.lex lexicon/allPVs.lex lexicon/oov_words.txt
//            lexicon/stats.tsv
//   prune    lexicon/usedPVs.lex lexicon/likelyPVs.lex prune/pron_probs.tsv
//            prune/out_of_lexicon.tsv prune/stats.tsv
//   lm       splits/cv_splits.tsv lm/<split>.arpa [lm/<split>.rescore.arpa]
//            lm/perplexity.tsv
//   score    score/per_conversation.tsv score/report.txt score/report.csv
//            [score/rescored.nbest]
//
// After every stage manifest.txt lists the config hash, the seed and a hash
// of every artifact, so individual stages and a monolithic run agree.

#ifndef LEXFORGE_PIPELINE_H_
#define LEXFORGE_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexforge/eval.h"
#include "lexforge/lexicon.h"
#include "lexforge/pruning.h"

namespace lexforge {

/// Invalid or unreadable configuration (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A stage input that is neither configured nor produced yet (exit code 2).
class MissingDependency : public std::runtime_error {
 public:
  explicit MissingDependency(std::string dependency)
      : std::runtime_error("missing dependency: " + dependency), dependency_(std::move(dependency)) {}
  const std::string &dependency() const { return dependency_; }

 private:
  std::string dependency_;
};

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitMissing = 2, kExitData = 3 };

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Every key the configuration understands, in documentation order.
const std::vector<std::string> &ConfigKeys();
bool IsRepeatableKey(std::string_view key);

/// Parses `key = value` lines; values may be double-quoted. Throws
/// ConfigError with the line number on malformed lines or unknown keys.
ConfigEntries ParseConfigEntries(std::string_view text);

/// Replaces every entry of `key` by a single one (appends if absent).
void SetConfigValue(ConfigEntries &entries, const std::string &key, const std::string &value);

/// FNV-1a over the sorted entries, output_dir excluded.
std::string ConfigHash(const ConfigEntries &entries);

struct CorpusSpec {
  std::string name;
  std::filesystem::path path;
  NormalizationPolicy policy = NormalizationPolicy::kStripSymbols;
};

struct RunConfig {
  ConfigEntries entries;
  std::string config_hash;

  std::filesystem::path inventory;
  std::filesystem::path switch_rules;
  std::filesystem::path variant_rules;
  std::optional<std::filesystem::path> manual_addenda;
  std::filesystem::path canonical;
  /// The first corpus is the cross-validated one; the others only add LM
  /// training text.
  std::vector<CorpusSpec> corpora;
  std::optional<std::filesystem::path> alignments;
  std::optional<std::filesystem::path> hypotheses;
  std::optional<std::filesystem::path> nbest;
  LexiconFlavor lexicon_flavor = LexiconFlavor::kStandard;
  int lm_order = 3;
  std::vector<std::filesystem::path> lm_extra;
  std::optional<int> rescore_order;
  std::vector<std::filesystem::path> rescore_extra;
  double rescore_weight = 1.0;
  double threshold = 0.65;
  ProbScheme prob_scheme = ProbScheme::kSumNormalized;
  bool retain_canonical = true;
  std::size_t variant_cap = kDefaultVariantCap;
  ReductionSet reduction = ReductionSet::All();
  std::uint64_t seed = 0;
  double validation_fraction = kDefaultValidationFraction;
  std::string am_data = "-";
  std::filesystem::path output_dir;
};

/// Validates entries and resolves paths against `base_dir`. Throws
/// ConfigError.
RunConfig BuildRunConfig(const ConfigEntries &entries, const std::filesystem::path &base_dir);

/// Reads a config file, applies overrides and builds the config.
RunConfig LoadRunConfig(const std::filesystem::path &path, const ConfigEntries &overrides = {});

enum class Stage { kLexicon, kPrune, kLm, kScore, kAll };
const char *StageName(Stage s);
std::optional<Stage> ParseStage(std::string_view s);

struct StageResult {
  std::vector<std::string> artifacts;  // relative to output_dir
  std::vector<std::string> messages;
  std::optional<ReportRow> report;
};

/// Runs one stage (or all, in order) and rewrites the manifest. Throws
/// MissingDependency for absent inputs and lexforge::Error for bad data.
StageResult RunStage(const RunConfig &config, Stage stage);

/// Lists every artifact under output_dir with its hash.
std::string BuildManifest(const RunConfig &config);

// ---------------------------------------------------------------------------
// Sweeps

struct SweepCell {
  /// Directory-safe `key=value,...` over the swept keys.
  std::string name;
  ConfigEntries entries;
};

/// Expands `[a, b, ...]` values into the cross product (keys in first
/// appearance order, values in list order) and substitutes `{key}`
/// placeholders with the cell's value of that key. A config without lists
/// yields one cell with an empty name.
std::vector<SweepCell> ExpandSweep(const ConfigEntries &entries);

/// Parses a `[a, b]` list value; nullopt for a plain value.
std::optional<std::vector<std::string>> ParseListValue(std::string_view value);

}  // namespace lexforge

#endif  // LEXFORGE_PIPELINE_H_
