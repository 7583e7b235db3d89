// tools/lexforge.cc

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

// Command-line front end: run / sweep the lexicon, LM and scoring pipeline
// and ad-hoc lexicon statistics, WER and perplexity.

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lexforge/error.h"
#include "lexforge/eval.h"
#include "lexforge/lexicon.h"
#include "lexforge/ngram.h"
#include "lexforge/pipeline.h"
#include "lexforge/text.h"

namespace fs = std::filesystem;
using namespace lexforge;

namespace {

// Holds --<key> overrides registered for every config key.
struct Overrides {
  std::map<std::string, std::string> single;
  std::map<std::string, std::vector<std::string>> repeated;

  void Register(CLI::App *app) {
    for (const auto &key : ConfigKeys()) {
      if (IsRepeatableKey(key)) {
        app->add_option("--" + key, repeated[key], "Override config key '" + key + "' (repeatable)");
      } else {
        app->add_option("--" + key, single[key], "Override config key '" + key + "'");
      }
    }
  }

  void ApplyTo(const CLI::App &app, ConfigEntries &entries) const {
    for (const auto &[key, value] : single)
      if (app.count("--" + key) > 0) SetConfigValue(entries, key, value);
    for (const auto &[key, values] : repeated) {
      if (app.count("--" + key) == 0) continue;
      entries.erase(std::remove_if(entries.begin(), entries.end(),
                                   [&](const auto &e) { return e.first == key; }),
                    entries.end());
      for (const auto &v : values) entries.emplace_back(key, v);
    }
  }
};

ConfigEntries ReadEntries(const fs::path &path) {
  std::string text;
  try {
    text = ReadFile(path);
  } catch (const Error &e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  return ParseConfigEntries(text);
}

fs::path BaseDir(const fs::path &config_path) {
  fs::path base = config_path.parent_path();
  return base.empty() ? fs::path(".") : base;
}

void PrintResult(const StageResult &r) {
  for (const auto &m : r.messages) std::cout << m << '\n';
}

int CmdRun(const fs::path &config_path, const std::string &stage_name, const CLI::App &app,
           const Overrides &overrides) {
  auto stage = ParseStage(stage_name);
  if (!stage) throw ConfigError("unknown stage '" + stage_name + "'");
  ConfigEntries entries = ReadEntries(config_path);
  overrides.ApplyTo(app, entries);
  auto cells = ExpandSweep(entries);
  if (cells.size() != 1) throw ConfigError("config holds list values; use the sweep subcommand");
  RunConfig config = BuildRunConfig(cells.front().entries, BaseDir(config_path));
  PrintResult(RunStage(config, *stage));
  return kExitOk;
}

int CmdSweep(const fs::path &config_path, const std::string &stage_name, const CLI::App &app,
             const Overrides &overrides) {
  auto stage = ParseStage(stage_name);
  if (!stage) throw ConfigError("unknown stage '" + stage_name + "'");
  ConfigEntries entries = ReadEntries(config_path);
  overrides.ApplyTo(app, entries);
  auto cells = ExpandSweep(entries);
  std::vector<ReportRow> rows;
  std::vector<std::string> names;
  fs::path base_out;
  for (const auto &cell : cells) {
    RunConfig config = BuildRunConfig(cell.entries, BaseDir(config_path));
    if (base_out.empty()) base_out = config.output_dir;
    if (!cell.name.empty()) {
      config.output_dir /= cell.name;
    }
    std::cout << "[" << (cell.name.empty() ? "-" : cell.name) << "]\n";
    StageResult r = RunStage(config, *stage);
    PrintResult(r);
    if (r.report) {
      rows.push_back(*r.report);
      names.push_back(cell.name);
    }
  }
  if (!rows.empty()) {
    WriteFile(base_out / "sweep_report.txt", EmitReportText(rows));
    WriteFile(base_out / "sweep_report.csv", EmitReportCsv(rows));
    std::string index;
    for (std::size_t i = 0; i < names.size(); ++i)
      index += std::to_string(i + 1) + '\t' + (names[i].empty() ? "-" : names[i]) + '\n';
    WriteFile(base_out / "sweep_cells.tsv", index);
    std::cout << EmitReportText(rows);
  }
  return kExitOk;
}

int CmdStats(const std::vector<std::string> &files) {
  std::cout << "file\tentries\tvariants\tavg_variants_per_word\tmax_variants\tempty\n";
  for (const auto &f : files) {
    Lexicon lex = ReadLexicon(ReadFile(f));
    LexiconStats s = ComputeStats(lex);
    std::cout << f << '\t' << s.entry_count << '\t' << s.variant_count << '\t'
              << FormatDouble(s.avg_variants_per_word) << '\t' << s.max_variants_single_word << '\t'
              << (s.empty ? 1 : 0) << '\n';
    if (lex.collapsed_duplicates() > 0)
      std::cerr << f << ": collapsed " << lex.collapsed_duplicates() << " duplicate lines\n";
  }
  return kExitOk;
}

int CmdWer(const std::string &ref_path, const std::string &hyp_path, const std::string &policy_name) {
  auto policy = ParsePolicy(policy_name);
  if (!policy) throw ConfigError("policy must be exclude-chunk or strip-symbols");
  auto refs = NormalizeTranscript(ReadFile(ref_path), *policy).utterances;
  auto hyps = NormalizeTranscript(ReadFile(hyp_path), NormalizationPolicy::kStripSymbols, true);
  auto per_conv = ScoreConversations(refs, HypothesisMap(hyps.utterances));
  std::cout << WritePerConversation(per_conv);
  ReportRow row;
  row.am_data = "-";
  row.lm_data = "-";
  row.lexicon = "-";
  row.stats = Aggregate(per_conv);
  row.overall_wer = OverallWer(per_conv);
  std::cout << '\n' << EmitReportText(std::vector<ReportRow>{row});
  return kExitOk;
}

int CmdPpl(const std::string &lm_path, const std::string &text_path, bool transcript,
           const std::string &policy_name) {
  NGramModel model = ReadArpa(ReadFile(lm_path));
  std::vector<Sentence> corpus;
  if (transcript) {
    auto policy = ParsePolicy(policy_name);
    if (!policy) throw ConfigError("policy must be exclude-chunk or strip-symbols");
    for (auto &u : NormalizeTranscript(ReadFile(text_path), *policy).utterances)
      corpus.push_back(std::move(u.tokens));
  } else {
    const std::string text = ReadFile(text_path);
    for (std::string_view line : SplitLines(text)) {
      auto tokens = NormalizeText(line);
      if (!tokens.empty()) corpus.push_back(std::move(tokens));
    }
  }
  PerplexityResult r = Perplexity(model, corpus);
  std::cout << "sentences\t" << r.sentences << "\nscored_tokens\t" << r.scored_tokens
            << "\nskipped_tokens\t" << r.skipped_tokens << "\nlog10_prob\t"
            << FormatDouble(r.log10_prob) << "\nperplexity\t" << FormatDouble(r.perplexity) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"lexforge: pronunciation lexicon, language model and evaluation pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  std::string stage = "all";
  auto *run = app.add_subcommand("run", "Run one pipeline stage (or all) from a config file");
  run->add_option("-c,--config", config_path, "Run configuration file")->required();
  run->add_option("-s,--stage", stage, "lexicon | prune | lm | score | all");
  Overrides run_overrides;
  run_overrides.Register(run);

  auto *sweep = app.add_subcommand("sweep", "Run the cross product of list-valued config keys");
  sweep->add_option("-c,--config", config_path, "Run configuration file")->required();
  sweep->add_option("-s,--stage", stage, "lexicon | prune | lm | score | all");
  Overrides sweep_overrides;
  sweep_overrides.Register(sweep);

  std::vector<std::string> lexicons;
  auto *stats = app.add_subcommand("stats", "Entry statistics of lexicon files");
  stats->add_option("lexicons", lexicons, "Lexicon files")->required();

  std::string ref_path, hyp_path, policy = "strip-symbols";
  auto *wer = app.add_subcommand("wer", "Per-conversation WER of a hypothesis file");
  wer->add_option("--ref", ref_path, "Annotated reference transcript")->required();
  wer->add_option("--hyp", hyp_path, "Hypothesis transcript")->required();
  wer->add_option("--policy", policy, "Reference policy: exclude-chunk | strip-symbols");

  std::string lm_path, text_path;
  bool transcript = false;
  auto *ppl = app.add_subcommand("ppl", "Perplexity of an ARPA model on a text");
  ppl->add_option("--lm", lm_path, "ARPA model")->required();
  ppl->add_option("--text", text_path, "One sentence per line")->required();
  ppl->add_flag("--transcript", transcript, "Read --text as an annotated transcript");
  ppl->add_option("--policy", policy, "Transcript policy: exclude-chunk | strip-symbols");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) return CmdRun(config_path, stage, *run, run_overrides);
    if (*sweep) return CmdSweep(config_path, stage, *sweep, sweep_overrides);
    if (*stats) return CmdStats(lexicons);
    if (*wer) return CmdWer(ref_path, hyp_path, policy);
    if (*ppl) return CmdPpl(lm_path, text_path, transcript, policy);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const MissingDependency &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMissing;
  } catch (const Error &e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}
