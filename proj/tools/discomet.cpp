// Copyright 2026 The discomet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// discomet: contrastive metaphor saliency toolkit.
//
//   discomet <command> --config run.cfg [--p-threshold P] [--min-count N]
//                      [--seed S] [--mode M] [--output-dir DIR]

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "discomet/commands.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<double> p_threshold;
  std::optional<uint64_t> min_count;
  std::optional<uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::string> output_dir;
};

void AddCommonFlags(CLI::App *cmd, Overrides &o) {
  cmd->add_option("--config", o.config_path, "key = value run configuration")->required();
  cmd->add_option("--p-threshold", o.p_threshold, "significance level (default 0.05)");
  cmd->add_option("--min-count", o.min_count, "minimum O1+O2 for a label (default 5)");
  cmd->add_option("--seed", o.seed, "sampling seed");
  cmd->add_option("--mode", o.mode, "command-specific mode (annotate: lemma|surface; "
                                    "confusion: within|across|both)");
  cmd->add_option("--output-dir", o.output_dir, "overrides output_dir from the config");
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"discomet: salient source domains and semantic frames of metaphors"};
  app.require_subcommand(1);
  app.set_version_flag("--version", discomet::kVersion);

  static const std::pair<const char *, const char *> kCommands[] = {
      {"annotate", "annotate documents with the lexicon annotator"},
      {"filter", "keyword, metaphoricity-cutoff and target filters"},
      {"sample-background", "year-stratified background corpus sample"},
      {"saliency", "domain saliency and nested frame saliency between two corpora"},
      {"contrast", "saliency between two partitions of one corpus"},
      {"confusion", "weighted-NPMI label confusion and frame overlap"},
      {"agreement", "inter-annotator agreement and adjudication queue"},
      {"report", "text table and figure data from a saliency report"},
  };
  Overrides overrides;
  for (const auto &[name, help] : kCommands) AddCommonFlags(app.add_subcommand(name, help), overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : discomet::cli::kExitUsage;
  }

  std::string command = app.get_subcommands().front()->get_name();
  discomet::cli::Context ctx{std::cout, std::cerr, discomet::cli::LogLevelFromEnv(), {}};
  discomet::Config config;
  try {
    config = discomet::Config::Load(overrides.config_path);
  } catch (const discomet::Error &e) {
    std::cerr << command << ": " << e.what() << '\n';
    return discomet::cli::kExitUsage;
  }
  if (overrides.p_threshold) config.Set("p_threshold", std::to_string(*overrides.p_threshold));
  if (overrides.min_count) config.Set("min_count", std::to_string(*overrides.min_count));
  if (overrides.seed) config.Set("seed", std::to_string(*overrides.seed));
  if (overrides.mode) config.Set("mode", *overrides.mode);
  if (overrides.output_dir) config.Set("output_dir", *overrides.output_dir);
  return discomet::cli::Run(command, config, ctx);
}
