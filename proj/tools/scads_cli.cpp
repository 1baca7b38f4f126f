/*
 * Copyright 2026 The scads Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// scads: simulate datasets, replay the fusion game, run ablations.
//
// Exit codes: 0 success, 2 invalid input (flags, configs, datasets),
// 1 runtime failure.

#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "scads/scads.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

struct RunFlags {
  std::string dataset;
  std::string config;
  std::string out_dir;
  std::string split_file;
  double train_frac = 0.7;
  bool no_update_eval = false;
  bool freeze_reputation = false;
  bool naive_credit = false;
  bool no_guardrail = false;
  bool context_agnostic = false;
  std::uint64_t seed = 0;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--dataset", f.dataset, "JSONL dataset")->required();
  cmd->add_option("--config", f.config, "game config (key = value)");
  cmd->add_option("--out-dir", f.out_dir, "directory for outputs");
  cmd->add_option("--seed", f.seed, "seed recorded in the manifest");
  cmd->add_option("--train-frac", f.train_frac, "leading fraction of rounds used for training")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--split-file", f.split_file, "file listing training round_ids");
  cmd->add_flag("--no-update-eval", f.no_update_eval, "freeze the public state on the test split");
  cmd->add_flag("--freeze-reputation", f.freeze_reputation, "keep uniform reputation");
  cmd->add_flag("--naive-credit", f.naive_credit, "solo credit instead of Shapley");
  cmd->add_flag("--no-guardrail", f.no_guardrail, "disable the correlation guardrail");
  cmd->add_flag("--context-agnostic", f.context_agnostic, "global reliabilities and prior");
}

scads_run_options to_options(const RunFlags& f, bool has_seed) {
  scads_run_options o;
  scads_run_options_init(&o);
  o.dataset_path = f.dataset.c_str();
  o.config_path = f.config.c_str();
  o.out_dir = f.out_dir.c_str();
  o.split_file = f.split_file.c_str();
  o.train_frac = f.train_frac;
  o.no_update_eval = f.no_update_eval;
  o.ablations = (f.freeze_reputation ? SCADS_ABLATE_FREEZE_REPUTATION : 0u) |
                (f.naive_credit ? SCADS_ABLATE_NAIVE_CREDIT : 0u) |
                (f.no_guardrail ? SCADS_ABLATE_NO_GUARDRAIL : 0u) |
                (f.context_agnostic ? SCADS_ABLATE_CONTEXT_AGNOSTIC : 0u);
  o.has_seed = has_seed;
  o.seed = f.seed;
  return o;
}

int report(scads_status status) {
  if (status == SCADS_OK) return 0;
  std::fprintf(stderr, "scads: %s: %s\n", scads_status_name(status), scads_last_error());
  return scads_status_is_validation(status) ? kExitValidation : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shapley-credited context-aware fusion of multi-label expert reports"};
  app.set_version_flag("--version", std::string(scads_version()));
  app.require_subcommand(1);

  std::string sim_config, sim_out;
  std::uint64_t sim_seed = 0;
  auto* simulate = app.add_subcommand("simulate", "generate a synthetic expert dataset");
  simulate->add_option("--config", sim_config, "simulator config (key = value)");
  simulate->add_option("--out-dir", sim_out, "output directory")->required();
  auto* sim_seed_opt = simulate->add_option("--seed", sim_seed, "override the config seed");

  RunFlags replay_flags, ablate_flags, tune_flags;
  auto* replay = app.add_subcommand("replay", "replay a dataset and evaluate the test split");
  add_run_flags(replay, replay_flags);
  auto* ablate = app.add_subcommand("ablate", "compare the full system with four ablations");
  add_run_flags(ablate, ablate_flags);
  auto* tune = app.add_subcommand("tune-threshold", "tune the decision threshold on the training split");
  add_run_flags(tune, tune_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  if (*simulate) {
    return report(scads_simulate(sim_config.c_str(), sim_out.c_str(), sim_seed_opt->count() > 0,
                                 sim_seed));
  }
  if (*replay) {
    const auto o = to_options(replay_flags, replay->get_option("--seed")->count() > 0);
    char* metrics = nullptr;
    const int rc = report(scads_replay(&o, &metrics));
    if (metrics) {
      std::fputs(metrics, stdout);
      scads_string_free(metrics);
    }
    return rc;
  }
  if (*ablate) {
    const auto o = to_options(ablate_flags, ablate->get_option("--seed")->count() > 0);
    char* table = nullptr;
    const int rc = report(scads_ablate(&o, &table));
    if (table) {
      std::fputs(table, stdout);
      scads_string_free(table);
    }
    return rc;
  }
  if (*tune) {
    const auto o = to_options(tune_flags, tune->get_option("--seed")->count() > 0);
    double tau = 0.0;
    const int rc = report(scads_tune_threshold(&o, &tau));
    if (rc == 0) std::printf("%.2f\n", tau);
    return rc;
  }
  return kExitValidation;
}
