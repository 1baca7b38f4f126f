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

// Batch commands behind the CLI verbs. Each writes its outputs plus a
// manifest.json into the output directory.
//
// Output files:
//   simulate      dataset.jsonl, sim_config.snapshot, manifest.json
//   replay        metrics.json, trajectory.csv, config.snapshot, manifest.json
//   ablate        ablation.csv, ablation.json, config.snapshot, manifest.json
//   tune-threshold threshold.json, config.snapshot, manifest.json
//
// trajectory.csv columns, in order:
//   t, round_id, split, labelled, w_<expert>..., q_<label>..., phi_<expert>...,
//   u_<expert>...
// with spaces in label names replaced by '_'.

#ifndef SCADS_RUNNER_HPP
#define SCADS_RUNNER_HPP

#include <optional>
#include <string>
#include <vector>

#include "scads/game.hpp"

namespace scads {

inline constexpr const char* kVersion = "1.0.0";

struct SimulateRequest {
  std::string config_path;  // empty = defaults
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

struct AblationOverrides {
  bool freeze_reputation = false;
  bool naive_credit = false;
  bool no_guardrail = false;
  bool context_agnostic = false;
};

struct ReplayRequest {
  std::string dataset_path;
  std::string config_path;  // empty = defaults
  std::string out_dir;      // empty = write nothing
  std::string split_file;   // empty = use train_frac
  double train_frac = 0.7;
  bool no_update_eval = false;
  AblationOverrides ablations;
  std::optional<std::uint64_t> seed;  // recorded in the manifest only
};

struct AblationRow {
  std::string variant;
  bool metrics_available = false;
  double mean_hamming = 0.0;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
};

void cmd_simulate(const SimulateRequest& request);
ReplayResult cmd_replay(const ReplayRequest& request);
std::vector<AblationRow> cmd_ablate(const ReplayRequest& request);
double cmd_tune_threshold(const ReplayRequest& request);

// Serializers used by the commands; exposed for tests.
std::string metrics_json(const ReplayResult& result, const GameConfig& config);
std::string trajectory_csv(const ReplayResult& result, const GameConfig& config);
std::string ablation_csv(const std::vector<AblationRow>& rows);
std::string ablation_table(const std::vector<AblationRow>& rows);

// Effective config of a request: file (or defaults) plus CLI overrides.
GameConfig resolve_config(const ReplayRequest& request);

}  // namespace scads

#endif  // SCADS_RUNNER_HPP
