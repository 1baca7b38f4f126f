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

#include "scads/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "scads/io.hpp"
#include "scads/simulator.hpp"

namespace scads {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create '" + dir + "': " + ec.message());
}

std::string in_dir(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string column_name(std::string s) {
  for (char& c : s) {
    if (c == ' ') c = '_';
  }
  return s;
}

ordered_json summary_json(const MetricsSummary& s, const GameConfig& config) {
  ordered_json j;
  j["mean_hamming"] = s.mean_hamming;
  j["micro_f1"] = s.micro_f1;
  j["macro_f1"] = s.macro_f1;
  j["mean_jaccard"] = s.mean_jaccard;
  j["micro_degenerate"] = s.micro_degenerate;
  j["n_rounds"] = s.n_rounds;
  ordered_json per_label = ordered_json::array();
  for (std::size_t k = 0; k < s.per_label.size(); ++k) {
    const auto& c = s.per_label[k];
    per_label.push_back({{"label", config.labels[k]}, {"tp", c.tp}, {"fp", c.fp},
                         {"fn", c.fn}, {"tn", c.tn}});
  }
  j["per_label"] = std::move(per_label);
  return j;
}

ordered_json manifest(const std::string& command, const std::string& config_text,
                      const ReplayRequest* replay, const std::string& dataset_text, std::optional<std::uint64_t> seed,
                      const std::vector<std::string>& outputs) {
  ordered_json j;
  j["artifact_version"] = kVersion;
  j["command"] = command;
  if (replay) {
    j["inputs"] = {{"dataset", replay->dataset_path},
                   {"config", replay->config_path},
                   {"split_file", replay->split_file}};
    j["dataset_sha256"] = sha256_hex(dataset_text);
    j["options"] = {{"train_frac", replay->train_frac},
                    {"no_update_eval", replay->no_update_eval}};
  } else {
    j["dataset_sha256"] = sha256_hex(dataset_text);
  }
  j["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
  j["config_snapshot"] = config_text;
  j["outputs"] = outputs;
  return j;
}

ReplayOptions replay_options(const ReplayRequest& r) {
  ReplayOptions o;
  o.train_frac = r.train_frac;
  o.no_update_eval = r.no_update_eval;
  if (!r.split_file.empty()) o.train_ids = parse_split_file(read_file(r.split_file));
  return o;
}

}  // namespace

GameConfig resolve_config(const ReplayRequest& request) {
  GameConfig config =
      request.config_path.empty() ? GameConfig{} : game_config_from_text(read_file(request.config_path));
  const auto& a = request.ablations;
  config.freeze_reputation = config.freeze_reputation || a.freeze_reputation;
  config.naive_credit = config.naive_credit || a.naive_credit;
  config.no_guardrail = config.no_guardrail || a.no_guardrail;
  config.context_agnostic = config.context_agnostic || a.context_agnostic;
  if (!(request.train_frac >= 0.0 && request.train_frac <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "--train-frac must lie in [0, 1]");
  }
  config.validate();
  return config;
}

void cmd_simulate(const SimulateRequest& request) {
  SimSetup setup =
      request.config_path.empty() ? SimSetup{} : sim_setup_from_text(read_file(request.config_path));
  if (request.config_path.empty()) {
    setup.labels = default_labels();
    setup.profiles = default_profiles(setup.sim);
  }
  if (request.seed) setup.sim.seed = *request.seed;

  std::vector<std::string> experts;
  for (const auto& p : setup.profiles) experts.push_back(p.id);
  const auto data = generate_dataset(setup.sim, setup.profiles);
  const std::string jsonl = dataset_to_jsonl(data.rounds, setup.labels, experts);
  const std::string snapshot = sim_setup_to_text(setup);

  ensure_dir(request.out_dir);
  write_file(in_dir(request.out_dir, "dataset.jsonl"), jsonl);
  write_file(in_dir(request.out_dir, "sim_config.snapshot"), snapshot);
  auto m = manifest("simulate", snapshot, nullptr, jsonl, setup.sim.seed,
                    {"dataset.jsonl", "sim_config.snapshot", "manifest.json"});
  m["inputs"] = {{"config", request.config_path}};
  write_file(in_dir(request.out_dir, "manifest.json"), m.dump(2) + "\n");
}

std::string metrics_json(const ReplayResult& result, const GameConfig& config) {
  ordered_json j;
  j["metrics_available"] = result.metrics_available;
  j["n_train"] = result.n_train;
  j["n_test"] = result.n_test;
  j["threshold"] = result.threshold;
  j["threshold_tuned"] = result.threshold_tuned;
  if (result.metrics_available) {
    j["fused"] = summary_json(result.fused, config);
    ordered_json baselines = ordered_json::object();
    for (const auto& [name, s] : result.baselines) baselines[name] = summary_json(s, config);
    j["baselines"] = std::move(baselines);
  } else {
    j["fused"] = nullptr;
    j["baselines"] = ordered_json::object();
  }
  ordered_json rep = ordered_json::object();
  ordered_json util = ordered_json::object();
  for (std::size_t i = 0; i < config.n_experts(); ++i) {
    rep[config.experts[i]] = result.final_reputation[i];
    util[config.experts[i]] = result.discounted_utility[i];
  }
  j["final_reputation"] = std::move(rep);
  j["discounted_utility"] = std::move(util);
  return j.dump(2) + "\n";
}

std::string trajectory_csv(const ReplayResult& result, const GameConfig& config) {
  std::ostringstream os;
  os << "t,round_id,split,labelled";
  for (const auto& e : config.experts) os << ",w_" << column_name(e);
  for (const auto& l : config.labels) os << ",q_" << column_name(l);
  for (const auto& e : config.experts) os << ",phi_" << column_name(e);
  for (const auto& e : config.experts) os << ",u_" << column_name(e);
  os << "\n";
  for (const auto& row : result.trajectory) {
    os << row.t << ',' << row.round_id << ',' << (row.train ? "train" : "test") << ','
       << (row.labelled ? 1 : 0);
    for (double v : row.w) os << ',' << format_double(v);
    for (double v : row.q) os << ',' << format_double(v);
    for (double v : row.phi) os << ',' << format_double(v);
    for (double v : row.u) os << ',' << format_double(v);
    os << "\n";
  }
  return os.str();
}

ReplayResult cmd_replay(const ReplayRequest& request) {
  const GameConfig config = resolve_config(request);
  const std::string dataset_text = read_file(request.dataset_path);
  const auto rounds = parse_dataset(dataset_text, config);
  const auto result = replay(rounds, config, replay_options(request));

  if (!request.out_dir.empty()) {
    ensure_dir(request.out_dir);
    const std::string snapshot = game_config_to_text(config);
    write_file(in_dir(request.out_dir, "metrics.json"), metrics_json(result, config));
    write_file(in_dir(request.out_dir, "trajectory.csv"), trajectory_csv(result, config));
    write_file(in_dir(request.out_dir, "config.snapshot"), snapshot);
    const auto m = manifest("replay", snapshot, &request, dataset_text, request.seed,
                            {"metrics.json", "trajectory.csv", "config.snapshot", "manifest.json"});
    write_file(in_dir(request.out_dir, "manifest.json"), m.dump(2) + "\n");
  }
  return result;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  os << "variant,mean_hamming,micro_f1,macro_f1\n";
  for (const auto& r : rows) {
    os << r.variant << ',';
    if (r.metrics_available) {
      os << format_double(r.mean_hamming) << ',' << format_double(r.micro_f1) << ','
         << format_double(r.macro_f1);
    } else {
      os << ",,";
    }
    os << "\n";
  }
  return os.str();
}

std::string ablation_table(const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof(line), "%-18s %10s %10s %10s\n", "variant", "hamming", "micro_f1",
                "macro_f1");
  os << line;
  for (const auto& r : rows) {
    if (r.metrics_available) {
      std::snprintf(line, sizeof(line), "%-18s %10.4f %10.4f %10.4f\n", r.variant.c_str(),
                    r.mean_hamming, r.micro_f1, r.macro_f1);
    } else {
      std::snprintf(line, sizeof(line), "%-18s %10s %10s %10s\n", r.variant.c_str(), "n/a",
                    "n/a", "n/a");
    }
    os << line;
  }
  return os.str();
}

std::vector<AblationRow> cmd_ablate(const ReplayRequest& request) {
  ReplayRequest base = request;
  base.ablations = {};
  GameConfig config = resolve_config(base);
  config.freeze_reputation = config.naive_credit = config.no_guardrail =
      config.context_agnostic = false;

  const std::string dataset_text = read_file(request.dataset_path);
  const auto rounds = parse_dataset(dataset_text, config);
  const auto options = replay_options(request);

  std::vector<std::pair<std::string, GameConfig>> variants;
  variants.emplace_back("full", config);
  variants.emplace_back("freeze_reputation", config);
  variants.back().second.freeze_reputation = true;
  variants.emplace_back("naive_credit", config);
  variants.back().second.naive_credit = true;
  variants.emplace_back("no_guardrail", config);
  variants.back().second.no_guardrail = true;
  variants.emplace_back("context_agnostic", config);
  variants.back().second.context_agnostic = true;

  std::vector<AblationRow> rows;
  ordered_json details = ordered_json::object();
  for (const auto& [name, cfg] : variants) {
    const auto result = replay(rounds, cfg, options);
    AblationRow row;
    row.variant = name;
    row.metrics_available = result.metrics_available;
    if (result.metrics_available) {
      row.mean_hamming = result.fused.mean_hamming;
      row.micro_f1 = result.fused.micro_f1;
      row.macro_f1 = result.fused.macro_f1;
    }
    rows.push_back(row);
    details[name] = ordered_json::parse(metrics_json(result, cfg));
  }

  if (!request.out_dir.empty()) {
    ensure_dir(request.out_dir);
    const std::string snapshot = game_config_to_text(config);
    write_file(in_dir(request.out_dir, "ablation.csv"), ablation_csv(rows));
    write_file(in_dir(request.out_dir, "ablation.json"), details.dump(2) + "\n");
    write_file(in_dir(request.out_dir, "config.snapshot"), snapshot);
    const auto m = manifest("ablate", snapshot, &request, dataset_text, request.seed,
                            {"ablation.csv", "ablation.json", "config.snapshot", "manifest.json"});
    write_file(in_dir(request.out_dir, "manifest.json"), m.dump(2) + "\n");
  }
  return rows;
}

double cmd_tune_threshold(const ReplayRequest& request) {
  const GameConfig config = resolve_config(request);
  const std::string dataset_text = read_file(request.dataset_path);
  const auto rounds = parse_dataset(dataset_text, config);
  const double tau = tune_threshold_on(rounds, config, replay_options(request));
  if (!request.out_dir.empty()) {
    ensure_dir(request.out_dir);
    const std::string snapshot = game_config_to_text(config);
    ordered_json j;
    j["threshold"] = tau;
    write_file(in_dir(request.out_dir, "threshold.json"), j.dump(2) + "\n");
    write_file(in_dir(request.out_dir, "config.snapshot"), snapshot);
    const auto m = manifest("tune-threshold", snapshot, &request, dataset_text,
                            request.seed, {"threshold.json", "config.snapshot", "manifest.json"});
    write_file(in_dir(request.out_dir, "manifest.json"), m.dump(2) + "\n");
  }
  return tau;
}

}  // namespace scads
