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

#include "scads/scads.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "json.hpp"
#include "scads/game.hpp"
#include "scads/io.hpp"
#include "scads/runner.hpp"

struct scads_engine {
  explicit scads_engine(scads::GameConfig config) : engine(std::move(config)) {}
  scads::Engine engine;
};

namespace {

thread_local std::string g_last_error;

scads_status fail(scads_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
scads_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return SCADS_OK;
  } catch (const scads::Error& e) {
    return fail(static_cast<scads_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SCADS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SCADS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SCADS_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string or_empty(const char* s) { return s ? std::string(s) : std::string(); }

scads::ReplayRequest to_request(const scads_run_options* o) {
  if (!o || !o->dataset_path || !*o->dataset_path) {
    throw scads::Error(scads::ErrorCode::kInvalidArgument, "a dataset path is required");
  }
  scads::ReplayRequest r;
  r.dataset_path = o->dataset_path;
  r.config_path = or_empty(o->config_path);
  r.out_dir = or_empty(o->out_dir);
  r.split_file = or_empty(o->split_file);
  r.train_frac = o->train_frac;
  r.no_update_eval = o->no_update_eval != 0;
  r.ablations.freeze_reputation = o->ablations & SCADS_ABLATE_FREEZE_REPUTATION;
  r.ablations.naive_credit = o->ablations & SCADS_ABLATE_NAIVE_CREDIT;
  r.ablations.no_guardrail = o->ablations & SCADS_ABLATE_NO_GUARDRAIL;
  r.ablations.context_agnostic = o->ablations & SCADS_ABLATE_CONTEXT_AGNOSTIC;
  if (o->has_seed) r.seed = o->seed;
  return r;
}

nlohmann::ordered_json by_expert(const scads::GameConfig& c, const std::vector<double>& v) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < c.n_experts(); ++i) j[c.experts[i]] = v[i];
  return j;
}

std::string outcome_json(const scads::RoundOutcome& o, const scads::GameConfig& c) {
  nlohmann::ordered_json j;
  j["round_id"] = o.round_id;
  j["labelled"] = o.labelled;
  j["threshold"] = o.threshold;
  nlohmann::ordered_json q = nlohmann::ordered_json::object();
  nlohmann::ordered_json decided = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < c.n_labels(); ++k) {
    q[c.labels[k]] = o.posteriors[k];
    if (o.decisions[k]) decided.push_back(c.labels[k]);
  }
  j["posteriors"] = std::move(q);
  j["decisions"] = std::move(decided);
  if (o.credit) {
    j["credit"] = {{"phi", by_expert(c, o.credit->phi)}, {"v_full", o.credit->v_full}};
  } else {
    j["credit"] = nullptr;
  }
  j["payoffs"] = by_expert(c, o.payoffs);
  const auto before = o.reputation_before.values();
  const auto after = o.reputation_after.values();
  j["reputation_before"] = by_expert(c, {before.begin(), before.end()});
  j["reputation_after"] = by_expert(c, {after.begin(), after.end()});
  return j.dump();
}

}  // namespace

extern "C" {

void scads_run_options_init(scads_run_options* options) {
  if (!options) return;
  *options = scads_run_options{};
  options->train_frac = 0.7;
}

const char* scads_version(void) { return scads::kVersion; }

const char* scads_status_name(scads_status status) {
  if (status == SCADS_OK) return "Ok";
  return scads::error_code_name(static_cast<scads::ErrorCode>(status));
}

const char* scads_last_error(void) { return g_last_error.c_str(); }

int scads_status_is_validation(scads_status status) {
  return status != SCADS_OK && status != SCADS_ERR_IO && status != SCADS_ERR_INTERNAL;
}

void scads_string_free(char* s) { std::free(s); }

scads_status scads_engine_create(const char* config_text, scads_engine** out) {
  if (!out) return fail(SCADS_ERR_INVALID_ARGUMENT, "out is NULL");
  *out = nullptr;
  return guarded([&] {
    scads::GameConfig config = (config_text && *config_text)
                                   ? scads::game_config_from_text(config_text)
                                   : scads::GameConfig{};
    *out = new scads_engine(std::move(config));
  });
}

void scads_engine_destroy(scads_engine* engine) { delete engine; }

scads_status scads_engine_run_round(scads_engine* engine, const char* round_json,
                                    char** outcome_json_out) {
  if (!engine || !round_json) return fail(SCADS_ERR_INVALID_ARGUMENT, "NULL argument");
  return guarded([&] {
    const auto& config = engine->engine.config();
    const auto wire = scads::parse_wire_round(round_json, 1);
    const auto record = scads::to_record(wire, config.labels, config.experts, 1);
    const auto outcome = engine->engine.run_round(record);
    if (outcome_json_out) *outcome_json_out = dup_string(outcome_json(outcome, config));
  });
}

scads_status scads_engine_set_threshold(scads_engine* engine, double threshold) {
  if (!engine) return fail(SCADS_ERR_INVALID_ARGUMENT, "NULL engine");
  return guarded([&] { engine->engine.set_threshold(threshold); });
}

scads_status scads_engine_set_learning(scads_engine* engine, int learn) {
  if (!engine) return fail(SCADS_ERR_INVALID_ARGUMENT, "NULL engine");
  engine->engine.set_learning(learn != 0);
  return SCADS_OK;
}

size_t scads_engine_expert_count(const scads_engine* engine) {
  return engine ? engine->engine.config().n_experts() : 0;
}

scads_status scads_engine_reputation(const scads_engine* engine, double* out, size_t capacity) {
  if (!engine || (!out && capacity > 0)) return fail(SCADS_ERR_INVALID_ARGUMENT, "NULL argument");
  const auto w = engine->engine.state().reputation.values();
  for (std::size_t i = 0; i < w.size() && i < capacity; ++i) out[i] = w[i];
  return SCADS_OK;
}

scads_status scads_simulate(const char* config_path, const char* out_dir, int has_seed,
                            uint64_t seed) {
  if (!out_dir || !*out_dir) return fail(SCADS_ERR_INVALID_ARGUMENT, "an output directory is required");
  return guarded([&] {
    scads::SimulateRequest r;
    r.config_path = or_empty(config_path);
    r.out_dir = out_dir;
    if (has_seed) r.seed = seed;
    scads::cmd_simulate(r);
  });
}

scads_status scads_replay(const scads_run_options* options, char** metrics_json_out) {
  return guarded([&] {
    const auto request = to_request(options);
    const auto result = scads::cmd_replay(request);
    if (metrics_json_out) {
      *metrics_json_out =
          dup_string(scads::metrics_json(result, scads::resolve_config(request)));
    }
  });
}

scads_status scads_ablate(const scads_run_options* options, char** table_text) {
  return guarded([&] {
    const auto rows = scads::cmd_ablate(to_request(options));
    if (table_text) *table_text = dup_string(scads::ablation_table(rows));
  });
}

scads_status scads_tune_threshold(const scads_run_options* options, double* threshold) {
  if (!threshold) return fail(SCADS_ERR_INVALID_ARGUMENT, "NULL argument");
  return guarded([&] { *threshold = scads::cmd_tune_threshold(to_request(options)); });
}

}  // extern "C"
