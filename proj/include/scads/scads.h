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

/*
 * C interface to the scads fusion engine.
 *
 * All functions return a scads_status. On failure a human-readable message is
 * available from scads_last_error() until the next call on the same thread.
 * Strings returned through char** out-parameters are owned by the caller and
 * must be released with scads_string_free().
 */

#ifndef SCADS_SCADS_H
#define SCADS_SCADS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SCADS_BUILDING_LIBRARY)
#    define SCADS_API __declspec(dllexport)
#  else
#    define SCADS_API __declspec(dllimport)
#  endif
#else
#  define SCADS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum scads_status {
  SCADS_OK = 0,
  SCADS_ERR_ZERO_VECTOR = 1,
  SCADS_ERR_DIMENSION_MISMATCH = 2,
  SCADS_ERR_UNLABELLED_RECORD = 3,
  SCADS_ERR_DUPLICATE_ROUND_ID = 4,
  SCADS_ERR_MISSING_EXPERT_REPORT = 5,
  SCADS_ERR_EMPTY_SPLIT = 6,
  SCADS_ERR_UNLABELLED_ROUND = 7,
  SCADS_ERR_TOO_MANY_EXPERTS = 8,
  SCADS_ERR_PROFILE_COUNT_MISMATCH = 9,
  SCADS_ERR_LENGTH_MISMATCH = 10,
  SCADS_ERR_INVALID_CONFIG = 11,
  SCADS_ERR_IO = 12,
  SCADS_ERR_PARSE = 13,
  SCADS_ERR_NON_MONOTONE_ROUNDS = 14,
  SCADS_ERR_EMPTY_DATASET = 15,
  SCADS_ERR_INVALID_ARGUMENT = 16,
  SCADS_ERR_INTERNAL = 17
} scads_status;

/* Ablation bits for scads_run_options.ablations. */
#define SCADS_ABLATE_FREEZE_REPUTATION 0x1u
#define SCADS_ABLATE_NAIVE_CREDIT 0x2u
#define SCADS_ABLATE_NO_GUARDRAIL 0x4u
#define SCADS_ABLATE_CONTEXT_AGNOSTIC 0x8u

typedef struct scads_engine scads_engine;

typedef struct scads_run_options {
  const char* dataset_path;
  const char* config_path; /* NULL or "" = defaults */
  const char* out_dir;     /* NULL or "" = write nothing */
  const char* split_file;  /* NULL or "" = contiguous split by train_frac */
  double train_frac;
  int no_update_eval;
  unsigned ablations;
  int has_seed;
  uint64_t seed;
} scads_run_options;

/* Defaults: train_frac 0.7, everything else off. */
SCADS_API void scads_run_options_init(scads_run_options* options);

SCADS_API const char* scads_version(void);
SCADS_API const char* scads_status_name(scads_status status);
SCADS_API const char* scads_last_error(void);
/* Non-zero for errors caused by bad input (configs, datasets, arguments). */
SCADS_API int scads_status_is_validation(scads_status status);
SCADS_API void scads_string_free(char* s);

/* Engine handle. config_text uses the flat key = value format; NULL or ""
 * selects defaults. */
SCADS_API scads_status scads_engine_create(const char* config_text, scads_engine** out);
SCADS_API void scads_engine_destroy(scads_engine* engine);

/* Runs one protocol round. round_json is one JSONL dataset line; the outcome
 * JSON holds posteriors, decisions, credit, payoffs and reputations. */
SCADS_API scads_status scads_engine_run_round(scads_engine* engine, const char* round_json,
                                              char** outcome_json);
SCADS_API scads_status scads_engine_set_threshold(scads_engine* engine, double threshold);
SCADS_API scads_status scads_engine_set_learning(scads_engine* engine, int learn);
SCADS_API size_t scads_engine_expert_count(const scads_engine* engine);
/* Copies min(capacity, n_experts) reputation weights into out. */
SCADS_API scads_status scads_engine_reputation(const scads_engine* engine, double* out,
                                               size_t capacity);

/* Batch commands. */
SCADS_API scads_status scads_simulate(const char* config_path, const char* out_dir,
                                      int has_seed, uint64_t seed);
SCADS_API scads_status scads_replay(const scads_run_options* options, char** metrics_json);
SCADS_API scads_status scads_ablate(const scads_run_options* options, char** table_text);
SCADS_API scads_status scads_tune_threshold(const scads_run_options* options,
                                            double* threshold);

#ifdef __cplusplus
}
#endif

#endif /* SCADS_SCADS_H */
