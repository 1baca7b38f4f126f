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

// File formats.
//
// Configs are flat "key = value" text, one key per line, '#' starts a
// comment. Lists are comma-separated. Unknown or repeated keys are errors.
//
// Datasets are JSONL, one round per line:
//   {"round_id": 7, "context": [0.1, ...],
//    "reports": {"model_1": ["brake", "stop"], ...},
//    "truth": ["brake"] | null}
// Labels and experts travel by name; config order maps them to indices.

#ifndef SCADS_IO_HPP
#define SCADS_IO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scads/game.hpp"
#include "scads/simulator.hpp"

namespace scads {

// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

struct KeyValue {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

std::vector<KeyValue> parse_key_values(std::string_view text);

GameConfig game_config_from_text(std::string_view text);
// Full snapshot of every key; parses back to an identical config.
std::string game_config_to_text(const GameConfig& config);

struct SimSetup {
  SimConfig sim;
  std::vector<SyntheticExpertProfile> profiles;
  std::vector<std::string> labels;
};

// Missing keys keep SimConfig defaults; missing profiles fall back to
// default_profiles().
SimSetup sim_setup_from_text(std::string_view text);
std::string sim_setup_to_text(const SimSetup& setup);

struct WireRound {
  std::int64_t round_id = 0;
  std::vector<double> context;
  std::vector<std::pair<std::string, std::vector<std::string>>> reports;
  std::optional<std::vector<std::string>> truth;

  friend bool operator==(const WireRound&, const WireRound&) = default;
};

// Throws ParseError mentioning `line_no`.
WireRound parse_wire_round(std::string_view line, std::size_t line_no = 0);
std::string serialize_wire_round(const WireRound& round);

// Name -> index mapping. Throws ParseError on unknown names,
// MissingExpertReport when a configured expert has no report, ZeroVector on
// a degenerate context.
RoundRecord to_record(const WireRound& wire, const std::vector<std::string>& labels,
                      const std::vector<std::string>& experts, std::size_t line_no = 0);
WireRound to_wire(const RoundRecord& record, const std::vector<std::string>& labels,
                  const std::vector<std::string>& experts);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

std::vector<RoundRecord> parse_dataset(std::string_view text, const GameConfig& config);
std::vector<RoundRecord> load_dataset(const std::string& path, const GameConfig& config);
std::string dataset_to_jsonl(const std::vector<RoundRecord>& rounds,
                             const std::vector<std::string>& labels,
                             const std::vector<std::string>& experts);

// One round_id per line; blank lines and '#' comments are ignored.
std::vector<std::int64_t> parse_split_file(std::string_view text);

std::string sha256_hex(std::string_view data);

}  // namespace scads

#endif  // SCADS_IO_HPP
