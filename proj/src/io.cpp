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

#include "scads/io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace scads {
namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidConfig, what);
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.emplace_back(trim(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double to_double(const KeyValue& kv, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    invalid("line " + std::to_string(kv.line) + ": '" + kv.key + "' expects a number, got '" +
            std::string(text) + "'");
  }
  return v;
}

double to_double(const KeyValue& kv) { return to_double(kv, kv.value); }

std::uint64_t to_unsigned(const KeyValue& kv) {
  const auto text = trim(kv.value);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    invalid("line " + std::to_string(kv.line) + ": '" + kv.key +
            "' expects a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

bool to_bool(const KeyValue& kv) {
  const auto text = trim(kv.value);
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  invalid("line " + std::to_string(kv.line) + ": '" + kv.key + "' expects true or false");
}

std::vector<double> to_doubles(const KeyValue& kv) {
  std::vector<double> out;
  for (const auto& item : split_list(kv.value)) out.push_back(to_double(kv, item));
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

std::string join(const std::vector<double>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += format_double(items[i]);
  }
  return out;
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

// 1 value: everywhere; n_regimes values: per regime; n_regimes * n_labels
// values: regime-major table.
std::vector<std::vector<double>> expand_table(const KeyValue& kv, const SimConfig& sim) {
  const auto v = to_doubles(kv);
  std::vector<std::vector<double>> out(sim.n_regimes, std::vector<double>(sim.n_labels));
  for (std::size_t g = 0; g < sim.n_regimes; ++g) {
    for (std::size_t k = 0; k < sim.n_labels; ++k) {
      if (v.size() == 1) out[g][k] = v[0];
      else if (v.size() == sim.n_regimes) out[g][k] = v[g];
      else if (v.size() == sim.n_regimes * sim.n_labels) out[g][k] = v[g * sim.n_labels + k];
      else invalid("line " + std::to_string(kv.line) + ": '" + kv.key + "' has " +
                   std::to_string(v.size()) + " values; expected 1, n_regimes or " +
                   "n_regimes * n_labels");
    }
  }
  return out;
}

std::vector<double> flatten(const std::vector<std::vector<double>>& table) {
  std::vector<double> out;
  for (const auto& row : table) out.insert(out.end(), row.begin(), row.end());
  return out;
}

[[noreturn]] void parse_error(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": " + what);
}

std::vector<std::string> string_list(const ordered_json& j, std::size_t line_no,
                                     const std::string& field) {
  if (!j.is_array()) parse_error(line_no, field + " must be an array of label names");
  std::vector<std::string> out;
  for (const auto& item : j) {
    if (!item.is_string()) parse_error(line_no, field + " must contain strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

BinaryVector to_indicator(const std::vector<std::string>& names,
                          const std::unordered_map<std::string, std::size_t>& index,
                          std::size_t n_labels, std::size_t line_no) {
  BinaryVector out(n_labels, 0);
  for (const auto& name : names) {
    const auto it = index.find(name);
    if (it == index.end()) parse_error(line_no, "unknown label '" + name + "'");
    out[it->second] = 1;
  }
  return out;
}

std::vector<std::string> to_names(const BinaryVector& v, const std::vector<std::string>& labels) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k]) out.push_back(labels[k]);
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error(ErrorCode::kInternal, "number formatting failed");
  return std::string(buf, ptr);
}

std::vector<KeyValue> parse_key_values(std::string_view text) {
  std::vector<KeyValue> out;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      invalid("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    KeyValue kv{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))),
                line_no};
    if (kv.key.empty()) invalid("line " + std::to_string(line_no) + ": empty key");
    if (!seen.insert(kv.key).second) {
      invalid("line " + std::to_string(line_no) + ": duplicate key '" + kv.key + "'");
    }
    out.push_back(std::move(kv));
  }
  return out;
}

GameConfig game_config_from_text(std::string_view text) {
  using Setter = std::function<void(GameConfig&, const KeyValue&)>;
  static const std::map<std::string, Setter> setters = {
      {"labels", [](GameConfig& c, const KeyValue& kv) { c.labels = split_list(kv.value); }},
      {"experts", [](GameConfig& c, const KeyValue& kv) { c.experts = split_list(kv.value); }},
      {"k_reliability", [](GameConfig& c, const KeyValue& kv) { c.k_reliability = to_unsigned(kv); }},
      {"k_prior", [](GameConfig& c, const KeyValue& kv) { c.k_prior = to_unsigned(kv); }},
      {"kernel_exponent", [](GameConfig& c, const KeyValue& kv) { c.kernel_exponent = to_double(kv); }},
      {"rho_max", [](GameConfig& c, const KeyValue& kv) { c.rho_max = to_double(kv); }},
      {"window", [](GameConfig& c, const KeyValue& kv) { c.window = to_unsigned(kv); }},
      {"eta", [](GameConfig& c, const KeyValue& kv) { c.eta = to_double(kv); }},
      {"alpha", [](GameConfig& c, const KeyValue& kv) { c.alpha = to_double(kv); }},
      {"prize", [](GameConfig& c, const KeyValue& kv) { c.prize = to_double(kv); }},
      {"delta", [](GameConfig& c, const KeyValue& kv) { c.delta = to_double(kv); }},
      {"epsilon", [](GameConfig& c, const KeyValue& kv) { c.epsilon = to_double(kv); }},
      {"decision_threshold",
       [](GameConfig& c, const KeyValue& kv) {
         if (kv.value == "tune") c.decision_threshold.reset();
         else c.decision_threshold = to_double(kv);
       }},
      {"reputation_floor", [](GameConfig& c, const KeyValue& kv) { c.reputation_floor = to_double(kv); }},
      {"bank_max", [](GameConfig& c, const KeyValue& kv) { c.bank_max = to_unsigned(kv); }},
      {"macro_skip_empty", [](GameConfig& c, const KeyValue& kv) { c.macro_skip_empty = to_bool(kv); }},
      {"freeze_reputation", [](GameConfig& c, const KeyValue& kv) { c.freeze_reputation = to_bool(kv); }},
      {"naive_credit", [](GameConfig& c, const KeyValue& kv) { c.naive_credit = to_bool(kv); }},
      {"no_guardrail", [](GameConfig& c, const KeyValue& kv) { c.no_guardrail = to_bool(kv); }},
      {"context_agnostic", [](GameConfig& c, const KeyValue& kv) { c.context_agnostic = to_bool(kv); }},
  };
  GameConfig config;
  for (const auto& kv : parse_key_values(text)) {
    const auto it = setters.find(kv.key);
    if (it == setters.end()) {
      invalid("line " + std::to_string(kv.line) + ": unknown key '" + kv.key + "'");
    }
    it->second(config, kv);
  }
  config.validate();
  return config;
}

std::string game_config_to_text(const GameConfig& c) {
  std::ostringstream os;
  os << "labels = " << join(c.labels) << "\n"
     << "experts = " << join(c.experts) << "\n"
     << "k_reliability = " << c.k_reliability << "\n"
     << "k_prior = " << c.k_prior << "\n"
     << "kernel_exponent = " << format_double(c.kernel_exponent) << "\n"
     << "rho_max = " << format_double(c.rho_max) << "\n"
     << "window = " << c.window << "\n"
     << "eta = " << format_double(c.eta) << "\n"
     << "alpha = " << format_double(c.alpha) << "\n"
     << "prize = " << format_double(c.prize) << "\n"
     << "delta = " << format_double(c.delta) << "\n"
     << "epsilon = " << format_double(c.epsilon) << "\n"
     << "decision_threshold = "
     << (c.decision_threshold ? format_double(*c.decision_threshold) : "tune") << "\n"
     << "reputation_floor = " << format_double(c.reputation_floor) << "\n"
     << "bank_max = " << c.bank_max << "\n"
     << "macro_skip_empty = " << bool_text(c.macro_skip_empty) << "\n"
     << "freeze_reputation = " << bool_text(c.freeze_reputation) << "\n"
     << "naive_credit = " << bool_text(c.naive_credit) << "\n"
     << "no_guardrail = " << bool_text(c.no_guardrail) << "\n"
     << "context_agnostic = " << bool_text(c.context_agnostic) << "\n";
  return os.str();
}

SimSetup sim_setup_from_text(std::string_view text) {
  const auto kvs = parse_key_values(text);
  SimSetup setup;
  SimConfig& sim = setup.sim;
  std::optional<std::vector<std::string>> labels, experts;
  const KeyValue* base_rates = nullptr;
  std::vector<const KeyValue*> expert_keys;

  for (const auto& kv : kvs) {
    if (kv.key == "n_experts") sim.n_experts = to_unsigned(kv);
    else if (kv.key == "n_labels") sim.n_labels = to_unsigned(kv);
    else if (kv.key == "n_rounds") sim.n_rounds = to_unsigned(kv);
    else if (kv.key == "n_regimes") sim.n_regimes = to_unsigned(kv);
    else if (kv.key == "dimension") sim.dimension = to_unsigned(kv);
    else if (kv.key == "centroid_max_cosine") sim.centroid_max_cosine = to_double(kv);
    else if (kv.key == "noise_scale") sim.noise_scale = to_double(kv);
    else if (kv.key == "labelled_fraction") sim.labelled_fraction = to_double(kv);
    else if (kv.key == "seed") sim.seed = to_unsigned(kv);
    else if (kv.key == "labels") labels = split_list(kv.value);
    else if (kv.key == "experts") experts = split_list(kv.value);
    else if (kv.key == "base_rates") base_rates = &kv;
    else if (kv.key.rfind("expert.", 0) == 0) expert_keys.push_back(&kv);
    else invalid("line " + std::to_string(kv.line) + ": unknown key '" + kv.key + "'");
  }
  sim.validate();
  if (base_rates) sim.base_rates = expand_table(*base_rates, sim);
  sim.validate();

  if (labels) {
    if (labels->size() != sim.n_labels) invalid("labels: expected n_labels names");
    setup.labels = *labels;
  } else if (sim.n_labels == default_labels().size()) {
    setup.labels = default_labels();
  } else {
    for (std::size_t k = 0; k < sim.n_labels; ++k) {
      setup.labels.push_back("label_" + std::to_string(k + 1));
    }
  }

  setup.profiles = default_profiles(sim);
  if (experts) {
    if (experts->size() != sim.n_experts) invalid("experts: expected n_experts ids");
    for (std::size_t i = 0; i < sim.n_experts; ++i) setup.profiles[i].id = (*experts)[i];
  }
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < setup.profiles.size(); ++i) {
    if (!index.emplace(setup.profiles[i].id, i).second) invalid("experts: duplicate id");
  }
  for (const KeyValue* kv : expert_keys) {
    const auto dot = kv->key.rfind('.');
    const std::string id = kv->key.substr(7, dot - 7);
    const std::string field = kv->key.substr(dot + 1);
    const auto it = index.find(id);
    if (dot <= 7 || it == index.end()) {
      invalid("line " + std::to_string(kv->line) + ": unknown expert in '" + kv->key + "'");
    }
    auto& p = setup.profiles[it->second];
    if (field == "tpr") p.tpr = expand_table(*kv, sim);
    else if (field == "fpr") p.fpr = expand_table(*kv, sim);
    else if (field == "correlation_strength") p.correlation_strength = to_double(*kv);
    else if (field == "correlation_partner") {
      const auto partner = index.find(kv->value);
      if (partner == index.end()) invalid("line " + std::to_string(kv->line) + ": unknown partner");
      p.correlation_partner = partner->second;
    } else {
      invalid("line " + std::to_string(kv->line) + ": unknown key '" + kv->key + "'");
    }
  }
  return setup;
}

std::string sim_setup_to_text(const SimSetup& setup) {
  const SimConfig& s = setup.sim;
  std::ostringstream os;
  os << "n_experts = " << s.n_experts << "\n"
     << "n_labels = " << s.n_labels << "\n"
     << "n_rounds = " << s.n_rounds << "\n"
     << "n_regimes = " << s.n_regimes << "\n"
     << "dimension = " << s.dimension << "\n"
     << "centroid_max_cosine = " << format_double(s.centroid_max_cosine) << "\n"
     << "noise_scale = " << format_double(s.noise_scale) << "\n"
     << "labelled_fraction = " << format_double(s.labelled_fraction) << "\n"
     << "seed = " << s.seed << "\n"
     << "labels = " << join(setup.labels) << "\n";
  std::vector<std::string> ids;
  for (const auto& p : setup.profiles) ids.push_back(p.id);
  os << "experts = " << join(ids) << "\n";
  if (!s.base_rates.empty()) os << "base_rates = " << join(flatten(s.base_rates)) << "\n";
  for (const auto& p : setup.profiles) {
    os << "expert." << p.id << ".tpr = " << join(flatten(p.tpr)) << "\n"
       << "expert." << p.id << ".fpr = " << join(flatten(p.fpr)) << "\n";
    if (p.correlation_partner) {
      os << "expert." << p.id << ".correlation_partner = "
         << setup.profiles[*p.correlation_partner].id << "\n"
         << "expert." << p.id << ".correlation_strength = "
         << format_double(p.correlation_strength) << "\n";
    }
  }
  return os.str();
}

WireRound parse_wire_round(std::string_view line, std::size_t line_no) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    parse_error(line_no, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) parse_error(line_no, "expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "round_id" && key != "context" && key != "reports" && key != "truth") {
      parse_error(line_no, "unexpected field '" + key + "'");
    }
  }

  WireRound w;
  if (!j.contains("round_id") || !j["round_id"].is_number_integer()) {
    parse_error(line_no, "round_id must be an integer");
  }
  w.round_id = j["round_id"].get<std::int64_t>();

  if (!j.contains("context") || !j["context"].is_array()) {
    parse_error(line_no, "context must be an array of numbers");
  }
  for (const auto& v : j["context"]) {
    if (!v.is_number()) parse_error(line_no, "context must be an array of numbers");
    w.context.push_back(v.get<double>());
  }

  if (!j.contains("reports") || !j["reports"].is_object()) {
    parse_error(line_no, "reports must be an object keyed by expert id");
  }
  for (const auto& [expert, labels] : j["reports"].items()) {
    w.reports.emplace_back(expert, string_list(labels, line_no, "reports." + expert));
  }

  if (j.contains("truth") && !j["truth"].is_null()) {
    w.truth = string_list(j["truth"], line_no, "truth");
  }
  return w;
}

std::string serialize_wire_round(const WireRound& w) {
  ordered_json j;
  j["round_id"] = w.round_id;
  j["context"] = w.context;
  ordered_json reports = ordered_json::object();
  for (const auto& [expert, labels] : w.reports) reports[expert] = labels;
  j["reports"] = std::move(reports);
  j["truth"] = w.truth ? ordered_json(*w.truth) : ordered_json(nullptr);
  return j.dump();
}

RoundRecord to_record(const WireRound& wire, const std::vector<std::string>& labels,
                      const std::vector<std::string>& experts, std::size_t line_no) {
  std::unordered_map<std::string, std::size_t> label_index, expert_index;
  for (std::size_t k = 0; k < labels.size(); ++k) label_index.emplace(labels[k], k);
  for (std::size_t i = 0; i < experts.size(); ++i) expert_index.emplace(experts[i], i);

  RoundRecord rec;
  rec.round_id = wire.round_id;
  try {
    rec.context = ContextVector::normalize(wire.context);
  } catch (const Error& e) {
    throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
  }

  rec.reports.assign(experts.size(), BinaryVector());
  std::vector<bool> seen(experts.size(), false);
  for (const auto& [expert, names] : wire.reports) {
    const auto it = expert_index.find(expert);
    if (it == expert_index.end()) parse_error(line_no, "unknown expert '" + expert + "'");
    rec.reports[it->second] = to_indicator(names, label_index, labels.size(), line_no);
    seen[it->second] = true;
  }
  for (std::size_t i = 0; i < experts.size(); ++i) {
    if (!seen[i]) {
      throw Error(ErrorCode::kMissingExpertReport,
                  "line " + std::to_string(line_no) + ": no report from '" + experts[i] + "'");
    }
  }
  if (wire.truth) rec.truth = to_indicator(*wire.truth, label_index, labels.size(), line_no);
  return rec;
}

WireRound to_wire(const RoundRecord& record, const std::vector<std::string>& labels,
                  const std::vector<std::string>& experts) {
  WireRound w;
  w.round_id = record.round_id;
  w.context.assign(record.context.values().begin(), record.context.values().end());
  for (std::size_t i = 0; i < experts.size(); ++i) {
    w.reports.emplace_back(experts[i], to_names(record.reports[i], labels));
  }
  if (record.truth) w.truth = to_names(*record.truth, labels);
  return w;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write to '" + path + "' failed");
}

std::vector<RoundRecord> parse_dataset(std::string_view text, const GameConfig& config) {
  std::vector<RoundRecord> rounds;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (trim(line).empty()) continue;
    const auto wire = parse_wire_round(line, line_no);
    rounds.push_back(to_record(wire, config.labels, config.experts, line_no));
    if (rounds.size() > 1 && rounds.back().round_id <= rounds[rounds.size() - 2].round_id) {
      throw Error(ErrorCode::kNonMonotoneRounds,
                  "line " + std::to_string(line_no) + ": round_id " +
                      std::to_string(rounds.back().round_id) + " is not increasing");
    }
    if (rounds.back().context.dimension() != rounds.front().context.dimension()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "line " + std::to_string(line_no) + ": context dimension differs");
    }
  }
  return rounds;
}

std::vector<RoundRecord> load_dataset(const std::string& path, const GameConfig& config) {
  return parse_dataset(read_file(path), config);
}

std::string dataset_to_jsonl(const std::vector<RoundRecord>& rounds,
                             const std::vector<std::string>& labels,
                             const std::vector<std::string>& experts) {
  std::string out;
  for (const auto& r : rounds) {
    out += serialize_wire_round(to_wire(r, labels, experts));
    out += '\n';
  }
  return out;
}

std::vector<std::int64_t> parse_split_file(std::string_view text) {
  std::vector<std::int64_t> ids;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::int64_t id = 0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), id);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      parse_error(line_no, "split file expects one round_id per line");
    }
    ids.push_back(id);
  }
  return ids;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kInternal, "sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

}  // namespace scads
