// Copyright 2026 The qbus Authors
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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbus/bus_swap.hpp"
#include "qbus/noise.hpp"
#include "qbus/purify.hpp"

namespace qbus {

/// Largest bus length for which sweeps fill f_exact.
inline constexpr int kSweepExactCap = 10;

/// Bad configuration value; `field` names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct SweepSpec {
  std::vector<int> lengths;
  std::vector<double> p_values;
  std::vector<double> eta_values;
  std::vector<double> gamma_values{0.0};
  ErrorModel error_model = ErrorModel::kDep;
  LeakageConvention leakage = LeakageConvention::kHalfRate;
  std::optional<PurifyConfig> purify;
  std::optional<TimeModel> time_model;
  std::uint64_t seed = 0;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

struct ReportRow {
  int l = 0;
  double p = 0.0;
  double eta = 0.0;
  double gamma = 0.0;
  ErrorModel error_model = ErrorModel::kDep;
  double f_closed_paper = 0.0;
  double f_closed_oracle_convention = 0.0;
  std::optional<double> f_exact;
  std::optional<double> f_after_purify;
  std::optional<int> rounds_used;
  std::optional<std::uint64_t> pairs_consumed;
  std::optional<double> t_entswap;
  std::optional<double> t_swap;
  std::optional<double> f_gate;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

/// Evaluates one parameter tuple.
ReportRow evaluate_row(int l, double p, double eta, double gamma, const SweepSpec& spec);

/// Rows for every (l, p, eta, gamma) tuple in spec order. Tuples run on a
/// small thread pool; the order of the result does not depend on scheduling.
std::vector<ReportRow> run_sweep(const SweepSpec& spec, unsigned threads = 0);

// CSV: header row, then one line per row; empty fields are written as null.
std::string csv_header();
std::string to_csv(const std::vector<ReportRow>& rows);
/// Inverse of to_csv. Throws std::runtime_error on malformed input.
std::vector<ReportRow> parse_csv(const std::string& text);

/// JSON document with the spec echo and the rows.
std::string to_json(const SweepSpec& spec, const std::vector<ReportRow>& rows);

/// Writes `<out>` (CSV) and the JSON next to it (extension replaced by .json).
void write_sweep(const SweepSpec& spec, const std::vector<ReportRow>& rows,
                 const std::string& out_path);

struct CompareRow {
  int l = 0;
  double p = 0.0;
  double f_resource = 0.0;
  double f_chain = 0.0;
  double bound = 0.0;
  bool chain_below_bound = false;
  double t_entswap = 0.0;
  double t_swap = 0.0;
};

struct CompareReport {
  std::vector<CompareRow> rows;
  int crossover_length = 0;
  bool bound_violated = false;
};

CompareReport run_compare_baselines(const SweepSpec& spec);
std::string compare_csv(const CompareReport& report);
std::string compare_json(const SweepSpec& spec, const CompareReport& report);
void write_compare(const SweepSpec& spec, const CompareReport& report,
                   const std::string& out_path);

// ---------------------------------------------------------------------------
// Configuration

/// Flat `key = value` text; `#` starts a comment, lists are comma separated.
/// Throws ConfigError on a line without '='.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Builds a sweep spec from merged key/value settings. Recognized keys:
/// lengths, p, eta, gamma, model, leakage, rounds, noisy_ops, seed, tau1,
/// tau2, taum. Unknown keys raise ConfigError.
SweepSpec sweep_spec_from(const std::map<std::string, std::string>& kv);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace qbus
