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

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qbus/bus_swap.hpp"
#include "qbus/nonlocal_gate.hpp"
#include "qbus/purify.hpp"
#include "qbus/report.hpp"
#include "qbus/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;

using ordered_json = nlohmann::ordered_json;

// Settings shared by the sweep-style subcommands. Each flag, when given,
// overrides the same key from --config.
struct Settings {
  std::string config;
  std::string out;
  std::map<std::string, std::optional<std::string>> flags;
  bool noisy_ops = false;

  void attach(CLI::App* sub) {
    sub->add_option("--config", config, "key = value settings file");
    sub->add_option("--out", out, "output CSV path (JSON written alongside)");
    const std::pair<const char*, const char*> keyed[] = {
        {"lengths", "bus lengths, comma separated"},
        {"p", "two-qubit gate success probabilities"},
        {"eta", "detector efficiencies"},
        {"gamma", "leakage rates"},
        {"model", "error model: dep|cpe|cpe-leak"},
        {"leakage", "leakage convention: half-rate|operator-exponent"},
        {"rounds", "purification rounds"},
        {"seed", "random seed"},
        {"tau1", "one-qubit gate time"},
        {"tau2", "two-qubit gate time"},
        {"taum", "measurement time"},
    };
    for (const auto& [key, help] : keyed) {
      sub->add_option("--" + std::string(key), flags[key], help);
    }
    sub->add_flag("--noisy-ops", noisy_ops, "noisy local operations during purification");
  }

  std::map<std::string, std::string> merged() const {
    std::map<std::string, std::string> kv;
    if (!config.empty()) kv = qbus::read_config_file(config);
    for (const auto& [key, value] : flags) {
      if (value) kv[key] = *value;
    }
    if (noisy_ops) kv["noisy_ops"] = "true";
    return kv;
  }
};

int cmd_verify() {
  int failures = 0;
  for (const qbus::CheckResult& r : qbus::run_all_checks()) {
    std::cout << qbus::format_check(r) << "\n";
    if (!r.passed) ++failures;
  }
  std::cout << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed")
            << std::endl;
  return failures == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_sweep(const Settings& s) {
  const qbus::SweepSpec spec = qbus::sweep_spec_from(s.merged());
  const auto rows = qbus::run_sweep(spec);
  if (s.out.empty()) {
    std::cout << qbus::to_csv(rows);
  } else {
    qbus::write_sweep(spec, rows, s.out);
    std::cout << "wrote " << rows.size() << " rows to " << s.out << "\n";
  }
  return kExitOk;
}

int cmd_compare(const Settings& s) {
  auto kv = s.merged();
  if (!kv.count("lengths")) kv["lengths"] = "2,3,4,5,6";
  if (!kv.count("p")) kv["p"] = "0.99";
  const qbus::SweepSpec spec = qbus::sweep_spec_from(kv);
  const qbus::CompareReport report = qbus::run_compare_baselines(spec);
  if (s.out.empty()) {
    std::cout << qbus::compare_csv(report);
  } else {
    qbus::write_compare(spec, report, s.out);
    std::cout << "wrote " << report.rows.size() << " rows to " << s.out << "\n";
  }
  std::cout << "crossover length: " << report.crossover_length << "\n";
  if (report.bound_violated) {
    std::cerr << "swap-chain fidelity reached p^(2l) on at least one row\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

// First value of a list setting.
template <class T>
T first(const std::vector<T>& v) {
  return v.front();
}

ordered_json outcome_json(const qbus::PurifyOutcome& o) {
  return {{"fidelity", o.state.fidelity()},
          {"state", {o.state.a, o.state.b, o.state.c, o.state.d}},
          {"rounds_used", o.rounds_used},
          {"success_prob_per_round", o.success_prob_per_round},
          {"pairs_consumed", o.pairs_consumed},
          {"expected_pairs", o.expected_pairs},
          {"expected_time", o.expected_time},
          {"status", o.status == qbus::PurifyStatus::kReached ? "reached" : "budget_exhausted"}};
}

void emit(const ordered_json& doc, const std::string& out) {
  const std::string text = doc.dump(2) + "\n";
  std::cout << text;
  if (!out.empty()) {
    std::FILE* f = std::fopen(out.c_str(), "wb");
    if (!f) throw qbus::ConfigError("out", "cannot open '" + out + "' for writing");
    const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
    if (std::fclose(f) != 0 || !ok) throw qbus::ConfigError("out", "failed writing '" + out + "'");
  }
}

qbus::BellDiagonal bus_pair(int l, const qbus::NoiseModel& nm, qbus::ErrorModel model) {
  if (l % 2 == 0) return qbus::fast_path_pair(l, nm, model);
  return qbus::bus_pair_closed_form(l, nm.p, nm.eta, qbus::ExponentConvention::kPrinted);
}

int cmd_purify(const Settings& s, std::optional<double> target, int segments) {
  auto kv = s.merged();
  if (!kv.count("lengths")) kv["lengths"] = "25";
  if (!kv.count("p")) kv["p"] = "0.995";
  if (!kv.count("eta")) kv["eta"] = "0.99";
  if (!kv.count("rounds")) kv["rounds"] = "6";
  const qbus::SweepSpec spec = qbus::sweep_spec_from(kv);
  const int l = first(spec.lengths);
  qbus::NoiseModel nm = qbus::NoiseModel::uniform(first(spec.p_values), first(spec.eta_values),
                                                  first(spec.gamma_values));
  nm.leakage = spec.leakage;
  qbus::PurifyConfig cfg = spec.purify.value_or(qbus::PurifyConfig{});
  cfg.noise = nm;
  if (spec.time_model) cfg.time_model = *spec.time_model;

  ordered_json doc;
  doc["l"] = l;
  doc["p"] = nm.p;
  doc["eta"] = nm.eta;
  doc["noisy_ops"] = cfg.noisy_ops;
  if (segments > 1) {
    doc["segments"] = segments;
    doc["result"] = outcome_json(qbus::nested_repeater(l, segments, cfg, spec.error_model));
  } else {
    const qbus::BellDiagonal input = bus_pair(l, nm, spec.error_model);
    doc["input_fidelity"] = input.fidelity();
    doc["result"] = outcome_json(target ? qbus::purify_to_target(input, cfg, *target)
                                        : qbus::purify_rounds(input, cfg));
  }
  emit(doc, s.out);
  return kExitOk;
}

int cmd_gate(const Settings& s, const std::string& gate_name) {
  auto kv = s.merged();
  if (!kv.count("lengths")) kv["lengths"] = "25";
  if (!kv.count("p")) kv["p"] = "0.995";
  if (!kv.count("eta")) kv["eta"] = "0.99";
  const qbus::SweepSpec spec = qbus::sweep_spec_from(kv);
  const int l = first(spec.lengths);
  qbus::NoiseModel nm = qbus::NoiseModel::uniform(first(spec.p_values), first(spec.eta_values),
                                                  first(spec.gamma_values));
  nm.leakage = spec.leakage;

  qbus::BellDiagonal resource = bus_pair(l, nm, spec.error_model).normalized();
  if (spec.purify) {
    qbus::PurifyConfig cfg = *spec.purify;
    cfg.noise = nm;
    resource = qbus::purify_rounds(resource, cfg).state;
  }
  qbus::GateJob job;
  job.resource = resource;
  job.noise = nm;
  if (gate_name == "cnot") {
    job.target_gate = qbus::TargetGate::kCnot;
  } else if (gate_name == "cphase") {
    job.target_gate = qbus::TargetGate::kCphase;
  } else {
    throw qbus::ConfigError("gate", "expected cnot|cphase, got '" + gate_name + "'");
  }
  job.input_state = qbus::standard_product_input(job.target_gate);
  const double simulated = qbus::gate_fidelity(job, qbus::teleported_gate(job));
  const qbus::GateClosedForm closed = qbus::gate_fidelity_closed_form(resource, nm.p, nm.eta);

  ordered_json doc;
  doc["l"] = l;
  doc["gate"] = gate_name;
  doc["resource"] = {resource.a, resource.b, resource.c, resource.d};
  doc["f_gate_simulated"] = simulated;
  doc["f_gate_closed_form"] = closed.value;
  doc["ordering_warning"] = closed.ordering_warning;
  emit(doc, s.out);
  if (closed.ordering_warning) {
    std::cerr << "warning: resource is not dominated by its first Bell component\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-bus simulator: entanglement swapping, purification and nonlocal gates"};
  app.require_subcommand(1);

  CLI::App* verify = app.add_subcommand("verify", "run the acceptance checks");
  Settings sweep_s, compare_s, purify_s, gate_s;
  CLI::App* sweep = app.add_subcommand("sweep", "fidelity table over a parameter grid");
  sweep_s.attach(sweep);
  CLI::App* compare = app.add_subcommand("compare", "resource swapping vs SWAP chain");
  compare_s.attach(compare);
  CLI::App* purify = app.add_subcommand("purify", "purify a bus pair");
  purify_s.attach(purify);
  std::optional<double> target;
  int segments = 1;
  purify->add_option("--target", target, "stop once this fidelity is reached");
  purify->add_option("--segments", segments, "nested schedule with this many segments")
      ->check(CLI::PositiveNumber);
  CLI::App* gate = app.add_subcommand("gate", "teleport a gate through a bus pair");
  gate_s.attach(gate);
  std::string gate_name = "cnot";
  gate->add_option("--gate", gate_name, "cnot|cphase");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (verify->parsed()) return cmd_verify();
    if (sweep->parsed()) return cmd_sweep(sweep_s);
    if (compare->parsed()) return cmd_compare(compare_s);
    if (purify->parsed()) return cmd_purify(purify_s, target, segments);
    if (gate->parsed()) return cmd_gate(gate_s, gate_name);
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}
