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

#include "qbus/report.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "qbus/nonlocal_gate.hpp"

namespace qbus {

namespace {

using json = nlohmann::ordered_json;

constexpr double kBoundTol = 1e-12;

void check_fidelity(const char* name, double v, int l, double p, double eta, double gamma) {
  if (!(v >= -kBoundTol && v <= 1.0 + kBoundTol)) {
    std::ostringstream os;
    os << name << " = " << format_double(v) << " outside [0,1] at l=" << l
       << " p=" << format_double(p) << " eta=" << format_double(eta)
       << " gamma=" << format_double(gamma);
    throw std::runtime_error(os.str());
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& field, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(field, "not a number: '" + text + "'");
  return v;
}

template <class Int>
Int parse_int(const std::string& field, const std::string& text) {
  Int v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(field, "not an integer: '" + text + "'");
  return v;
}

bool parse_bool(const std::string& field, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw ConfigError(field, "not a boolean: '" + text + "'");
}

std::vector<double> parse_double_list(const std::string& field, const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split(text, ',')) out.push_back(parse_double(field, item));
  return out;
}

LeakageConvention parse_leakage(const std::string& text) {
  if (text == "half-rate") return LeakageConvention::kHalfRate;
  if (text == "operator-exponent") return LeakageConvention::kOperatorExponent;
  throw ConfigError("leakage", "expected half-rate|operator-exponent, got '" + text + "'");
}

std::string to_string(LeakageConvention c) {
  return c == LeakageConvention::kHalfRate ? "half-rate" : "operator-exponent";
}

NoiseModel row_noise(double p, double eta, double gamma, const SweepSpec& spec) {
  NoiseModel nm = NoiseModel::uniform(p, eta, gamma);
  nm.leakage = spec.leakage;
  return nm;
}

// Bell-diagonal pair used for purification and gate columns. Odd lengths
// have no circuit; they take the closed-form pair as printed.
BellDiagonal row_pair(int l, const NoiseModel& nm, ErrorModel model) {
  if (l % 2 == 0) return fast_path_pair(l, nm, model);
  return bus_pair_closed_form(l, nm.p, nm.eta, ExponentConvention::kPrinted);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ConfigError("out", "cannot open '" + path + "' for writing");
  os << text;
  os.close();
  if (!os) throw ConfigError("out", "failed writing '" + path + "'");
}

std::string json_path_for(const std::string& out_path) {
  std::filesystem::path p(out_path);
  if (p.extension() == ".json") return out_path + ".json";
  return p.replace_extension(".json").string();
}

template <class T>
void put_optional(std::string& line, const std::optional<T>& v) {
  line += ',';
  if (!v) {
    line += "null";
  } else if constexpr (std::is_floating_point_v<T>) {
    line += format_double(*v);
  } else {
    line += std::to_string(*v);
  }
}

template <class T>
json json_optional(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json spec_json(const SweepSpec& spec) {
  json j;
  j["lengths"] = spec.lengths;
  j["p_values"] = spec.p_values;
  j["eta_values"] = spec.eta_values;
  j["gamma_values"] = spec.gamma_values;
  j["error_model"] = to_string(spec.error_model);
  j["leakage"] = to_string(spec.leakage);
  if (spec.purify) {
    j["purify"] = {{"rounds", spec.purify->rounds},
                   {"noisy_ops", spec.purify->noisy_ops},
                   {"local_error", to_string(spec.purify->local_error)}};
  } else {
    j["purify"] = nullptr;
  }
  if (spec.time_model) {
    j["time_model"] = {{"tau1", spec.time_model->tau_1bit},
                       {"tau2", spec.time_model->tau_2bit},
                       {"taum", spec.time_model->tau_meas}};
  } else {
    j["time_model"] = nullptr;
  }
  j["seed"] = spec.seed;
  return j;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

void SweepSpec::validate() const {
  if (lengths.empty()) throw ConfigError("lengths", "empty list");
  if (p_values.empty()) throw ConfigError("p", "empty list");
  if (eta_values.empty()) throw ConfigError("eta", "empty list");
  if (gamma_values.empty()) throw ConfigError("gamma", "empty list");
  for (int l : lengths) {
    if (l < 2) throw ConfigError("lengths", "bus length must be >= 2, got " + std::to_string(l));
  }
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p", "must lie in [0,1], got " + format_double(p));
  }
  for (double e : eta_values) {
    if (!(e >= 0.5 && e <= 1.0)) {
      throw ConfigError("eta", "must lie in [1/2,1], got " + format_double(e));
    }
  }
  for (double g : gamma_values) {
    if (!(g >= 0.0) || !std::isfinite(g)) {
      throw ConfigError("gamma", "must be >= 0, got " + format_double(g));
    }
  }
  if (purify && (purify->rounds < 0 || purify->rounds > kMaxPurifyRounds)) {
    throw ConfigError("rounds", "must lie in [0," + std::to_string(kMaxPurifyRounds) + "]");
  }
  if (time_model) {
    if (!(time_model->tau_1bit > 0.0)) throw ConfigError("tau1", "must be > 0");
    if (!(time_model->tau_2bit > 0.0)) throw ConfigError("tau2", "must be > 0");
    if (!(time_model->tau_meas > 0.0)) throw ConfigError("taum", "must be > 0");
  }
}

ReportRow evaluate_row(int l, double p, double eta, double gamma, const SweepSpec& spec) {
  const NoiseModel nm = row_noise(p, eta, gamma, spec);
  ReportRow row;
  row.l = l;
  row.p = p;
  row.eta = eta;
  row.gamma = gamma;
  row.error_model = spec.error_model;
  row.f_closed_paper = fidelity_closed_form(l, p, eta, gamma, ExponentConvention::kPrinted);
  row.f_closed_oracle_convention =
      fidelity_closed_form(l, p, eta, gamma, ExponentConvention::kQubitCount);
  if (l % 2 == 0 && l <= kSweepExactCap) {
    row.f_exact = simulate_bus_exact(BusSpec{l, nm, spec.error_model}).fidelity();
  }

  BellDiagonal pair = row_pair(l, nm, spec.error_model);
  if (spec.purify) {
    PurifyConfig cfg = *spec.purify;
    cfg.noise = nm;
    if (spec.time_model) cfg.time_model = *spec.time_model;
    const PurifyOutcome out = purify_rounds(pair, cfg);
    pair = out.state;
    row.f_after_purify = out.state.fidelity();
    row.rounds_used = out.rounds_used;
    row.pairs_consumed = out.pairs_consumed;
  }
  if (spec.time_model) {
    const ProtocolTimes t = protocol_times(l, *spec.time_model);
    row.t_entswap = t.t_entswap;
    row.t_swap = t.t_swap;
  }
  row.f_gate = gate_fidelity_closed_form(pair.normalized(), p, eta).value;

  check_fidelity("f_closed_paper", row.f_closed_paper, l, p, eta, gamma);
  check_fidelity("f_closed_oracle_convention", row.f_closed_oracle_convention, l, p, eta, gamma);
  if (row.f_exact) check_fidelity("f_exact", *row.f_exact, l, p, eta, gamma);
  if (row.f_after_purify) check_fidelity("f_after_purify", *row.f_after_purify, l, p, eta, gamma);
  check_fidelity("f_gate", *row.f_gate, l, p, eta, gamma);
  return row;
}

std::vector<ReportRow> run_sweep(const SweepSpec& spec, unsigned threads) {
  spec.validate();
  struct Tuple {
    int l;
    double p, eta, gamma;
  };
  std::vector<Tuple> tuples;
  for (int l : spec.lengths) {
    for (double p : spec.p_values) {
      for (double eta : spec.eta_values) {
        for (double gamma : spec.gamma_values) tuples.push_back({l, p, eta, gamma});
      }
    }
  }

  std::vector<ReportRow> rows(tuples.size());
  std::vector<std::exception_ptr> errors(tuples.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tuples.size(); i = next++) {
      try {
        const Tuple& t = tuples[i];
        rows[i] = evaluate_row(t.l, t.p, t.eta, t.gamma, spec);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, tuples.size()));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

std::string csv_header() {
  return "l,p,eta,gamma,error_model,f_closed_paper,f_closed_oracle_convention,f_exact,"
         "f_after_purify,rounds_used,pairs_consumed,t_entswap,t_swap,f_gate";
}

std::string to_csv(const std::vector<ReportRow>& rows) {
  std::string out = csv_header() + "\n";
  for (const ReportRow& r : rows) {
    std::string line = std::to_string(r.l);
    line += ',' + format_double(r.p);
    line += ',' + format_double(r.eta);
    line += ',' + format_double(r.gamma);
    line += ',' + to_string(r.error_model);
    line += ',' + format_double(r.f_closed_paper);
    line += ',' + format_double(r.f_closed_oracle_convention);
    put_optional(line, r.f_exact);
    put_optional(line, r.f_after_purify);
    put_optional(line, r.rounds_used);
    put_optional(line, r.pairs_consumed);
    put_optional(line, r.t_entswap);
    put_optional(line, r.t_swap);
    put_optional(line, r.f_gate);
    out += line + "\n";
  }
  return out;
}

std::vector<ReportRow> parse_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != csv_header()) {
    throw std::runtime_error("parse_csv: missing or unexpected header");
  }
  std::vector<ReportRow> rows;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 14) {
      throw std::runtime_error("parse_csv: line " + std::to_string(line_no) + " has " +
                               std::to_string(f.size()) + " fields");
    }
    auto opt_d = [&](const std::string& s, const char* name) -> std::optional<double> {
      if (s == "null") return std::nullopt;
      return parse_double(name, s);
    };
    ReportRow r;
    r.l = parse_int<int>("l", f[0]);
    r.p = parse_double("p", f[1]);
    r.eta = parse_double("eta", f[2]);
    r.gamma = parse_double("gamma", f[3]);
    r.error_model = parse_error_model(f[4]);
    r.f_closed_paper = parse_double("f_closed_paper", f[5]);
    r.f_closed_oracle_convention = parse_double("f_closed_oracle_convention", f[6]);
    r.f_exact = opt_d(f[7], "f_exact");
    r.f_after_purify = opt_d(f[8], "f_after_purify");
    if (f[9] != "null") r.rounds_used = parse_int<int>("rounds_used", f[9]);
    if (f[10] != "null") r.pairs_consumed = parse_int<std::uint64_t>("pairs_consumed", f[10]);
    r.t_entswap = opt_d(f[11], "t_entswap");
    r.t_swap = opt_d(f[12], "t_swap");
    r.f_gate = opt_d(f[13], "f_gate");
    rows.push_back(r);
  }
  return rows;
}

std::string to_json(const SweepSpec& spec, const std::vector<ReportRow>& rows) {
  json doc;
  doc["spec"] = spec_json(spec);
  json arr = json::array();
  for (const ReportRow& r : rows) {
    json j;
    j["l"] = r.l;
    j["p"] = r.p;
    j["eta"] = r.eta;
    j["gamma"] = r.gamma;
    j["error_model"] = to_string(r.error_model);
    j["f_closed_paper"] = r.f_closed_paper;
    j["f_closed_oracle_convention"] = r.f_closed_oracle_convention;
    j["f_exact"] = json_optional(r.f_exact);
    j["f_after_purify"] = json_optional(r.f_after_purify);
    j["rounds_used"] = json_optional(r.rounds_used);
    j["pairs_consumed"] = json_optional(r.pairs_consumed);
    j["t_entswap"] = json_optional(r.t_entswap);
    j["t_swap"] = json_optional(r.t_swap);
    j["f_gate"] = json_optional(r.f_gate);
    arr.push_back(std::move(j));
  }
  doc["rows"] = std::move(arr);
  return doc.dump(2) + "\n";
}

void write_sweep(const SweepSpec& spec, const std::vector<ReportRow>& rows,
                 const std::string& out_path) {
  write_text(out_path, to_csv(rows));
  write_text(json_path_for(out_path), to_json(spec, rows));
}

CompareReport run_compare_baselines(const SweepSpec& spec) {
  spec.validate();
  const TimeModel tm = spec.time_model.value_or(TimeModel{});
  const double eta = spec.eta_values.front();
  CompareReport report;
  for (int l : spec.lengths) {
    if (l + 2 > kDefaultMaxQubits) {
      throw ConfigError("lengths", "swap-chain baseline needs l <= " +
                                       std::to_string(kDefaultMaxQubits - 2) + ", got " +
                                       std::to_string(l));
    }
  }
  for (int l : spec.lengths) {
    for (double p : spec.p_values) {
      const NoiseModel nm = row_noise(p, eta, 0.0, spec);
      CompareRow row;
      row.l = l;
      row.p = p;
      if (l % 2 == 0) {
        row.f_resource = simulate_bus_exact(BusSpec{l, nm, ErrorModel::kDep}).fidelity();
      } else {
        row.f_resource = fidelity_closed_form(l, p, eta, 0.0, ExponentConvention::kQubitCount);
      }
      const SwapChainResult chain = swap_chain_baseline(l, p);
      row.f_chain = chain.fidelity;
      row.bound = chain.bound;
      row.chain_below_bound = chain.below_bound;
      const ProtocolTimes t = protocol_times(l, tm);
      row.t_entswap = t.t_entswap;
      row.t_swap = t.t_swap;
      report.bound_violated = report.bound_violated || !chain.below_bound;
      report.rows.push_back(row);
    }
  }
  report.crossover_length = crossover_length(tm);
  return report;
}

std::string compare_csv(const CompareReport& report) {
  std::string out = "l,p,f_resource,f_chain,bound,chain_below_bound,t_entswap,t_swap\n";
  for (const CompareRow& r : report.rows) {
    out += std::to_string(r.l) + ',' + format_double(r.p) + ',' + format_double(r.f_resource) +
           ',' + format_double(r.f_chain) + ',' + format_double(r.bound) + ',' +
           (r.chain_below_bound ? "true" : "false") + ',' + format_double(r.t_entswap) + ',' +
           format_double(r.t_swap) + "\n";
  }
  return out;
}

std::string compare_json(const SweepSpec& spec, const CompareReport& report) {
  json doc;
  doc["spec"] = spec_json(spec);
  doc["crossover_length"] = report.crossover_length;
  doc["bound_violated"] = report.bound_violated;
  json arr = json::array();
  for (const CompareRow& r : report.rows) {
    arr.push_back({{"l", r.l},
                   {"p", r.p},
                   {"f_resource", r.f_resource},
                   {"f_chain", r.f_chain},
                   {"bound", r.bound},
                   {"chain_below_bound", r.chain_below_bound},
                   {"t_entswap", r.t_entswap},
                   {"t_swap", r.t_swap}});
  }
  doc["rows"] = std::move(arr);
  return doc.dump(2) + "\n";
}

void write_compare(const SweepSpec& spec, const CompareReport& report,
                   const std::string& out_path) {
  write_text(out_path, compare_csv(report));
  write_text(json_path_for(out_path), compare_json(spec, report));
}

// ---------------------------------------------------------------------------
// Configuration

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config", "line " + std::to_string(line_no) + " has no '='");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config", "line " + std::to_string(line_no) + " has no key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config", "cannot read '" + path + "'");
  std::ostringstream os;
  os << is.rdbuf();
  return parse_config_text(os.str());
}

SweepSpec sweep_spec_from(const std::map<std::string, std::string>& kv) {
  static const char* const kKnown[] = {"lengths", "p",         "eta",  "gamma", "model",
                                       "leakage", "rounds",    "noisy_ops", "seed",
                                       "tau1",    "tau2",      "taum"};
  for (const auto& [key, value] : kv) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
      throw ConfigError(key, "unknown setting");
    }
  }
  auto get = [&](const char* key, const char* fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? std::string(fallback) : it->second;
  };

  SweepSpec spec;
  for (const std::string& item : split(get("lengths", "2,4,6,8"), ',')) {
    spec.lengths.push_back(parse_int<int>("lengths", item));
  }
  spec.p_values = parse_double_list("p", get("p", "1"));
  spec.eta_values = parse_double_list("eta", get("eta", "1"));
  spec.gamma_values = parse_double_list("gamma", get("gamma", "0"));
  try {
    spec.error_model = parse_error_model(get("model", "dep"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("model", "expected dep|cpe|cpe-leak, got '" + get("model", "") + "'");
  }
  spec.leakage = parse_leakage(get("leakage", "half-rate"));
  if (kv.count("rounds") || kv.count("noisy_ops")) {
    PurifyConfig cfg;
    cfg.rounds = parse_int<int>("rounds", get("rounds", "0"));
    cfg.noisy_ops = parse_bool("noisy_ops", get("noisy_ops", "false"));
    spec.purify = cfg;
  }
  if (kv.count("tau1") || kv.count("tau2") || kv.count("taum")) {
    TimeModel tm;
    tm.tau_1bit = parse_double("tau1", get("tau1", "1"));
    tm.tau_2bit = parse_double("tau2", get("tau2", "1"));
    tm.tau_meas = parse_double("taum", get("taum", "1"));
    spec.time_model = tm;
  }
  spec.seed = parse_int<std::uint64_t>("seed", get("seed", "0"));
  spec.validate();
  return spec;
}

}  // namespace qbus
