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

#include "qbus/purify.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qbus {

void PurifyConfig::validate() const {
  if (rounds < 0 || rounds > kMaxPurifyRounds) {
    throw std::invalid_argument("rounds must lie in [0," + std::to_string(kMaxPurifyRounds) + "]");
  }
  if (nesting_depth < 0 || nesting_depth > kMaxNestingDepth) {
    throw std::invalid_argument("nesting_depth must lie in [0," +
                                std::to_string(kMaxNestingDepth) + "]");
  }
  noise.validate();
  time_model.validate();
}

namespace {

DensityMatrix local_cnot(const DensityMatrix& st, int control, int target,
                         const PurifyConfig& config) {
  if (!config.noisy_ops) return apply_unitary(st, cnot(), {control, target});
  const ComplexMatrix h = hadamard();
  DensityMatrix out = apply_unitary(st, h, {target});
  out = noisy_cphase(out, {control, target}, config.noise, config.local_error);
  return apply_unitary(out, h, {target});
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b) {
    throw std::overflow_error("pair count overflows 64 bits");
  }
  return a * b;
}

void append_round(PurifyOutcome& out, double p_success, const TimeModel& tm) {
  out.success_prob_per_round.push_back(p_success);
  out.pairs_consumed = checked_mul(out.pairs_consumed, 2);
  out.expected_pairs *= 2.0 / p_success;
  out.expected_time += purify_round_time(tm) / p_success;
  ++out.rounds_used;
}

// Purifies `out.state` in place; `budget` rounds at most.
void purify_stage(PurifyOutcome& out, const PurifyConfig& config, double target, int budget) {
  int used = 0;
  while (out.state.fidelity() < target) {
    if (used == budget) {
      out.status = PurifyStatus::kBudgetExhausted;
      return;
    }
    const DeutschResult r = deutsch_round(out.state, config);
    out.state = r.kept;
    append_round(out, r.p_success, config.time_model);
    ++used;
  }
}

}  // namespace

DeutschResult deutsch_round(const BellDiagonal& pair, const PurifyConfig& config) {
  pair.validate();
  config.validate();
  // A trace below one (leakage) is renormalized: purification acts on the
  // surviving pairs.
  const DensityMatrix one = pair.normalized().to_state();
  DensityMatrix st = tensor(one, one);  // A1 B1 A2 B2
  const ComplexMatrix alice = rotation_x(std::numbers::pi / 2);
  const ComplexMatrix bob = rotation_x(-std::numbers::pi / 2);
  for (int q : {0, 2}) st = apply_unitary(st, alice, {q});
  for (int q : {1, 3}) st = apply_unitary(st, bob, {q});
  st = local_cnot(st, 0, 2, config);
  st = local_cnot(st, 1, 3, config);

  const double eta = config.noisy_ops ? config.noise.eta : 1.0;
  ComplexMatrix kept = ComplexMatrix::Zero(4, 4);
  for (int bit : {0, 1}) {
    DensityMatrix br = reported_branch(st, 3, bit, eta);
    br = reported_branch(br, 2, bit, eta);
    kept += partial_trace(br, {0, 1}).mat();
  }
  DeutschResult r;
  const DensityMatrix kept_state(std::move(kept));
  r.p_success = kept_state.trace_weight();
  if (!(r.p_success > 0.0)) throw std::domain_error("deutsch_round: no coinciding outcomes");
  r.kept = BellDiagonal::from_state(kept_state).scaled(1.0 / r.p_success);
  return r;
}

PurifyOutcome purify_rounds(const BellDiagonal& pair, const PurifyConfig& config) {
  config.validate();
  PurifyOutcome out;
  out.state = pair;
  for (int k = 0; k < config.rounds; ++k) {
    const DeutschResult r = deutsch_round(out.state, config);
    out.state = r.kept;
    append_round(out, r.p_success, config.time_model);
  }
  return out;
}

PurifyOutcome purify_to_target(const BellDiagonal& pair, const PurifyConfig& config,
                               double target) {
  config.validate();
  if (!(target < 1.0)) throw std::invalid_argument("target fidelity must be < 1");
  PurifyOutcome out;
  out.state = pair;
  purify_stage(out, config, target, config.rounds);
  return out;
}

double purify_round_time(const TimeModel& tm) { return tm.tau_1bit + tm.tau_2bit + tm.tau_meas; }

double joint_time(const TimeModel& tm) { return 2.0 * tm.tau_1bit + tm.tau_2bit + tm.tau_meas; }

PurifyOutcome nested_repeater(int length, int segments, const PurifyConfig& config,
                              ErrorModel bus_model) {
  config.validate();
  if (segments < 1 || !std::has_single_bit(static_cast<unsigned>(segments))) {
    throw std::invalid_argument("segments must be a power of two, got " +
                                std::to_string(segments));
  }
  if (length < 2 || length % segments != 0 || (length / segments) % 2 != 0) {
    throw std::invalid_argument("segments: " + std::to_string(length) +
                                " bus qubits do not split into " + std::to_string(segments) +
                                " runs of even length");
  }
  const int levels = std::countr_zero(static_cast<unsigned>(segments));
  if (config.nesting_depth != 0 && config.nesting_depth != levels) {
    throw std::invalid_argument("nesting_depth " + std::to_string(config.nesting_depth) +
                                " is inconsistent with " + std::to_string(segments) + " segments");
  }
  const int seg_len = length / segments;

  PurifyOutcome out;
  out.state = fast_path_pair(seg_len, config.noise, bus_model);
  out.expected_time = protocol_times(seg_len, config.time_model).t_entswap;
  const double target = out.state.fidelity();
  for (int level = 0; level < levels; ++level) {
    out.state = swap_recursion_step(out.state, out.state, config.noise, bus_model);
    out.pairs_consumed = checked_mul(out.pairs_consumed, 2);
    out.expected_pairs *= 2.0;
    out.expected_time += joint_time(config.time_model);
    purify_stage(out, config, target, config.rounds);
  }
  return out;
}

}  // namespace qbus
