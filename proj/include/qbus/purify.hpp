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
#include <vector>

#include "qbus/bus_swap.hpp"
#include "qbus/noise.hpp"

namespace qbus {

inline constexpr int kMaxPurifyRounds = 32;
inline constexpr int kMaxNestingDepth = 32;

struct PurifyConfig {
  int rounds = 0;  ///< round budget (per stage in nested_repeater)
  bool noisy_ops = false;
  NoiseModel noise;
  /// 0 derives the depth from the segment count; otherwise it must match it.
  int nesting_depth = 0;
  /// Channel on the two bilateral controlled gates when noisy_ops is set.
  ErrorModel local_error = ErrorModel::kDep;
  TimeModel time_model;

  void validate() const;
};

enum class PurifyStatus { kReached, kBudgetExhausted };

struct PurifyOutcome {
  BellDiagonal state;
  std::vector<double> success_prob_per_round;
  /// Elementary pairs consumed when every round succeeds.
  std::uint64_t pairs_consumed = 1;
  /// Elementary pairs consumed on average (each round divides by its p_success).
  double expected_pairs = 1.0;
  double expected_time = 0.0;
  int rounds_used = 0;
  PurifyStatus status = PurifyStatus::kReached;
};

struct DeutschResult {
  BellDiagonal kept;  ///< unit trace
  double p_success = 0.0;
};

/// One Deutsch round on two copies of `pair`, simulated on the register
/// (A1, B1, A2, B2): Rx(pi/2) on Alice's qubits, Rx(-pi/2) on Bob's, CNOT
/// A1->A2 and B1->B2, measure A2 and B2, keep on coinciding reports.
DeutschResult deutsch_round(const BellDiagonal& pair, const PurifyConfig& config);

/// Runs exactly `config.rounds` rounds.
PurifyOutcome purify_rounds(const BellDiagonal& pair, const PurifyConfig& config);

/// Runs rounds until the fidelity reaches `target` or the budget is spent.
/// A target at or below the input fidelity uses no rounds. Throws
/// std::invalid_argument for target >= 1.
PurifyOutcome purify_to_target(const BellDiagonal& pair, const PurifyConfig& config,
                               double target);

/// Duration of one purification round and of one swap joint.
double purify_round_time(const TimeModel& tm);
double joint_time(const TimeModel& tm);

/// Nested swap-and-purify schedule. The l bus qubits are split into
/// `segments` (a power of two) equal runs of even length; each level joins
/// neighbouring pairs through one joint and then purifies the result back
/// towards the fresh segment fidelity, using at most config.rounds rounds.
PurifyOutcome nested_repeater(int length, int segments, const PurifyConfig& config,
                              ErrorModel bus_model = ErrorModel::kDep);

}  // namespace qbus
