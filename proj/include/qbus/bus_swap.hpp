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

#include <array>
#include <cstdint>
#include <vector>

#include "qbus/noise.hpp"
#include "qbus/qmat.hpp"

namespace qbus {

/// Populations on the Bell basis |Psi^{0,0}>, |Psi^{1,0}>, |Psi^{0,1}>,
/// |Psi^{1,1}>. The sum is below one only after leakage.
struct BellDiagonal {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  static BellDiagonal werner(double fidelity);
  /// Diagonal of `state` in the Bell basis (equivalently, the twirled state).
  static BellDiagonal from_state(const DensityMatrix& state);
  static BellDiagonal from_array(const std::array<double, 4>& w) { return {w[0], w[1], w[2], w[3]}; }

  std::array<double, 4> as_array() const { return {a, b, c, d}; }
  double operator[](int slot) const { return as_array()[slot]; }
  double total() const { return a + b + c + d; }
  double fidelity() const { return a; }
  BellDiagonal normalized() const;
  /// Werner form with the same fidelity (equal weight on the three others).
  BellDiagonal werner_twirled() const { return werner(a / total()).scaled(total()); }
  BellDiagonal scaled(double w) const { return {a * w, b * w, c * w, d * w}; }
  DensityMatrix to_state() const;

  /// Throws std::invalid_argument if any weight is below -tol or the total
  /// exceeds 1 + tol.
  void validate(double tol = 1e-12) const;
};

double max_abs_diff(const BellDiagonal& x, const BellDiagonal& y);

struct TimeModel {
  double tau_1bit = 1.0;
  double tau_2bit = 1.0;
  double tau_meas = 1.0;

  void validate() const;
};

struct BusSpec {
  int length = 2;  ///< number of bus qubits l; even, >= 2
  NoiseModel noise;
  ErrorModel error_model = ErrorModel::kDep;

  /// Number of joints n = l/2 - 1.
  int joints() const { return length / 2 - 1; }
  void validate() const;
};

/// Interior measurement outcomes. `outcomes[k]` belongs to bus qubit k+2
/// (bus qubits numbered from 1), so even-numbered qubits sit at even k.
struct MeasurementRecord {
  std::vector<int> outcomes;
  int parity_even = 0;
  int parity_odd = 0;

  static MeasurementRecord from_outcomes(std::vector<int> outcomes);
  bool consistent() const;
};

/// sigma_M = sigma_{parity_even, parity_odd}.
PauliIndex parity_completion(const MeasurementRecord& record);

enum class GateKind { kHadamard, kCphase, kMeasure, kCompletion };
enum class LayerKind { kOneQubit, kTwoQubit, kMeasure, kCompletion };

struct Gate {
  GateKind kind;
  std::vector<int> qubits;  ///< zero-based register positions
};

struct Layer {
  LayerKind kind;
  std::vector<Gate> gates;
};

/// Parallel entanglement-swapping schedule on l bus qubits.
///
/// Six time steps plus the completion slot:
///   1. H on every qubit
///   2. CPHASE on the pairs (1,2), (3,4), ...
///   3. H on qubits 2..l
///   4. CPHASE on the joints (2,3), (4,5), ...
///   5. H on qubits 2..l-1
///   6. measure qubits 2..l-1
///   7. completion Pauli on qubit 1
/// Steps 2-3 leave Bell pairs; steps 4-6 are Bell measurements on the joints.
struct SwapCircuit {
  int length = 0;
  std::vector<Layer> layers;

  int two_qubit_gate_count() const;
  std::vector<int> measured_qubits() const;
};

SwapCircuit build_swap_circuit(int length);

/// Protocol duration of a schedule: every slot costs its kind's duration,
/// whether or not it holds gates for the given length.
double circuit_duration(const SwapCircuit& circuit, const TimeModel& tm);

struct BusResult {
  /// End pair (qubits 1 and l), completion applied, summed over branches.
  /// Trace equals the surviving (non-leaked) weight.
  DensityMatrix end_state;

  double trace_weight() const { return end_state.trace_weight(); }
  /// Overlap with |Psi^{0,0}> of the unnormalized state (leaked weight
  /// counts as failure).
  double fidelity() const { return fidelity_with_bell(end_state, {0, 0}); }
  double fidelity_renormalized() const { return fidelity() / trace_weight(); }
  BellDiagonal bell() const { return BellDiagonal::from_state(end_state); }
};

/// Exact mixed-state run of the schedule with the chosen error model on each
/// CPHASE and inefficient detection on each measurement.
BusResult simulate_bus_exact(const BusSpec& spec, const SimOptions& options = {});

struct OutcomeBranch {
  MeasurementRecord record;
  double probability = 0.0;
  /// Corrected, unit-trace end state; empty for zero-probability strings.
  std::optional<DensityMatrix> end_state;
};

/// Per reported outcome string (2^{l-2} of them), without merging.
std::vector<OutcomeBranch> enumerate_bus_outcomes(const BusSpec& spec,
                                                  const SimOptions& options = {});

/// Monte Carlo over measurement records; returns the unit-trace average of
/// corrected end states.
DensityMatrix simulate_bus_sampled(const BusSpec& spec, int shots, std::uint64_t seed,
                                   const SimOptions& options = {});

/// Bell-diagonal end pair of the l=2 protocol, read off the exact simulation.
BellDiagonal elementary_pair(const NoiseModel& noise, ErrorModel model);

/// Joins two end pairs through one noisy joint (one CPHASE, two
/// measurements) and returns the Bell-diagonal result.
BellDiagonal swap_recursion_step(const BellDiagonal& left, const BellDiagonal& right,
                                 const NoiseModel& noise, ErrorModel model);

/// Same joint evaluated on a four-qubit register; the leakage model uses it.
BellDiagonal swap_joint_exact(const BellDiagonal& left, const BellDiagonal& right,
                              const NoiseModel& noise, ErrorModel model);

/// Length-l pair built from l/2 elementary pairs and l/2-1 recursion steps.
BellDiagonal fast_path_pair(int length, const NoiseModel& noise, ErrorModel model);

/// Exponent conventions for the closed forms.
enum class ExponentConvention {
  /// As printed: (2eta-1)^{(l-1)/2} and (2eta-1)^{l-1}.
  kPrinted,
  /// l counts bus qubits, n = l/2-1 joints: (2eta-1)^{(l-2)/2}, (2eta-1)^{l-2}.
  kQubitCount,
};

/// Bell-diagonal pair p^{l-1}(a_+, b, b, a_-) + (1-p^{l-1})/4.
BellDiagonal bus_pair_closed_form(double length, double p, double eta,
                                  ExponentConvention conv);

/// gamma == 0: depolarizing closed form. gamma > 0: small-leakage approximation.
double fidelity_closed_form(double length, double p, double eta, double gamma,
                            ExponentConvention conv = ExponentConvention::kPrinted);

struct SwapChainResult {
  double fidelity = 0.0;
  double bound = 0.0;  ///< p^{2l}
  bool below_bound = false;
};

/// Moves one half of |Psi^{0,0}> through l nearest-neighbour SWAPs, each
/// compiled to three CPHASE-based CNOTs carrying the depolarizing map.
SwapChainResult swap_chain_baseline(int length, double p, const SimOptions& options = {});

struct ProtocolTimes {
  double t_entswap = 0.0;
  double t_swap = 0.0;
};

ProtocolTimes protocol_times(int length, const TimeModel& tm);

/// Smallest l >= 2 for which swapping the state is slower than swapping the
/// resource.
int crossover_length(const TimeModel& tm);

}  // namespace qbus
