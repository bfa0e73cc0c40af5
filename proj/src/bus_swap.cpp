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

#include "qbus/bus_swap.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

namespace qbus {

// ---------------------------------------------------------------------------
// BellDiagonal

BellDiagonal BellDiagonal::werner(double fidelity) {
  const double rest = (1.0 - fidelity) / 3.0;
  return {fidelity, rest, rest, rest};
}

BellDiagonal BellDiagonal::from_state(const DensityMatrix& state) {
  std::array<double, 4> w{};
  for (PauliIndex idx : kAllPaulis) w[idx.bell_slot()] = fidelity_with_bell(state, idx);
  return from_array(w);
}

BellDiagonal BellDiagonal::normalized() const {
  const double t = total();
  if (!(t > 0.0)) throw std::domain_error("BellDiagonal::normalized: zero weight");
  return scaled(1.0 / t);
}

DensityMatrix BellDiagonal::to_state() const {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  const auto w = as_array();
  for (PauliIndex idx : kAllPaulis) {
    const Eigen::VectorXcd v = bell_vector(idx);
    m += w[idx.bell_slot()] * (v * v.adjoint());
  }
  return DensityMatrix(std::move(m));
}

void BellDiagonal::validate(double tol) const {
  for (double w : as_array()) {
    if (!(w >= -tol)) throw std::invalid_argument("BellDiagonal: negative weight");
  }
  if (!(total() <= 1.0 + tol)) throw std::invalid_argument("BellDiagonal: weights exceed one");
}

double max_abs_diff(const BellDiagonal& x, const BellDiagonal& y) {
  double m = 0.0;
  for (int k = 0; k < 4; ++k) m = std::max(m, std::abs(x[k] - y[k]));
  return m;
}

void TimeModel::validate() const {
  if (!(tau_1bit > 0.0)) throw std::invalid_argument("tau1 must be > 0");
  if (!(tau_2bit > 0.0)) throw std::invalid_argument("tau2 must be > 0");
  if (!(tau_meas > 0.0)) throw std::invalid_argument("taum must be > 0");
}

void BusSpec::validate() const {
  if (length < 2 || length % 2 != 0) {
    throw std::invalid_argument("lengths: bus length must be even and >= 2, got " +
                                std::to_string(length));
  }
  noise.validate();
}

// ---------------------------------------------------------------------------
// Measurement record and completion

MeasurementRecord MeasurementRecord::from_outcomes(std::vector<int> outcomes) {
  MeasurementRecord rec;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    if (outcomes[k] != 0 && outcomes[k] != 1) throw std::invalid_argument("outcome must be a bit");
    (k % 2 == 0 ? rec.parity_even : rec.parity_odd) ^= outcomes[k];
  }
  rec.outcomes = std::move(outcomes);
  return rec;
}

bool MeasurementRecord::consistent() const {
  const MeasurementRecord r = from_outcomes(outcomes);
  return r.parity_even == parity_even && r.parity_odd == parity_odd;
}

PauliIndex parity_completion(const MeasurementRecord& record) {
  return {record.parity_even, record.parity_odd};
}

// ---------------------------------------------------------------------------
// Circuit

int SwapCircuit::two_qubit_gate_count() const {
  int n = 0;
  for (const Layer& layer : layers) {
    if (layer.kind == LayerKind::kTwoQubit) n += static_cast<int>(layer.gates.size());
  }
  return n;
}

std::vector<int> SwapCircuit::measured_qubits() const {
  std::vector<int> out;
  for (const Layer& layer : layers) {
    if (layer.kind != LayerKind::kMeasure) continue;
    for (const Gate& g : layer.gates) out.push_back(g.qubits.front());
  }
  return out;
}

SwapCircuit build_swap_circuit(int length) {
  if (length < 2 || length % 2 != 0) {
    throw std::invalid_argument("build_swap_circuit: length must be even and >= 2");
  }
  const int l = length;
  auto hadamards = [](int from, int to) {
    Layer layer{LayerKind::kOneQubit, {}};
    for (int q = from; q <= to; ++q) layer.gates.push_back({GateKind::kHadamard, {q}});
    return layer;
  };
  SwapCircuit c;
  c.length = l;
  c.layers.push_back(hadamards(0, l - 1));

  Layer pairs{LayerKind::kTwoQubit, {}};
  for (int q = 0; q + 1 < l; q += 2) pairs.gates.push_back({GateKind::kCphase, {q, q + 1}});
  c.layers.push_back(std::move(pairs));

  c.layers.push_back(hadamards(1, l - 1));

  Layer joints{LayerKind::kTwoQubit, {}};
  for (int q = 1; q + 1 < l - 1; q += 2) joints.gates.push_back({GateKind::kCphase, {q, q + 1}});
  c.layers.push_back(std::move(joints));

  c.layers.push_back(hadamards(1, l - 2));

  Layer meas{LayerKind::kMeasure, {}};
  for (int q = 1; q <= l - 2; ++q) meas.gates.push_back({GateKind::kMeasure, {q}});
  c.layers.push_back(std::move(meas));

  c.layers.push_back({LayerKind::kCompletion, {{GateKind::kCompletion, {0}}}});
  return c;
}

double circuit_duration(const SwapCircuit& circuit, const TimeModel& tm) {
  double t = 0.0;
  for (const Layer& layer : circuit.layers) {
    switch (layer.kind) {
      case LayerKind::kOneQubit:
      case LayerKind::kCompletion:
        t += tm.tau_1bit;
        break;
      case LayerKind::kTwoQubit:
        t += tm.tau_2bit;
        break;
      case LayerKind::kMeasure:
        t += tm.tau_meas;
        break;
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Exact simulation

namespace {

void check_cap(int qubits, const SimOptions& options) {
  if (qubits > options.max_qubits) {
    throw std::invalid_argument("register of " + std::to_string(qubits) +
                                " qubits exceeds the exact-simulation cap of " +
                                std::to_string(options.max_qubits));
  }
}

// Runs every layer before the measurement.
DensityMatrix run_unitary_layers(const SwapCircuit& circuit, const BusSpec& spec) {
  const ComplexMatrix h = hadamard();
  DensityMatrix state(circuit.length);
  for (const Layer& layer : circuit.layers) {
    if (layer.kind == LayerKind::kMeasure || layer.kind == LayerKind::kCompletion) break;
    for (const Gate& g : layer.gates) {
      if (g.kind == GateKind::kHadamard) {
        state = apply_unitary(state, h, {g.qubits[0]});
      } else {
        state = noisy_cphase(state, {g.qubits[0], g.qubits[1]}, spec.noise, spec.error_model);
      }
    }
  }
  return state;
}

// Register position q holds bus qubit q+1; an even bus qubit feeds the
// phase-flip parity.
PauliIndex flip_for(int register_pos, int bit) {
  if (!bit) return {0, 0};
  return ((register_pos + 1) % 2 == 0) ? PauliIndex{1, 0} : PauliIndex{0, 1};
}

DensityMatrix correct_end(const DensityMatrix& ends, PauliIndex sigma) {
  return apply_operator(ends, pauli(sigma), std::vector<int>{0});
}

}  // namespace

BusResult simulate_bus_exact(const BusSpec& spec, const SimOptions& options) {
  spec.validate();
  check_cap(spec.length, options);
  const SwapCircuit circuit = build_swap_circuit(spec.length);
  const DensityMatrix pre = run_unitary_layers(circuit, spec);

  // Branches only matter through the completion they select, so reported
  // branches with equal running parities are summed as we go. Measuring from
  // the highest position down keeps lower positions stable under trace-out.
  std::map<int, DensityMatrix> slots;
  slots.emplace(0, pre);
  std::vector<int> measured = circuit.measured_qubits();
  std::sort(measured.rbegin(), measured.rend());
  for (int q : measured) {
    std::map<int, DensityMatrix> next;
    for (const auto& [key, st] : slots) {
      for (int bit : {0, 1}) {
        DensityMatrix branch = trace_out(reported_branch(st, q, bit, spec.noise.eta), q);
        const int nkey = (PauliIndex::from_bell_slot(key) ^ flip_for(q, bit)).bell_slot();
        auto it = next.find(nkey);
        if (it == next.end()) {
          next.emplace(nkey, std::move(branch));
        } else {
          it->second = it->second + branch;
        }
      }
    }
    slots = std::move(next);
  }

  ComplexMatrix acc = ComplexMatrix::Zero(4, 4);
  for (const auto& [key, st] : slots) {
    acc += correct_end(st, PauliIndex::from_bell_slot(key)).mat();
  }
  return BusResult{DensityMatrix(std::move(acc))};
}

std::vector<OutcomeBranch> enumerate_bus_outcomes(const BusSpec& spec,
                                                  const SimOptions& options) {
  spec.validate();
  check_cap(spec.length, options);
  const SwapCircuit circuit = build_swap_circuit(spec.length);
  const int l = spec.length;

  struct Partial {
    std::vector<int> outcomes;  // indexed by register position - 1
    DensityMatrix state;
  };
  std::vector<Partial> partials;
  partials.push_back({std::vector<int>(std::max(0, l - 2), 0), run_unitary_layers(circuit, spec)});
  std::vector<int> measured = circuit.measured_qubits();
  std::sort(measured.rbegin(), measured.rend());
  for (int q : measured) {
    std::vector<Partial> next;
    for (const Partial& p : partials) {
      for (int bit : {0, 1}) {
        Partial child{p.outcomes, trace_out(reported_branch(p.state, q, bit, spec.noise.eta), q)};
        child.outcomes[q - 1] = bit;
        next.push_back(std::move(child));
      }
    }
    partials = std::move(next);
  }

  std::vector<OutcomeBranch> out;
  out.reserve(partials.size());
  for (Partial& p : partials) {
    OutcomeBranch br;
    br.record = MeasurementRecord::from_outcomes(p.outcomes);
    br.probability = std::max(0.0, p.state.trace_weight());
    if (br.probability > 1e-300) {
      br.end_state = correct_end(p.state, parity_completion(br.record)).normalized();
    }
    out.push_back(std::move(br));
  }
  return out;
}

DensityMatrix simulate_bus_sampled(const BusSpec& spec, int shots, std::uint64_t seed,
                                   const SimOptions& options) {
  spec.validate();
  check_cap(spec.length, options);
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  const SwapCircuit circuit = build_swap_circuit(spec.length);
  const DensityMatrix pre = run_unitary_layers(circuit, spec).normalized();
  std::vector<int> measured = circuit.measured_qubits();
  std::sort(measured.rbegin(), measured.rend());

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  ComplexMatrix acc = ComplexMatrix::Zero(4, 4);
  for (int s = 0; s < shots; ++s) {
    DensityMatrix st = pre;
    PauliIndex key{0, 0};
    for (int q : measured) {
      DensityMatrix zero = reported_branch(st, q, 0, spec.noise.eta);
      const double p0 = zero.trace_weight() / st.trace_weight();
      const int bit = unif(rng) < p0 ? 0 : 1;
      DensityMatrix chosen = bit == 0 ? std::move(zero) : reported_branch(st, q, 1, spec.noise.eta);
      st = trace_out(chosen, q).normalized();
      key = key ^ flip_for(q, bit);
    }
    acc += correct_end(st, key).mat();
  }
  return DensityMatrix(ComplexMatrix(acc / static_cast<double>(shots)));
}

// ---------------------------------------------------------------------------
// Bell-diagonal fast path

BellDiagonal elementary_pair(const NoiseModel& noise, ErrorModel model) {
  return simulate_bus_exact(BusSpec{2, noise, model}).bell();
}

namespace {

std::array<double, 4> compose(const std::array<double, 4>& x, const std::array<double, 4>& y) {
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out[i ^ j] += x[i] * y[j];
  }
  return out;
}

std::array<double, 4> misreport(const std::array<double, 4>& v, PauliIndex flip, double eta) {
  std::array<double, 4> out{};
  const int f = flip.bell_slot();
  for (int k = 0; k < 4; ++k) out[k] = eta * v[k] + (1.0 - eta) * v[k ^ f];
  return out;
}

// Probability that a joint CPHASE acts as intended; a failed joint randomizes
// both measured parities uniformly under either map.
double joint_success(const NoiseModel& noise, ErrorModel model) {
  if (model == ErrorModel::kDep) return noise.p;
  if (const auto* d = std::get_if<DiscretePhase>(&noise.phase)) return d->p;
  return equivalent_discrete_p(std::get<GaussianPhase>(noise.phase));
}

}  // namespace

BellDiagonal swap_recursion_step(const BellDiagonal& left, const BellDiagonal& right,
                                 const NoiseModel& noise, ErrorModel model) {
  if (model == ErrorModel::kCpeLeakage && noise.gamma > 0.0) {
    return swap_joint_exact(left, right, noise, model);
  }
  noise.validate();
  std::array<double, 4> v = compose(left.as_array(), right.as_array());
  v = misreport(v, {1, 0}, noise.eta);
  v = misreport(v, {0, 1}, noise.eta);
  const double p = joint_success(noise, model);
  const double total = v[0] + v[1] + v[2] + v[3];
  for (double& w : v) w = p * w + (1.0 - p) * total / 4.0;
  return BellDiagonal::from_array(v);
}

BellDiagonal swap_joint_exact(const BellDiagonal& left, const BellDiagonal& right,
                              const NoiseModel& noise, ErrorModel model) {
  noise.validate();
  const ComplexMatrix h = hadamard();
  // The right pair sits in the frame the schedule leaves it in: H on its
  // first qubit.
  const DensityMatrix right_frame = apply_unitary(right.to_state(), h, {0});
  DensityMatrix st = tensor(left.to_state(), right_frame);
  st = noisy_cphase(st, {1, 2}, noise, model);
  st = apply_unitary(st, h, {1});
  st = apply_unitary(st, h, {2});

  ComplexMatrix acc = ComplexMatrix::Zero(4, 4);
  for (int m_even : {0, 1}) {
    for (int m_odd : {0, 1}) {
      DensityMatrix br = reported_branch(st, 2, m_odd, noise.eta);
      br = reported_branch(br, 1, m_even, noise.eta);
      const DensityMatrix ends = partial_trace(br, {0, 3});
      acc += correct_end(ends, {m_even, m_odd}).mat();
    }
  }
  return BellDiagonal::from_state(DensityMatrix(std::move(acc)));
}

BellDiagonal fast_path_pair(int length, const NoiseModel& noise, ErrorModel model) {
  if (length < 2 || length % 2 != 0) {
    throw std::invalid_argument("fast_path_pair: length must be even and >= 2");
  }
  const BellDiagonal seed = elementary_pair(noise, model);
  BellDiagonal acc = seed;
  for (int k = 1; k < length / 2; ++k) acc = swap_recursion_step(acc, seed, noise, model);
  return acc;
}

// ---------------------------------------------------------------------------
// Closed forms

namespace {

double eta_exponent(double length, ExponentConvention conv) {
  return conv == ExponentConvention::kPrinted ? (length - 1.0) / 2.0 : (length - 2.0) / 2.0;
}

}  // namespace

BellDiagonal bus_pair_closed_form(double length, double p, double eta, ExponentConvention conv) {
  const double x = 2.0 * eta - 1.0;
  const double n = eta_exponent(length, conv);
  const double xn = std::pow(x, n);
  const double x2n = std::pow(x, 2.0 * n);
  const double a_plus = 0.25 * (1.0 + 2.0 * xn + x2n);
  const double a_minus = 0.25 * (1.0 - 2.0 * xn + x2n);
  const double b = 0.5 * (1.0 - a_plus - a_minus);
  const double pw = std::pow(p, length - 1.0);
  const double floor = 0.25 * (1.0 - pw);
  return {pw * a_plus + floor, pw * b + floor, pw * b + floor, pw * a_minus + floor};
}

double fidelity_closed_form(double length, double p, double eta, double gamma,
                            ExponentConvention conv) {
  const double x = 2.0 * eta - 1.0;
  const double n = eta_exponent(length, conv);
  const double pw = std::pow(p, length - 1.0);
  const double meas = 2.0 * std::pow(x, n) + std::pow(x, 2.0 * n);
  if (gamma == 0.0) return 0.25 * (1.0 + pw * meas);
  return (4.0 * pw * std::exp(-length * gamma) * meas + 3.0 + std::exp(-2.0 * length * gamma)) /
         16.0;
}

// ---------------------------------------------------------------------------
// Baselines and timing

SwapChainResult swap_chain_baseline(int length, double p, const SimOptions& options) {
  if (length < 1) throw std::invalid_argument("swap_chain_baseline: length must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
  const int n = length + 2;  // reference qubit, then positions 0..l
  check_cap(n, options);
  const ComplexMatrix h = hadamard();

  DensityMatrix st = tensor(DensityMatrix::bell({0, 0}), DensityMatrix(length));
  auto noisy_cnot = [&](int control, int target) {
    st = apply_unitary(st, h, {target});
    st = depolarizing_cphase(st, {control, target}, p);
    st = apply_unitary(st, h, {target});
  };
  for (int k = 1; k <= length; ++k) {
    noisy_cnot(k, k + 1);
    noisy_cnot(k + 1, k);
    noisy_cnot(k, k + 1);
  }
  SwapChainResult res;
  res.fidelity = fidelity_with_bell(partial_trace(st, {0, n - 1}), {0, 0});
  res.bound = std::pow(p, 2.0 * length);
  res.below_bound = res.fidelity < res.bound;
  return res;
}

ProtocolTimes protocol_times(int length, const TimeModel& tm) {
  if (length < 2) throw std::invalid_argument("protocol_times: length must be >= 2");
  tm.validate();
  return {4.0 * tm.tau_1bit + 2.0 * tm.tau_2bit + tm.tau_meas, 2.0 * length * tm.tau_2bit};
}

int crossover_length(const TimeModel& tm) {
  tm.validate();
  const double t_entswap = protocol_times(2, tm).t_entswap;
  int l = std::max(2, static_cast<int>(std::floor(t_entswap / (2.0 * tm.tau_2bit))) - 1);
  while (protocol_times(l, tm).t_swap <= t_entswap) ++l;
  while (l > 2 && protocol_times(l - 1, tm).t_swap > t_entswap) --l;
  return l;
}

}  // namespace qbus
