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

#include "qbus/nonlocal_gate.hpp"

#include <cmath>
#include <stdexcept>

namespace qbus {

namespace {

// Register positions.
constexpr int kA = 0;
constexpr int kB = 1;
constexpr int kBus1 = 2;
constexpr int kBusL = 3;

DensityMatrix noisy_cnot(const DensityMatrix& st, int control, int target, const GateJob& job) {
  const ComplexMatrix h = hadamard();
  DensityMatrix out = apply_unitary(st, h, {target});
  out = noisy_cphase(out, {control, target}, job.noise, job.local_error);
  return apply_unitary(out, h, {target});
}

// Unnormalized, corrected (A, B) state of one reported branch.
DensityMatrix run_branch(const DensityMatrix& start, const GateJob& job, int m1, int ml) {
  const ComplexMatrix h = hadamard();
  const double eta = job.noise.eta;
  DensityMatrix st = noisy_cnot(start, kA, kBus1, job);
  st = reported_branch(st, kBus1, m1, eta);
  if (m1) st = apply_unitary(st, pauli_x(), {kBusL});
  st = noisy_cnot(st, kBusL, kB, job);
  st = apply_unitary(st, h, {kBusL});
  st = reported_branch(st, kBusL, ml, eta);
  if (ml) st = apply_unitary(st, pauli_z(), {kA});
  return partial_trace(st, {kA, kB});
}

DensityMatrix prepare(const GateJob& job) {
  job.validate();
  DensityMatrix in = job.input_state;
  if (job.target_gate == TargetGate::kCphase) in = apply_unitary(in, hadamard(), {1});
  return tensor(in, job.resource.to_state());  // A, B, 1, l
}

DensityMatrix finish(const GateJob& job, DensityMatrix out) {
  if (job.target_gate == TargetGate::kCphase) out = apply_unitary(out, hadamard(), {1});
  return out;
}

}  // namespace

std::string to_string(TargetGate g) { return g == TargetGate::kCnot ? "cnot" : "cphase"; }

void GateJob::validate() const {
  resource.validate();
  noise.validate();
  if (input_state.num_qubits() != 2) throw std::invalid_argument("input_state must be 2-qubit");
  if (!is_valid_state(input_state)) throw std::invalid_argument("input_state is not a valid state");
}

ComplexMatrix target_unitary(TargetGate g) { return g == TargetGate::kCnot ? cnot() : cphase(); }

DensityMatrix standard_product_input(TargetGate g) {
  Eigen::VectorXcd plus(2);
  plus << 1.0, 1.0;
  plus /= std::sqrt(2.0);
  Eigen::VectorXcd second(2);
  if (g == TargetGate::kCnot) {
    second << 1.0, 0.0;
  } else {
    second = plus;
  }
  return DensityMatrix::from_pure(kron(plus, second));
}

DensityMatrix teleported_gate(const GateJob& job) {
  const DensityMatrix start = prepare(job);
  ComplexMatrix acc = ComplexMatrix::Zero(4, 4);
  for (int m1 : {0, 1}) {
    for (int ml : {0, 1}) acc += run_branch(start, job, m1, ml).mat();
  }
  return finish(job, DensityMatrix(std::move(acc)));
}

std::vector<GateBranch> teleported_gate_branches(const GateJob& job) {
  const DensityMatrix start = prepare(job);
  std::vector<GateBranch> out;
  for (int m1 : {0, 1}) {
    for (int ml : {0, 1}) {
      const DensityMatrix br = run_branch(start, job, m1, ml);
      GateBranch g;
      g.m1 = m1;
      g.ml = ml;
      g.probability = br.trace_weight();
      if (g.probability > 0.0) g.state = finish(job, br.normalized());
      out.push_back(std::move(g));
    }
  }
  return out;
}

double gate_fidelity(const GateJob& job, const DensityMatrix& output) {
  const ComplexMatrix u = target_unitary(job.target_gate);
  const ComplexMatrix ideal = u * job.input_state.mat() * u.adjoint();
  return (ideal * output.mat()).trace().real();
}

GateClosedForm gate_fidelity_closed_form(const BellDiagonal& r, double p, double eta) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
  if (!(eta >= 0.5 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [1/2,1]");
  GateClosedForm out;
  const double q = 1.0 - eta;
  out.value = p * p * (r.a * eta * eta + (r.b + r.c) * eta * q + r.d * q * q) + (1.0 - p * p) / 4.0;
  out.ordering_warning = !(r.a > r.b && r.a > r.c && r.a > r.d);
  return out;
}

}  // namespace qbus
