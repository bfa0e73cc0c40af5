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

#include <string>
#include <vector>

#include "qbus/bus_swap.hpp"
#include "qbus/noise.hpp"

namespace qbus {

enum class TargetGate { kCnot, kCphase };

std::string to_string(TargetGate g);

struct GateJob {
  BellDiagonal resource;  ///< pair shared by bus qubits 1 and l
  NoiseModel noise;
  TargetGate target_gate = TargetGate::kCnot;
  DensityMatrix input_state{2};  ///< on (A, B)
  ErrorModel local_error = ErrorModel::kDep;

  void validate() const;
};

/// Ideal two-qubit unitary for the target gate, control on A.
ComplexMatrix target_unitary(TargetGate g);

/// Product input mapped to |Psi^{0,0}> (CNOT) or to a maximally entangled
/// state (CPHASE) by the ideal gate: |+0> and |++> respectively.
DensityMatrix standard_product_input(TargetGate g);

/// Gate teleportation through the resource pair on the register (A, 1, l, B):
/// noisy CNOT A->1, measure 1 (X on l if set), noisy CNOT l->B, H and measure
/// on l (Z on A if set). CPHASE wraps the same steps in H on B.
/// Returns the (A, B) state averaged over reported outcomes.
DensityMatrix teleported_gate(const GateJob& job);

struct GateBranch {
  int m1 = 0;  ///< reported bit on bus qubit 1
  int ml = 0;  ///< reported bit on bus qubit l
  double probability = 0.0;
  DensityMatrix state{2};  ///< corrected, unit trace
};

/// The four reported-outcome branches of teleported_gate, kept separate.
std::vector<GateBranch> teleported_gate_branches(const GateJob& job);

/// <psi|out|psi> with psi the ideal gate applied to a pure input state.
double gate_fidelity(const GateJob& job, const DensityMatrix& output);

struct GateClosedForm {
  double value = 0.0;
  /// Set when the resource is not dominated by its first component.
  bool ordering_warning = false;
};

/// p^2 (a eta^2 + (b+c) eta (1-eta) + d (1-eta)^2) + (1-p^2)/4.
GateClosedForm gate_fidelity_closed_form(const BellDiagonal& resource, double p, double eta);

}  // namespace qbus
