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

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qbus {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Default cap on exact registers: a 2^11 x 2^11 complex matrix is about 64 MB.
inline constexpr int kDefaultMaxQubits = 11;

struct SimOptions {
  int max_qubits = kDefaultMaxQubits;
};

/// Names a single-qubit Pauli sigma_{i,j} = X^j Z^i (up to phase):
/// (0,0)=1, (0,1)=X, (1,0)=Z, (1,1)=-iY.
///
/// `phase_flip` is the first index i and `bit_flip` the second index j.
struct PauliIndex {
  int phase_flip = 0;
  int bit_flip = 0;

  friend bool operator==(const PauliIndex&, const PauliIndex&) = default;

  /// Composition of two Pauli labels; phases are dropped.
  PauliIndex operator^(const PauliIndex& o) const {
    return {phase_flip ^ o.phase_flip, bit_flip ^ o.bit_flip};
  }
  /// Position in the Bell-diagonal ordering (0,0),(1,0),(0,1),(1,1).
  int bell_slot() const { return phase_flip + 2 * bit_flip; }
  static PauliIndex from_bell_slot(int slot) { return {slot & 1, (slot >> 1) & 1}; }
};

inline constexpr PauliIndex kAllPaulis[4] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};

// Fixed operators. Qubit 0 is the leftmost (most significant) tensor factor.
ComplexMatrix identity(int dim);
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
/// sigma_{i,j} with the sign convention sigma_{1,1} = -iY.
ComplexMatrix pauli(PauliIndex idx);
/// sigma_z exp(i pi/4 sigma_y), which is the usual [[1,1],[1,-1]]/sqrt2.
ComplexMatrix hadamard();
/// exp(i pi |11><11|) = diag(1,1,1,-1).
ComplexMatrix cphase();
/// Control is the first (left) qubit.
ComplexMatrix cnot();
ComplexMatrix rotation_x(double theta);
/// (|00> + |11>)/sqrt2 rotated by sigma_{i,j}^dagger on the first qubit.
Eigen::VectorXcd bell_vector(PauliIndex which);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
bool is_unitary(const ComplexMatrix& u, double tol = 1e-12);

/// Mixed state of a small qubit register.
///
/// The trace equals the trace weight: 1 unless a trace-decreasing (leakage)
/// operation has acted. Values are never mutated by the free functions below;
/// they return new states.
class DensityMatrix {
 public:
  /// |0...0><0...0| on `num_qubits` qubits.
  explicit DensityMatrix(int num_qubits);
  /// Takes ownership of `mat`; throws if it is not square with a power-of-two
  /// dimension.
  explicit DensityMatrix(ComplexMatrix mat);

  static DensityMatrix from_pure(const Eigen::VectorXcd& psi);
  static DensityMatrix maximally_mixed(int num_qubits);
  static DensityMatrix bell(PauliIndex which);

  int num_qubits() const { return num_qubits_; }
  std::int64_t dim() const { return mat_.rows(); }
  const ComplexMatrix& mat() const { return mat_; }
  double trace_weight() const { return mat_.trace().real(); }

  /// Same state scaled to unit trace. Throws on a zero-trace state.
  DensityMatrix normalized() const;

 private:
  int num_qubits_;
  ComplexMatrix mat_;
};

DensityMatrix operator+(const DensityMatrix& a, const DensityMatrix& b);
DensityMatrix operator*(double w, const DensityMatrix& a);
double max_abs_diff(const DensityMatrix& a, const DensityMatrix& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Hermitian within `herm_tol`, eigenvalues >= -psd_tol.
bool is_valid_state(const DensityMatrix& s, double herm_tol = 1e-12, double psd_tol = 1e-10);

/// K rho K^dagger with K acting on `targets` (targets[0] is K's most
/// significant qubit). K need not be unitary; used for Kraus operators.
DensityMatrix apply_operator(const DensityMatrix& state, const ComplexMatrix& k,
                             std::span<const int> targets);

/// U rho U^dagger. Throws std::invalid_argument if U is not unitary or the
/// targets are repeated or out of range.
DensityMatrix apply_unitary(const DensityMatrix& state, const ComplexMatrix& u,
                            std::span<const int> targets);
DensityMatrix apply_unitary(const DensityMatrix& state, const ComplexMatrix& u,
                            std::initializer_list<int> targets);

/// Reduced state on `keep` (in ascending qubit order).
DensityMatrix partial_trace(const DensityMatrix& state, std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& state, std::initializer_list<int> keep);

/// Tr_{targets}[rho] (x) 1/2^k placed back on `targets`.
DensityMatrix replace_with_maximally_mixed(const DensityMatrix& state,
                                           std::span<const int> targets);

/// <Psi^{i,j}| rho |Psi^{i,j}> for a two-qubit state.
double fidelity_with_bell(const DensityMatrix& state, PauliIndex which);

struct MeasurementBranch {
  int outcome = 0;
  double probability = 0.0;
  /// Unit-trace post-measurement state; empty when probability is zero.
  std::optional<DensityMatrix> post_state;
};

/// Ideal computational-basis measurement; both branches are returned and
/// the probabilities sum to the trace weight.
std::vector<MeasurementBranch> measure_qubit(const DensityMatrix& state, int qubit);

/// Unnormalized projection P rho P with P = |bit><bit| on `qubit`.
DensityMatrix project(const DensityMatrix& state, int qubit, int bit);

/// Removes `qubit` from the register by tracing it out.
DensityMatrix trace_out(const DensityMatrix& state, int qubit);

namespace detail {
void check_qubit(const DensityMatrix& state, int qubit);
void check_targets(const DensityMatrix& state, std::span<const int> targets);
/// Aborts in debug builds if `state` is not Hermitian.
void debug_check(const DensityMatrix& state);
}  // namespace detail

}  // namespace qbus
