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

#include "qbus/qmat.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace qbus {

namespace {

using Index = std::int64_t;

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(Index n) {
  int k = 0;
  while ((Index{1} << k) < n) ++k;
  return k;
}

// Bit position of qubit q in a basis index; qubit 0 is the most significant.
Index bit_of(int num_qubits, int q) { return Index{1} << (num_qubits - 1 - q); }

struct TargetLayout {
  Index mask = 0;
  std::vector<Index> offsets;  // offsets[s] for local basis index s
};

TargetLayout layout_for(int num_qubits, std::span<const int> targets) {
  const int k = static_cast<int>(targets.size());
  TargetLayout lay;
  lay.offsets.assign(std::size_t{1} << k, 0);
  for (int m = 0; m < k; ++m) lay.mask |= bit_of(num_qubits, targets[m]);
  for (Index s = 0; s < (Index{1} << k); ++s) {
    Index off = 0;
    for (int m = 0; m < k; ++m) {
      if ((s >> (k - 1 - m)) & 1) off |= bit_of(num_qubits, targets[m]);
    }
    lay.offsets[s] = off;
  }
  return lay;
}

}  // namespace

ComplexMatrix identity(int dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix pauli(PauliIndex idx) {
  ComplexMatrix m = identity(2);
  if (idx.bit_flip) m = pauli_x() * m;
  if (idx.phase_flip) m = m * pauli_z();
  // X Z = -iY, so sigma_{1,1} comes out with the required sign.
  return m;
}

ComplexMatrix hadamard() {
  const double r = std::numbers::sqrt2 / 2.0;
  ComplexMatrix m(2, 2);
  m << r, r, r, -r;
  return m;
}

ComplexMatrix cphase() {
  ComplexMatrix m = identity(4);
  m(3, 3) = -1.0;
  return m;
}

ComplexMatrix cnot() {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return m;
}

ComplexMatrix rotation_x(double theta) {
  return std::cos(theta / 2) * identity(2) - cplx(0, std::sin(theta / 2)) * pauli_x();
}

Eigen::VectorXcd bell_vector(PauliIndex which) {
  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(4);
  phi(0) = phi(3) = std::numbers::sqrt2 / 2.0;
  return kron(pauli(which).adjoint(), identity(2)) * phi;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  const ComplexMatrix d = u.adjoint() * u - identity(static_cast<int>(u.rows()));
  return d.cwiseAbs().maxCoeff() <= tol;
}

DensityMatrix::DensityMatrix(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1 || num_qubits > 30) {
    throw std::invalid_argument("DensityMatrix: qubit count out of range");
  }
  const Index d = Index{1} << num_qubits;
  mat_ = ComplexMatrix::Zero(d, d);
  mat_(0, 0) = 1.0;
}

DensityMatrix::DensityMatrix(ComplexMatrix mat) : num_qubits_(0), mat_(std::move(mat)) {
  if (mat_.rows() != mat_.cols() || !is_power_of_two(mat_.rows()) || mat_.rows() < 2) {
    throw std::invalid_argument("DensityMatrix: matrix must be square with dimension 2^n, n>=1");
  }
  num_qubits_ = log2_exact(mat_.rows());
}

DensityMatrix DensityMatrix::from_pure(const Eigen::VectorXcd& psi) {
  return DensityMatrix(ComplexMatrix(psi * psi.adjoint()));
}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
  const Index d = Index{1} << num_qubits;
  return DensityMatrix(ComplexMatrix(identity(static_cast<int>(d)) / static_cast<double>(d)));
}

DensityMatrix DensityMatrix::bell(PauliIndex which) { return from_pure(bell_vector(which)); }

DensityMatrix DensityMatrix::normalized() const {
  const double w = trace_weight();
  if (!(w > 0.0)) throw std::domain_error("DensityMatrix::normalized: zero trace");
  return DensityMatrix(ComplexMatrix(mat_ / w));
}

DensityMatrix operator+(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.num_qubits() != b.num_qubits()) throw std::invalid_argument("qubit count mismatch");
  return DensityMatrix(ComplexMatrix(a.mat() + b.mat()));
}

DensityMatrix operator*(double w, const DensityMatrix& a) {
  return DensityMatrix(ComplexMatrix(w * a.mat()));
}

double max_abs_diff(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.num_qubits() != b.num_qubits()) throw std::invalid_argument("qubit count mismatch");
  return (a.mat() - b.mat()).cwiseAbs().maxCoeff();
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(kron(a.mat(), b.mat()));
}

bool is_valid_state(const DensityMatrix& s, double herm_tol, double psd_tol) {
  const ComplexMatrix& m = s.mat();
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > herm_tol) return false;
  const ComplexMatrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -psd_tol;
}

namespace detail {

void check_qubit(const DensityMatrix& state, int qubit) {
  if (qubit < 0 || qubit >= state.num_qubits()) {
    throw std::out_of_range("qubit index " + std::to_string(qubit) + " out of range");
  }
}

void check_targets(const DensityMatrix& state, std::span<const int> targets) {
  for (std::size_t i = 0; i < targets.size(); ++i) {
    check_qubit(state, targets[i]);
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) throw std::invalid_argument("repeated target qubit");
    }
  }
}

void debug_check([[maybe_unused]] const DensityMatrix& state) {
#ifndef NDEBUG
  const ComplexMatrix& m = state.mat();
  assert((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
#endif
}

}  // namespace detail

DensityMatrix apply_operator(const DensityMatrix& state, const ComplexMatrix& k,
                             std::span<const int> targets) {
  detail::check_targets(state, targets);
  const Index local = Index{1} << targets.size();
  if (k.rows() != local || k.cols() != local) {
    throw std::invalid_argument("operator dimension does not match target count");
  }
  const int n = state.num_qubits();
  const Index d = state.dim();
  const TargetLayout lay = layout_for(n, targets);
  const ComplexMatrix& in = state.mat();

  std::vector<Index> bases;
  bases.reserve(static_cast<std::size_t>(d / local));
  for (Index b = 0; b < d; ++b) {
    if ((b & lay.mask) == 0) bases.push_back(b);
  }

  // K on the row index.
  ComplexMatrix tmp(d, d);
  std::vector<cplx> v(static_cast<std::size_t>(local));
  for (Index c = 0; c < d; ++c) {
    for (Index b : bases) {
      for (Index s = 0; s < local; ++s) v[s] = in(b + lay.offsets[s], c);
      for (Index a = 0; a < local; ++a) {
        cplx acc = 0.0;
        for (Index s = 0; s < local; ++s) acc += k(a, s) * v[s];
        tmp(b + lay.offsets[a], c) = acc;
      }
    }
  }
  // K^dagger on the column index.
  ComplexMatrix out(d, d);
  for (Index b : bases) {
    for (Index a = 0; a < local; ++a) {
      auto col = out.col(b + lay.offsets[a]);
      col.setZero();
      for (Index s = 0; s < local; ++s) {
        const cplx w = std::conj(k(a, s));
        if (w != cplx(0.0)) col += w * tmp.col(b + lay.offsets[s]);
      }
    }
  }
  DensityMatrix result(std::move(out));
  detail::debug_check(result);
  return result;
}

DensityMatrix apply_unitary(const DensityMatrix& state, const ComplexMatrix& u,
                            std::span<const int> targets) {
  if (!is_unitary(u, 1e-12)) throw std::invalid_argument("apply_unitary: operator is not unitary");
  return apply_operator(state, u, targets);
}

DensityMatrix apply_unitary(const DensityMatrix& state, const ComplexMatrix& u,
                            std::initializer_list<int> targets) {
  return apply_unitary(state, u, std::span<const int>(targets.begin(), targets.size()));
}

DensityMatrix partial_trace(const DensityMatrix& state, std::span<const int> keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  detail::check_targets(state, keep);
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());

  const int n = state.num_qubits();
  const Index d = state.dim();
  Index keep_mask = 0;
  for (int q : kept) keep_mask |= bit_of(n, q);
  const Index traced_mask = (d - 1) & ~keep_mask;

  std::vector<Index> compress(static_cast<std::size_t>(d));
  for (Index idx = 0; idx < d; ++idx) {
    Index c = 0;
    for (int q : kept) c = (c << 1) | ((idx & bit_of(n, q)) ? 1 : 0);
    compress[idx] = c;
  }
  const Index dk = Index{1} << kept.size();
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  const ComplexMatrix& m = state.mat();
  for (Index c = 0; c < d; ++c) {
    for (Index r = 0; r < d; ++r) {
      if (((r ^ c) & traced_mask) == 0) out(compress[r], compress[c]) += m(r, c);
    }
  }
  return DensityMatrix(std::move(out));
}

DensityMatrix partial_trace(const DensityMatrix& state, std::initializer_list<int> keep) {
  return partial_trace(state, std::span<const int>(keep.begin(), keep.size()));
}

DensityMatrix replace_with_maximally_mixed(const DensityMatrix& state,
                                           std::span<const int> targets) {
  detail::check_targets(state, targets);
  const int n = state.num_qubits();
  const Index d = state.dim();
  const TargetLayout lay = layout_for(n, targets);
  const double scale = 1.0 / static_cast<double>(lay.offsets.size());
  const ComplexMatrix& m = state.mat();
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (Index c = 0; c < d; ++c) {
    const Index cb = c & ~lay.mask;
    for (Index r = 0; r < d; ++r) {
      if ((r & lay.mask) != (c & lay.mask)) continue;
      const Index rb = r & ~lay.mask;
      cplx acc = 0.0;
      for (Index off : lay.offsets) acc += m(rb + off, cb + off);
      out(r, c) = acc * scale;
    }
  }
  return DensityMatrix(std::move(out));
}

double fidelity_with_bell(const DensityMatrix& state, PauliIndex which) {
  if (state.num_qubits() != 2) throw std::invalid_argument("fidelity_with_bell: need 2 qubits");
  const Eigen::VectorXcd v = bell_vector(which);
  return (v.adjoint() * state.mat() * v)(0, 0).real();
}

DensityMatrix project(const DensityMatrix& state, int qubit, int bit) {
  detail::check_qubit(state, qubit);
  const Index mask = bit_of(state.num_qubits(), qubit);
  const Index want = bit ? mask : 0;
  ComplexMatrix out = state.mat();
  for (Index c = 0; c < state.dim(); ++c) {
    for (Index r = 0; r < state.dim(); ++r) {
      if ((r & mask) != want || (c & mask) != want) out(r, c) = 0.0;
    }
  }
  return DensityMatrix(std::move(out));
}

std::vector<MeasurementBranch> measure_qubit(const DensityMatrix& state, int qubit) {
  detail::check_qubit(state, qubit);
  std::vector<MeasurementBranch> branches;
  for (int bit : {0, 1}) {
    DensityMatrix projected = project(state, qubit, bit);
    MeasurementBranch br;
    br.outcome = bit;
    br.probability = std::max(0.0, projected.trace_weight());
    if (br.probability > 0.0) br.post_state = projected.normalized();
    branches.push_back(std::move(br));
  }
  return branches;
}

DensityMatrix trace_out(const DensityMatrix& state, int qubit) {
  detail::check_qubit(state, qubit);
  if (state.num_qubits() == 1) throw std::invalid_argument("trace_out: cannot remove last qubit");
  std::vector<int> keep;
  for (int q = 0; q < state.num_qubits(); ++q) {
    if (q != qubit) keep.push_back(q);
  }
  return partial_trace(state, keep);
}

}  // namespace qbus
