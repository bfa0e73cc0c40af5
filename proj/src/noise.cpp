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

#include "qbus/noise.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace qbus {

namespace {

using Index = std::int64_t;

void check_pair(const DensityMatrix& state, std::pair<int, int> q) {
  const int t[2] = {q.first, q.second};
  detail::check_targets(state, t);
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
  }
}

// One atom of a phase law: weight and phase.
struct PhaseAtom {
  double weight;
  double phi;
};

std::vector<PhaseAtom> atoms_for(const PhaseNoise& noise) {
  if (const auto* d = std::get_if<DiscretePhase>(&noise)) {
    return {{d->p, 0.0}, {1.0 - d->p, std::numbers::pi}};
  }
  const double sigma = std::get<GaussianPhase>(noise).sigma;
  if (sigma == 0.0) return {{1.0, 0.0}};
  const auto [x, w] = gauss_hermite(kGaussHermiteNodes);
  std::vector<PhaseAtom> atoms;
  atoms.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    atoms.push_back({w[i] / std::sqrt(std::numbers::pi), std::numbers::sqrt2 * sigma * x[i]});
  }
  return atoms;
}

// Averages K(phi) rho K(phi)^dagger over the phase law, where K(phi) is
// diagonal on the pair with entries (1, 1, 1, -amp e^{i phi}). Because K is
// diagonal the average reduces to an entrywise multiplier table.
DensityMatrix average_diagonal_phase(const DensityMatrix& state, std::pair<int, int> q,
                                     const std::vector<PhaseAtom>& atoms, double amp) {
  std::array<std::array<cplx, 4>, 4> table{};
  for (const PhaseAtom& a : atoms) {
    const std::array<cplx, 4> k = {1.0, 1.0, 1.0, -amp * std::polar(1.0, a.phi)};
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) table[r][c] += a.weight * k[r] * std::conj(k[c]);
    }
  }
  const int n = state.num_qubits();
  const Index bi = Index{1} << (n - 1 - q.first);
  const Index bj = Index{1} << (n - 1 - q.second);
  auto local = [&](Index idx) { return ((idx & bi) ? 2 : 0) + ((idx & bj) ? 1 : 0); };

  ComplexMatrix out = state.mat();
  for (Index c = 0; c < state.dim(); ++c) {
    const int lc = local(c);
    for (Index r = 0; r < state.dim(); ++r) out(r, c) *= table[local(r)][lc];
  }
  return DensityMatrix(std::move(out));
}

}  // namespace

double equivalent_discrete_p(const GaussianPhase& g) {
  return 0.5 * (1.0 + std::exp(-0.5 * g.sigma * g.sigma));
}

std::string to_string(ErrorModel m) {
  switch (m) {
    case ErrorModel::kDep:
      return "dep";
    case ErrorModel::kCpe:
      return "cpe";
    case ErrorModel::kCpeLeakage:
      return "cpe-leak";
  }
  return "?";
}

ErrorModel parse_error_model(const std::string& s) {
  if (s == "dep") return ErrorModel::kDep;
  if (s == "cpe") return ErrorModel::kCpe;
  if (s == "cpe-leak") return ErrorModel::kCpeLeakage;
  throw std::invalid_argument("model: expected one of dep|cpe|cpe-leak, got '" + s + "'");
}

void NoiseModel::validate() const {
  check_probability(p, "p");
  if (!(eta >= 0.5 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [1/2,1]");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be >= 0");
  if (const auto* d = std::get_if<DiscretePhase>(&phase)) {
    check_probability(d->p, "phase_noise.p");
  } else if (!(std::get<GaussianPhase>(phase).sigma >= 0.0)) {
    throw std::invalid_argument("phase_noise.sigma must be >= 0");
  }
}

DensityMatrix depolarizing_cphase(const DensityMatrix& state, std::pair<int, int> qubits,
                                  double p) {
  check_probability(p, "p");
  check_pair(state, qubits);
  const int t[2] = {qubits.first, qubits.second};
  const DensityMatrix gated = apply_unitary(state, cphase(), t);
  if (p == 1.0) return gated;
  // Tr_ij commutes with U on (i,j), so the mixed term can use either state.
  return p * gated + (1.0 - p) * replace_with_maximally_mixed(state, t);
}

DensityMatrix pauli_mixture_cphase(const DensityMatrix& state, std::pair<int, int> qubits,
                                   double p) {
  check_probability(p, "p");
  const int t[2] = {qubits.first, qubits.second};
  const DensityMatrix gated = apply_unitary(state, cphase(), t);
  ComplexMatrix acc = ComplexMatrix::Zero(state.dim(), state.dim());
  for (PauliIndex a : kAllPaulis) {
    for (PauliIndex b : kAllPaulis) {
      acc += apply_unitary(gated, kron(pauli(a), pauli(b)), t).mat();
    }
  }
  return p * gated + ((1.0 - p) / 16.0) * DensityMatrix(std::move(acc));
}

DensityMatrix cpe_cphase(const DensityMatrix& state, std::pair<int, int> qubits,
                         const NoiseModel& noise) {
  check_pair(state, qubits);
  const int t[2] = {qubits.first, qubits.second};
  if (const auto* d = std::get_if<DiscretePhase>(&noise.phase)) {
    check_probability(d->p, "phase_noise.p");
    const DensityMatrix gated = apply_unitary(state, cphase(), t);
    if (d->p == 1.0) return gated;
    return d->p * gated + (1.0 - d->p) * state;
  }
  const double sigma = std::get<GaussianPhase>(noise.phase).sigma;
  if (!(sigma >= 0.0)) throw std::invalid_argument("phase_noise.sigma must be >= 0");
  return average_diagonal_phase(state, qubits, atoms_for(noise.phase), 1.0);
}

DensityMatrix cpe_leakage_cphase(const DensityMatrix& state, std::pair<int, int> qubits,
                                 const NoiseModel& noise) {
  if (!(noise.gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
  if (noise.gamma == 0.0) return cpe_cphase(state, qubits, noise);
  check_pair(state, qubits);
  const double amp = noise.leakage == LeakageConvention::kHalfRate ? std::exp(-0.5 * noise.gamma)
                                                                   : std::exp(-noise.gamma);
  return average_diagonal_phase(state, qubits, atoms_for(noise.phase), amp);
}

DensityMatrix noisy_cphase(const DensityMatrix& state, std::pair<int, int> qubits,
                           const NoiseModel& noise, ErrorModel model) {
  switch (model) {
    case ErrorModel::kDep:
      return depolarizing_cphase(state, qubits, noise.p);
    case ErrorModel::kCpe:
      return cpe_cphase(state, qubits, noise);
    case ErrorModel::kCpeLeakage:
      return cpe_leakage_cphase(state, qubits, noise);
  }
  throw std::logic_error("unknown error model");
}

DensityMatrix reported_branch(const DensityMatrix& state, int qubit, int bit, double eta) {
  if (!(eta >= 0.5 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [1/2,1]");
  const DensityMatrix right = project(state, qubit, bit);
  if (eta == 1.0) return right;
  return eta * right + (1.0 - eta) * project(state, qubit, 1 - bit);
}

std::vector<MeasurementBranch> noisy_measure(const DensityMatrix& state, int qubit, double eta) {
  detail::check_qubit(state, qubit);
  std::vector<MeasurementBranch> branches;
  for (int bit : {0, 1}) {
    const DensityMatrix unnorm = reported_branch(state, qubit, bit, eta);
    MeasurementBranch br;
    br.outcome = bit;
    br.probability = std::max(0.0, unnorm.trace_weight());
    if (br.probability > 0.0) br.post_state = unnorm.normalized();
    branches.push_back(std::move(br));
  }
  return branches;
}

DensityMatrix twirl(const DensityMatrix& state) {
  if (state.num_qubits() != 2) throw std::invalid_argument("twirl: need a two-qubit state");
  const ComplexMatrix paulis[4] = {identity(2), pauli_x(), pauli_y(), pauli_z()};
  ComplexMatrix acc = ComplexMatrix::Zero(4, 4);
  for (const ComplexMatrix& s : paulis) {
    const ComplexMatrix k = kron(s, s);
    acc += k * state.mat() * k.adjoint();
  }
  return DensityMatrix(ComplexMatrix(acc / 4.0));
}

std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int nodes) {
  if (nodes < 1) throw std::invalid_argument("gauss_hermite: need at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(nodes, nodes);
  for (int k = 1; k < nodes; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(k / 2.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  std::vector<double> x(nodes), w(nodes);
  for (int i = 0; i < nodes; ++i) {
    x[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    w[i] = std::sqrt(std::numbers::pi) * v0 * v0;
  }
  return {x, w};
}

}  // namespace qbus
