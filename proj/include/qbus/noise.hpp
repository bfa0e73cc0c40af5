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
#include <utility>
#include <variant>
#include <vector>

#include "qbus/qmat.hpp"

namespace qbus {

/// Symmetric two-point phase law g = p delta(0) + (1-p) delta(pi); the
/// controlled-phase map then reads p U rho U^dagger + (1-p) rho.
struct DiscretePhase {
  double p = 1.0;
};

/// Centered Gaussian phase law with standard deviation `sigma` (radians).
struct GaussianPhase {
  double sigma = 0.0;
};

using PhaseNoise = std::variant<DiscretePhase, GaussianPhase>;

/// The controlled-phase map depends on g only through E[cos phi], so a
/// Gaussian law is equivalent to the two-point law with
/// p = (1 + exp(-sigma^2/2)) / 2.
double equivalent_discrete_p(const GaussianPhase& g);

/// How the effective decay gamma enters the |11> amplitude.
enum class LeakageConvention {
  /// |11> -> -e^{i phi - gamma/2} |11>: population loss e^{-gamma} per gate.
  kHalfRate,
  /// U(phi + i gamma): amplitude -e^{i phi - gamma}, population loss e^{-2 gamma}.
  kOperatorExponent,
};

enum class ErrorModel { kDep, kCpe, kCpeLeakage };

std::string to_string(ErrorModel m);
/// Accepts "dep", "cpe", "cpe-leak" (case-sensitive). Throws std::invalid_argument.
ErrorModel parse_error_model(const std::string& s);

struct NoiseModel {
  double p = 1.0;    ///< two-qubit gate success probability
  double eta = 1.0;  ///< detector efficiency, in [1/2, 1]
  double gamma = 0.0;
  PhaseNoise phase = DiscretePhase{1.0};
  LeakageConvention leakage = LeakageConvention::kHalfRate;

  static NoiseModel ideal() { return {}; }
  /// p drives both the depolarizing map and the discrete phase law.
  static NoiseModel uniform(double p, double eta, double gamma = 0.0) {
    return NoiseModel{p, eta, gamma, DiscretePhase{p}, LeakageConvention::kHalfRate};
  }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Depolarizing CPHASE: p U rho U^dagger + (1-p) Tr_ij[rho] (x) 1/4.
DensityMatrix depolarizing_cphase(const DensityMatrix& state, std::pair<int, int> qubits, double p);

/// Same channel written as CPHASE followed, with probability 1-p, by a
/// uniformly drawn sigma_a (x) sigma_b. Independent construction used to
/// cross-check depolarizing_cphase.
DensityMatrix pauli_mixture_cphase(const DensityMatrix& state, std::pair<int, int> qubits,
                                   double p);

/// Controlled-phase error. Discrete(p) is evaluated as p U(0) rho U(0)^dagger
/// + (1-p) rho; Gaussian(sigma) by Gauss-Hermite quadrature over U(phi).
DensityMatrix cpe_cphase(const DensityMatrix& state, std::pair<int, int> qubits,
                         const NoiseModel& noise);

/// Controlled-phase error with leakage out of |11>. Trace decreasing; the
/// leaked population is discarded.
DensityMatrix cpe_leakage_cphase(const DensityMatrix& state, std::pair<int, int> qubits,
                                 const NoiseModel& noise);

/// Dispatches on the error model. Used wherever a noisy CPHASE is needed.
DensityMatrix noisy_cphase(const DensityMatrix& state, std::pair<int, int> qubits,
                           const NoiseModel& noise, ErrorModel model);

/// Inefficient computational-basis measurement. Branches are keyed by the
/// reported bit; the reported bit is wrong with probability 1-eta.
std::vector<MeasurementBranch> noisy_measure(const DensityMatrix& state, int qubit, double eta);

/// Unnormalized state of the reported-`bit` branch:
/// eta P_bit rho P_bit + (1-eta) P_!bit rho P_!bit.
DensityMatrix reported_branch(const DensityMatrix& state, int qubit, int bit, double eta);

/// 1/4 sum_a (sigma_a (x) sigma_a) rho (sigma_a (x) sigma_a)^dagger.
DensityMatrix twirl(const DensityMatrix& state);

/// Gauss-Hermite nodes and weights for weight function e^{-x^2}
/// (Golub-Welsch), sorted by node.
std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int nodes);

inline constexpr int kGaussHermiteNodes = 41;

}  // namespace qbus
