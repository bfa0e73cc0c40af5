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

#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "qbus/nonlocal_gate.hpp"

namespace {

using namespace qbus;

GateJob job_for(const BellDiagonal& r, double p, double eta, TargetGate g = TargetGate::kCnot) {
  GateJob job;
  job.resource = r;
  job.noise = NoiseModel::uniform(p, eta);
  job.target_gate = g;
  job.input_state = standard_product_input(g);
  return job;
}

// Closed form written independently of the library for the grid test.
double reference(const BellDiagonal& r, double p, double eta) {
  const double e2 = eta * eta, mix = eta * (1 - eta), f2 = (1 - eta) * (1 - eta);
  return p * p * (r.a * e2 + r.b * mix + r.c * mix + r.d * f2) + (1 - p * p) / 4;
}

TEST(Teleport, PerfectResourceMakesPhiPlus) {
  const DensityMatrix out = teleported_gate(job_for(BellDiagonal{}, 1, 1));
  EXPECT_NEAR(fidelity_with_bell(out, {0, 0}), 1.0, 1e-12);
}

TEST(Teleport, WernerResourceGivesItsFidelity) {
  for (double a : {0.9, 0.6, 0.3}) {
    const GateJob job = job_for(BellDiagonal::werner(a), 1, 1);
    EXPECT_NEAR(gate_fidelity(job, teleported_gate(job)), a, 1e-12);
  }
}

TEST(Teleport, FailedGatesGiveQuarter) {
  const GateJob job = job_for(BellDiagonal::werner(0.8), 0.0, 0.9);
  EXPECT_NEAR(gate_fidelity(job, teleported_gate(job)), 0.25, 1e-12);
}

TEST(Teleport, MatchesClosedFormOnGrid) {
  const BellDiagonal skewed{0.7, 0.2, 0.06, 0.04};
  for (const BellDiagonal& r : {BellDiagonal::werner(0.75), skewed, BellDiagonal{0.985, 0.005, 0.005, 0.005}}) {
    for (double p : {1.0, 0.995, 0.9}) {
      for (double eta : {1.0, 0.99, 0.8}) {
        for (TargetGate g : {TargetGate::kCnot, TargetGate::kCphase}) {
          const GateJob job = job_for(r, p, eta, g);
          const double sim = gate_fidelity(job, teleported_gate(job));
          EXPECT_NEAR(sim, reference(r, p, eta), 1e-12);
          EXPECT_NEAR(gate_fidelity_closed_form(r, p, eta).value, reference(r, p, eta), 1e-15);
        }
      }
    }
  }
}

TEST(Teleport, IdealRunEqualsDirectGateOnRandomInputs) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXcd psi = kron(oracle::random_qubit(rng), oracle::random_qubit(rng));
    for (TargetGate g : {TargetGate::kCnot, TargetGate::kCphase}) {
      GateJob job = job_for(BellDiagonal{}, 1, 1, g);
      job.input_state = DensityMatrix::from_pure(psi);
      const DensityMatrix out = teleported_gate(job);
      const Eigen::VectorXcd expect = target_unitary(g) * psi;
      EXPECT_NEAR(std::norm(expect.dot(out.mat() * expect)), 1.0, 1e-10);
      EXPECT_NEAR(gate_fidelity(job, out), 1.0, 1e-10);
    }
  }
}

TEST(Teleport, BranchesAgreeUnderIdealConditions) {
  std::mt19937_64 rng(4);
  GateJob job = job_for(BellDiagonal{}, 1, 1);
  job.input_state = DensityMatrix::from_pure(kron(oracle::random_qubit(rng), oracle::random_qubit(rng)));
  const auto branches = teleported_gate_branches(job);
  ASSERT_EQ(branches.size(), 4u);
  double total = 0;
  for (const GateBranch& b : branches) {
    total += b.probability;
    EXPECT_NEAR(b.probability, 0.25, 1e-12);
    EXPECT_LT(max_abs_diff(b.state, branches[0].state), 1e-12);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Teleport, OutputsAreValidStates) {
  std::mt19937_64 rng(5);
  for (double p : {1.0, 0.8, 0.0}) {
    for (double eta : {1.0, 0.7, 0.5}) {
      GateJob job = job_for(BellDiagonal{0.5, 0.3, 0.1, 0.1}, p, eta);
      job.input_state = DensityMatrix(oracle::random_state(2, rng));
      const DensityMatrix out = teleported_gate(job);
      EXPECT_TRUE(is_valid_state(out));
      EXPECT_NEAR(out.trace_weight(), 1.0, 1e-12);
    }
  }
}

TEST(Teleport, CpeLocalGatesKeepTheFidelity) {
  GateJob job = job_for(BellDiagonal::werner(0.9), 0.95, 0.97);
  const double dep = gate_fidelity(job, teleported_gate(job));
  job.local_error = ErrorModel::kCpe;
  EXPECT_TRUE(is_valid_state(teleported_gate(job)));
  EXPECT_LT(gate_fidelity(job, teleported_gate(job)), 1.0);
  EXPECT_GT(dep, 0.25);
}

TEST(ClosedForm, ExamplesAndOrderingWarning) {
  EXPECT_NEAR(gate_fidelity_closed_form(BellDiagonal{}, 1, 1).value, 1.0, 0.0);
  const BellDiagonal r{0.6, 0.2, 0.15, 0.05};
  EXPECT_NEAR(gate_fidelity_closed_form(r, 1, 1).value, 0.6, 1e-15);
  EXPECT_FALSE(gate_fidelity_closed_form(r, 1, 1).ordering_warning);
  const GateClosedForm bad = gate_fidelity_closed_form(BellDiagonal{0.3, 0.4, 0.2, 0.1}, 0.9, 0.9);
  EXPECT_TRUE(bad.ordering_warning);
  EXPECT_NEAR(bad.value, reference(BellDiagonal{0.3, 0.4, 0.2, 0.1}, 0.9, 0.9), 1e-15);
  EXPECT_THROW(gate_fidelity_closed_form(r, 1.2, 1), std::invalid_argument);
}

TEST(Job, Validation) {
  GateJob job = job_for(BellDiagonal{}, 1, 1);
  job.input_state = DensityMatrix(3);
  EXPECT_THROW(teleported_gate(job), std::invalid_argument);
  job = job_for(BellDiagonal{1.2, -0.2, 0, 0}, 1, 1);
  EXPECT_THROW(teleported_gate(job), std::invalid_argument);
}

}  // namespace
