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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "qbus/bus_swap.hpp"

namespace {

using namespace qbus;

// Reference end-pair fidelity derived by hand: l/2-1 joints, each contributing
// two measurements, and l-1 noisy CPHASEs.
double reference_fidelity(int l, double p, double eta) {
  const double x = 2 * eta - 1;
  const int n = l / 2 - 1;
  return 0.25 * (1 + std::pow(p, l - 1) * (2 * std::pow(x, n) + std::pow(x, 2 * n)));
}

TEST(Circuit, LayerStructure) {
  for (int l : {2, 4, 8, 12}) {
    const SwapCircuit c = build_swap_circuit(l);
    ASSERT_EQ(c.layers.size(), 7u);
    EXPECT_EQ(c.two_qubit_gate_count(), l - 1);
    EXPECT_EQ(static_cast<int>(c.measured_qubits().size()), l - 2);
    EXPECT_EQ(c.layers[0].gates.size(), static_cast<std::size_t>(l));
    EXPECT_EQ(c.layers.back().kind, LayerKind::kCompletion);
    for (int q : c.measured_qubits()) {
      EXPECT_GT(q, 0);
      EXPECT_LT(q, l - 1);
    }
  }
  EXPECT_THROW(build_swap_circuit(3), std::invalid_argument);
  EXPECT_THROW(build_swap_circuit(0), std::invalid_argument);
}

TEST(Circuit, DurationIsIndependentOfLength) {
  const TimeModel tm{0.5, 2.0, 3.0};
  for (int l : {2, 4, 10, 40}) {
    EXPECT_NEAR(circuit_duration(build_swap_circuit(l), tm), 4 * 0.5 + 2 * 2.0 + 3.0, 1e-15);
  }
}

TEST(Record, ParitiesAndCompletion) {
  const MeasurementRecord r = MeasurementRecord::from_outcomes({1, 0, 1, 1, 0, 1});
  EXPECT_EQ(r.parity_even, 0);  // bus qubits 2, 4, 6
  EXPECT_EQ(r.parity_odd, 0);   // bus qubits 3, 5, 7
  EXPECT_TRUE(r.consistent());
  const MeasurementRecord s = MeasurementRecord::from_outcomes({1, 1});
  EXPECT_EQ(parity_completion(s), (PauliIndex{1, 1}));
  EXPECT_THROW(MeasurementRecord::from_outcomes({2}), std::invalid_argument);
}

TEST(Exact, IdealBusDeliversPhiPlus) {
  for (int l : {2, 4, 6, 8}) {
    const BusResult r = simulate_bus_exact({l, NoiseModel::ideal(), ErrorModel::kDep});
    EXPECT_NEAR(r.fidelity(), 1.0, 1e-12) << l;
    EXPECT_NEAR(r.trace_weight(), 1.0, 1e-12);
  }
}

TEST(Exact, DepMatchesReferenceFidelity) {
  for (int l : {2, 4, 6, 8}) {
    for (double p : {1.0, 0.97, 0.8}) {
      for (double eta : {1.0, 0.95, 0.7}) {
        const BusResult r = simulate_bus_exact({l, NoiseModel::uniform(p, eta), ErrorModel::kDep});
        EXPECT_NEAR(r.fidelity(), reference_fidelity(l, p, eta), 1e-12);
        EXPECT_TRUE(is_valid_state(r.end_state));
      }
    }
  }
}

TEST(Exact, DepEndStateIsBellDiagonal) {
  const BusResult r = simulate_bus_exact({6, NoiseModel::uniform(0.9, 0.9), ErrorModel::kDep});
  EXPECT_LT(max_abs_diff(twirl(r.end_state), r.end_state), 1e-13);
}

TEST(Exact, CpeTwoQubitStateHasProductComponent) {
  // At l=2 a missed CPHASE leaves H|0> (x) |0> after the final layer.
  const double p = 0.8;
  const BusResult r = simulate_bus_exact({2, NoiseModel::uniform(p, 1.0), ErrorModel::kCpe});
  Eigen::VectorXcd plus0 = Eigen::VectorXcd::Zero(4);
  plus0(0) = plus0(2) = 1.0 / std::sqrt(2.0);
  const ComplexMatrix expect = p * DensityMatrix::bell({0, 0}).mat() +
                               (1 - p) * DensityMatrix::from_pure(plus0).mat();
  EXPECT_LT(oracle::max_abs(r.end_state.mat() - expect), 1e-14);
}

TEST(Exact, CpeFidelityAndTwirlMatchDep) {
  for (int l : {4, 6}) {
    const NoiseModel nm = NoiseModel::uniform(0.93, 0.9);
    const BusResult dep = simulate_bus_exact({l, nm, ErrorModel::kDep});
    const BusResult cpe = simulate_bus_exact({l, nm, ErrorModel::kCpe});
    EXPECT_NEAR(cpe.fidelity(), dep.fidelity(), 1e-13);
    EXPECT_LT(max_abs_diff(twirl(cpe.end_state), dep.end_state), 1e-13);
    EXPECT_GT(max_abs_diff(cpe.end_state, dep.end_state), 1e-3);  // not Bell diagonal itself
  }
}

TEST(Exact, GaussianCpeMatchesEquivalentDiscreteLaw) {
  NoiseModel g = NoiseModel::uniform(1.0, 0.95);
  g.phase = GaussianPhase{0.3};
  NoiseModel d = g;
  d.phase = DiscretePhase{equivalent_discrete_p(GaussianPhase{0.3})};
  EXPECT_LT(max_abs_diff(simulate_bus_exact({4, g, ErrorModel::kCpe}).end_state,
                         simulate_bus_exact({4, d, ErrorModel::kCpe}).end_state),
            1e-12);
}

TEST(Exact, LeakageLosesWeightAndReducesToCpe) {
  NoiseModel nm = NoiseModel::uniform(0.99, 0.99, 0.01);
  const BusResult leak = simulate_bus_exact({4, nm, ErrorModel::kCpeLeakage});
  EXPECT_LT(leak.trace_weight(), 1.0);
  EXPECT_GT(leak.fidelity_renormalized(), leak.fidelity());
  nm.gamma = 0.0;
  EXPECT_LT(max_abs_diff(simulate_bus_exact({4, nm, ErrorModel::kCpeLeakage}).end_state,
                         simulate_bus_exact({4, nm, ErrorModel::kCpe}).end_state),
            1e-15);
}

TEST(Exact, RejectsBadSpecs) {
  EXPECT_THROW(simulate_bus_exact({5, NoiseModel::ideal(), ErrorModel::kDep}), std::invalid_argument);
  EXPECT_THROW(simulate_bus_exact({12, NoiseModel::ideal(), ErrorModel::kDep}), std::invalid_argument);
  SimOptions small{4};
  EXPECT_THROW(simulate_bus_exact({6, NoiseModel::ideal(), ErrorModel::kDep}, small),
               std::invalid_argument);
}

TEST(Enumerate, BranchesSumToMergedState) {
  const BusSpec spec{6, NoiseModel::uniform(0.95, 0.9), ErrorModel::kCpe};
  const auto branches = enumerate_bus_outcomes(spec);
  ASSERT_EQ(branches.size(), 16u);
  ComplexMatrix acc = ComplexMatrix::Zero(4, 4);
  double total = 0;
  for (const OutcomeBranch& b : branches) {
    EXPECT_TRUE(b.record.consistent());
    total += b.probability;
    if (b.end_state) acc += b.probability * b.end_state->mat();
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_LT(oracle::max_abs(acc - simulate_bus_exact(spec).end_state.mat()), 1e-12);
}

TEST(Enumerate, IdealBranchesAreIndividuallyCorrected) {
  for (const OutcomeBranch& b :
       enumerate_bus_outcomes({8, NoiseModel::ideal(), ErrorModel::kDep})) {
    ASSERT_TRUE(b.end_state.has_value());
    EXPECT_NEAR(b.probability, 1.0 / 64, 1e-12);
    EXPECT_NEAR(fidelity_with_bell(*b.end_state, {0, 0}), 1.0, 1e-10);
  }
}

TEST(Sampled, ConvergesToExact) {
  const BusSpec spec{4, NoiseModel::uniform(0.95, 0.9), ErrorModel::kDep};
  const DensityMatrix mc = simulate_bus_sampled(spec, 4000, 42);
  EXPECT_NEAR(fidelity_with_bell(mc, {0, 0}), simulate_bus_exact(spec).fidelity(), 0.02);
  EXPECT_LT(max_abs_diff(mc, simulate_bus_sampled(spec, 4000, 42)), 1e-15);  // seeded
}

TEST(FastPath, RecursionMatchesFourQubitJoint) {
  const BellDiagonal left{0.7, 0.15, 0.1, 0.05};
  const BellDiagonal right{0.6, 0.05, 0.25, 0.1};
  const NoiseModel nm = NoiseModel::uniform(0.9, 0.85);
  for (ErrorModel m : {ErrorModel::kDep, ErrorModel::kCpe}) {
    EXPECT_LT(max_abs_diff(swap_recursion_step(left, right, nm, m),
                           swap_joint_exact(left, right, nm, m)),
              1e-13);
  }
}

TEST(FastPath, MatchesExactSimulation) {
  for (ErrorModel m : {ErrorModel::kDep, ErrorModel::kCpe}) {
    for (int l : {2, 4, 6, 8}) {
      const NoiseModel nm = NoiseModel::uniform(0.95, 0.92);
      EXPECT_LT(max_abs_diff(fast_path_pair(l, nm, m), simulate_bus_exact({l, nm, m}).bell()), 1e-12);
    }
  }
}

TEST(FastPath, LeakageUsesExactJoint) {
  NoiseModel nm = NoiseModel::uniform(0.999, 0.999, 1e-3);
  nm.leakage = LeakageConvention::kOperatorExponent;
  const BellDiagonal fp = fast_path_pair(6, nm, ErrorModel::kCpeLeakage);
  EXPECT_LT(fp.total(), 1.0);
  const double exact = simulate_bus_exact({6, nm, ErrorModel::kCpeLeakage}).fidelity();
  EXPECT_NEAR(fp.fidelity(), exact, 1e-3);  // twirled between joints
}

TEST(ClosedForm, QubitCountConventionMatchesReference) {
  for (int l : {2, 4, 10, 30}) {
    EXPECT_NEAR(fidelity_closed_form(l, 0.98, 0.93, 0.0, ExponentConvention::kQubitCount),
                reference_fidelity(l, 0.98, 0.93), 1e-14);
    const BellDiagonal bd = bus_pair_closed_form(l, 0.98, 0.93, ExponentConvention::kQubitCount);
    EXPECT_NEAR(bd.total(), 1.0, 1e-14);
    EXPECT_NEAR(bd.b, bd.c, 0.0);
    EXPECT_NEAR(bd.a, reference_fidelity(l, 0.98, 0.93), 1e-14);
  }
}

TEST(ClosedForm, PrintedConventionAtLengthTwentyFive) {
  const double f = fidelity_closed_form(25, 0.995, 0.99, 0.0);
  EXPECT_NEAR(f, 0.734, 1e-3);
  EXPECT_NEAR(f, 0.74, 0.01);
  const BellDiagonal bd = bus_pair_closed_form(25, 0.995, 0.99, ExponentConvention::kPrinted);
  EXPECT_NEAR(bd.a, f, 1e-15);
}

TEST(ClosedForm, LeakageFormReducesAtZeroGamma) {
  // The gamma>0 expression at gamma->0 is the depolarizing form.
  const double tiny = fidelity_closed_form(8, 0.99, 0.98, 1e-12);
  EXPECT_NEAR(tiny, fidelity_closed_form(8, 0.99, 0.98, 0.0), 1e-10);
}

TEST(BellDiagonal, Helpers) {
  const BellDiagonal w = BellDiagonal::werner(0.7);
  EXPECT_NEAR(w.b, 0.1, 1e-15);
  EXPECT_NEAR(w.total(), 1.0, 1e-15);
  const BellDiagonal x{0.6, 0.3, 0.05, 0.05};
  EXPECT_LT(max_abs_diff(BellDiagonal::from_state(x.to_state()), x), 1e-15);
  EXPECT_NEAR(x.werner_twirled().b, 0.4 / 3, 1e-15);
  EXPECT_THROW((BellDiagonal{0.5, 0.6, 0, 0}).validate(), std::invalid_argument);
  EXPECT_THROW((BellDiagonal{1.1, -0.1, 0, 0}).validate(), std::invalid_argument);
}

TEST(SwapChain, MatchesDerivedFidelity) {
  // Each of the 3l depolarizing CPHASEs hits the travelling qubit, and any
  // failure leaves the reference half maximally mixed with it.
  for (double p : {1.0, 0.99, 0.9}) {
    for (int l = 1; l <= 5; ++l) {
      const double q = std::pow(p, 3 * l);
      const SwapChainResult r = swap_chain_baseline(l, p);
      EXPECT_NEAR(r.fidelity, q + (1 - q) / 4, 1e-12);
      EXPECT_NEAR(r.bound, std::pow(p, 2 * l), 1e-15);
    }
  }
  EXPECT_TRUE(swap_chain_baseline(3, 0.99).below_bound);
  EXPECT_FALSE(swap_chain_baseline(3, 0.9).below_bound);
  EXPECT_THROW(swap_chain_baseline(10, 0.9), std::invalid_argument);
}

TEST(Timing, ProtocolTimesAndCrossover) {
  const TimeModel unit{};
  for (int l : {2, 10, 100}) {
    const ProtocolTimes t = protocol_times(l, unit);
    EXPECT_DOUBLE_EQ(t.t_entswap, 7.0);
    EXPECT_DOUBLE_EQ(t.t_swap, 2.0 * l);
  }
  EXPECT_EQ(crossover_length(unit), 4);
  const TimeModel slow_meas{1.0, 1.0, 20.0};
  const int c = crossover_length(slow_meas);
  EXPECT_GT(protocol_times(c, slow_meas).t_swap, protocol_times(c, slow_meas).t_entswap);
  EXPECT_LE(protocol_times(c - 1, slow_meas).t_swap, protocol_times(c, slow_meas).t_entswap);
  EXPECT_EQ(crossover_length(TimeModel{1.0, 100.0, 1.0}), 2);
  EXPECT_THROW(protocol_times(4, TimeModel{0.0, 1.0, 1.0}), std::invalid_argument);
}

}  // namespace
