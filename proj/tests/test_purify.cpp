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

#include <numbers>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "qbus/purify.hpp"

namespace {

using namespace qbus;

PurifyConfig ideal_config(int rounds) {
  PurifyConfig c;
  c.rounds = rounds;
  return c;
}

PurifyConfig noisy_config(int rounds, double p = 0.995, double eta = 0.99) {
  PurifyConfig c;
  c.rounds = rounds;
  c.noisy_ops = true;
  c.noise = NoiseModel::uniform(p, eta);
  return c;
}

// One ideal round written out on full 16x16 matrices: all four measurement
// outcomes are projected separately and the coinciding ones are summed.
std::pair<BellDiagonal, double> brute_force_round(const BellDiagonal& in) {
  const ComplexMatrix one = in.to_state().mat();
  ComplexMatrix rho = kron(one, one);  // A1 B1 A2 B2
  const ComplexMatrix u = oracle::embed(rotation_x(std::numbers::pi / 2), {0}, 4) *
                          oracle::embed(rotation_x(std::numbers::pi / 2), {2}, 4) *
                          oracle::embed(rotation_x(-std::numbers::pi / 2), {1}, 4) *
                          oracle::embed(rotation_x(-std::numbers::pi / 2), {3}, 4);
  const ComplexMatrix c = oracle::embed(cnot(), {1, 3}, 4) * oracle::embed(cnot(), {0, 2}, 4);
  rho = c * u * rho * u.adjoint() * c.adjoint();
  ComplexMatrix kept = ComplexMatrix::Zero(4, 4);
  for (int ma : {0, 1}) {
    for (int mb : {0, 1}) {
      if (ma != mb) continue;
      ComplexMatrix proj = ComplexMatrix::Zero(16, 16);
      for (int i = 0; i < 16; ++i) {
        if (oracle::bit_at(i, 4, 2) == ma && oracle::bit_at(i, 4, 3) == mb) proj(i, i) = 1.0;
      }
      kept += oracle::partial_trace(proj * rho * proj, {0, 1}, 4);
    }
  }
  const double ps = kept.trace().real();
  return {BellDiagonal::from_state(DensityMatrix(ComplexMatrix(kept / ps))), ps};
}

TEST(Deutsch, PerfectPairIsFixedPoint) {
  const DeutschResult r = deutsch_round(BellDiagonal{}, ideal_config(1));
  EXPECT_LT(max_abs_diff(r.kept, BellDiagonal{}), 1e-14);
  EXPECT_NEAR(r.p_success, 1.0, 1e-14);
}

TEST(Deutsch, MatchesBruteForceBranches) {
  for (const BellDiagonal& in : {BellDiagonal::werner(0.74), BellDiagonal{0.6, 0.25, 0.1, 0.05},
                                 BellDiagonal{0.5, 0.1, 0.1, 0.3}}) {
    const DeutschResult r = deutsch_round(in, ideal_config(1));
    const auto [kept, ps] = brute_force_round(in);
    EXPECT_LT(max_abs_diff(r.kept, kept), 1e-12);
    EXPECT_NEAR(r.p_success, ps, 1e-12);
  }
}

TEST(Deutsch, IdealRoundImprovesWernerAboveHalf) {
  for (double a = 0.55; a < 0.96; a += 0.1) {
    const DeutschResult r = deutsch_round(BellDiagonal::werner(a), ideal_config(1));
    EXPECT_GT(r.kept.a, a) << a;
    EXPECT_NEAR(r.kept.total(), 1.0, 1e-10);
    r.kept.validate();
  }
}

TEST(Deutsch, BelowThresholdRunsWithoutError) {
  const DeutschResult r = deutsch_round(BellDiagonal::werner(0.45), ideal_config(1));
  EXPECT_GT(r.p_success, 0.0);
  EXPECT_LE(r.kept.a, 0.45 + 1e-12);  // no improvement below one half
}

TEST(Deutsch, NoisyOpsCostFidelity) {
  const BellDiagonal in = BellDiagonal::werner(0.9);
  EXPECT_LT(deutsch_round(in, noisy_config(1)).kept.a, deutsch_round(in, ideal_config(1)).kept.a);
  PurifyConfig cpe = noisy_config(1);
  cpe.local_error = ErrorModel::kCpe;
  deutsch_round(in, cpe).kept.validate();
}

TEST(Deutsch, RejectsInvalidInput) {
  EXPECT_THROW(deutsch_round(BellDiagonal{0.9, 0.2, -0.1, 0.0}, ideal_config(1)), std::invalid_argument);
}

TEST(PurifyToTarget, TargetBelowInputUsesNoRounds) {
  const BellDiagonal in = BellDiagonal::werner(0.8);
  const PurifyOutcome o = purify_to_target(in, ideal_config(6), 0.7);
  EXPECT_EQ(o.rounds_used, 0);
  EXPECT_EQ(o.pairs_consumed, 1u);
  EXPECT_EQ(max_abs_diff(o.state, in), 0.0);
  EXPECT_EQ(o.status, PurifyStatus::kReached);
}

TEST(PurifyToTarget, StopsAtTargetOrBudget) {
  const BellDiagonal in = BellDiagonal::werner(0.74);
  const PurifyOutcome reached = purify_to_target(in, ideal_config(10), 0.95);
  EXPECT_EQ(reached.status, PurifyStatus::kReached);
  EXPECT_GE(reached.state.a, 0.95);
  EXPECT_EQ(reached.pairs_consumed, std::uint64_t{1} << reached.rounds_used);

  const PurifyOutcome short_budget = purify_to_target(in, ideal_config(1), 0.99);
  EXPECT_EQ(short_budget.status, PurifyStatus::kBudgetExhausted);
  EXPECT_EQ(short_budget.rounds_used, 1);
  EXPECT_GT(short_budget.state.a, 0.74);

  EXPECT_THROW(purify_to_target(in, ideal_config(3), 1.0), std::invalid_argument);
}

TEST(PurifyRounds, SixRoundsConsumeSixtyFourPairs) {
  const PurifyOutcome o = purify_rounds(BellDiagonal::werner(0.8), ideal_config(6));
  EXPECT_EQ(o.pairs_consumed, 64u);
  ASSERT_EQ(o.success_prob_per_round.size(), 6u);
  double expected = 1;
  for (double ps : o.success_prob_per_round) {
    EXPECT_GT(ps, 0.0);
    EXPECT_LE(ps, 1.0 + 1e-12);
    expected *= 2 / ps;
  }
  EXPECT_NEAR(o.expected_pairs, expected, 1e-9);
  EXPECT_GE(o.expected_pairs, 64.0);
}

TEST(PurifyRounds, MonotoneForIdealOps) {
  double prev = 0.7;
  for (int k = 1; k <= 6; ++k) {
    const double f = purify_rounds(BellDiagonal::werner(0.7), ideal_config(k)).state.a;
    EXPECT_GT(f, prev);
    prev = f;
  }
}

TEST(PurifyRounds, ExpectedTimeAddsRoundDurations) {
  PurifyConfig c = ideal_config(2);
  c.time_model = TimeModel{1.0, 2.0, 3.0};
  const PurifyOutcome o = purify_rounds(BellDiagonal::werner(0.8), c);
  const double expect = 6.0 / o.success_prob_per_round[0] + 6.0 / o.success_prob_per_round[1];
  EXPECT_NEAR(o.expected_time, expect, 1e-12);
}

TEST(PurifyRounds, LengthTwentyFivePair) {
  const BellDiagonal in = bus_pair_closed_form(25, 0.995, 0.99, ExponentConvention::kPrinted);
  EXPECT_NEAR(in.a, 0.734, 1e-3);
  const double noisy = purify_rounds(in, noisy_config(6)).state.a;
  const double ideal = purify_rounds(in, ideal_config(6)).state.a;
  EXPECT_NEAR(noisy, 0.985, 0.01);
  EXPECT_GT(ideal, noisy);
  EXPECT_GE(ideal, 0.985);
}

TEST(Config, BoundsAreEnforced) {
  PurifyConfig c;
  c.rounds = kMaxPurifyRounds + 1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.rounds = 1;
  c.nesting_depth = -1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Nested, SingleSegmentIsDirectPair) {
  PurifyConfig c = noisy_config(3);
  const PurifyOutcome o = nested_repeater(12, 1, c);
  EXPECT_LT(max_abs_diff(o.state, fast_path_pair(12, c.noise, ErrorModel::kDep)), 1e-15);
  EXPECT_EQ(o.rounds_used, 0);
}

TEST(Nested, UnpurifiedSegmentsReproduceFlatRecursion) {
  PurifyConfig c = noisy_config(0);
  for (int segments : {2, 4}) {
    const PurifyOutcome o = nested_repeater(24, segments, c);
    EXPECT_LT(max_abs_diff(o.state, fast_path_pair(24, c.noise, ErrorModel::kDep)), 1e-12);
    EXPECT_EQ(o.pairs_consumed, static_cast<std::uint64_t>(segments));
  }
}

TEST(Nested, OneRoundPerStageBeatsDirectPair) {
  const PurifyConfig c = noisy_config(1);
  const PurifyOutcome o = nested_repeater(24, 2, c);
  EXPECT_GT(o.state.a, fidelity_closed_form(24, 0.995, 0.99, 0.0, ExponentConvention::kQubitCount));
  EXPECT_EQ(o.rounds_used, 1);
  EXPECT_EQ(o.pairs_consumed, 4u);
  const TimeModel tm{};
  EXPECT_NEAR(o.expected_time,
              7.0 + joint_time(tm) + purify_round_time(tm) / o.success_prob_per_round[0], 1e-12);
}

TEST(Nested, RejectsInconsistentSegmentation) {
  const PurifyConfig c = ideal_config(0);
  EXPECT_THROW(nested_repeater(24, 3, c), std::invalid_argument);  // not a power of two
  EXPECT_THROW(nested_repeater(12, 4, c), std::invalid_argument);  // odd segment length
  EXPECT_THROW(nested_repeater(10, 4, c), std::invalid_argument);  // does not divide
  PurifyConfig deep = c;
  deep.nesting_depth = 3;
  EXPECT_THROW(nested_repeater(24, 2, deep), std::invalid_argument);
  deep.nesting_depth = 1;
  EXPECT_NO_THROW(nested_repeater(24, 2, deep));
}

}  // namespace
