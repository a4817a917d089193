// Copyright 2026 The Genomask Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <cmath>

#include <gtest/gtest.h>

#include "genomask/baselines.h"
#include "oracles.h"

namespace genomask {
namespace {

using Mode = WindowPolicy::Mode;

TEST(Window, PrefixAndRadiusErasures) {
  const IndexSet k({2}, 5);
  EXPECT_EQ(WindowErasures(5, k, {Mode::kPrefix, 2}), (std::vector<char>{1, 1, 0, 0, 0}));
  EXPECT_EQ(WindowErasures(5, k, {Mode::kRadius, 1}), (std::vector<char>{0, 1, 1, 1, 0}));
  EXPECT_EQ(WindowErasures(5, IndexSet({0, 4}, 5), {Mode::kRadius, 0}),
            (std::vector<char>{1, 0, 0, 0, 1}));
  const MaskedSequence y = WindowMask(Sequence{1, 0, 1, 1, 0}, k, {Mode::kPrefix, 3});
  EXPECT_EQ(y.ToString(), "***10");
  EXPECT_THROW(WindowErasures(5, k, {Mode::kPrefix, 6}), Error);
}

TEST(WindowLeakage, ExactIsMonotoneWithEndpoints) {
  Rng rng = StreamFor(51, 0);
  const HmmModel hmm(RandomPanel(3, 7, 2, rng), 0.15, 0.05);
  const IndexSet k({0}, 7);
  double previous = 2.0;
  for (std::size_t omega = 0; omega <= 7; ++omega) {
    const LeakageResult r = WindowLeakageExact(hmm, k, {Mode::kPrefix, omega});
    EXPECT_LE(r.normalized, previous + 1e-12);
    previous = r.normalized;
    if (omega == 0) EXPECT_NEAR(r.normalized, 1.0, 1e-12);
  }
  EXPECT_NEAR(previous, 0.0, 1e-12);
}

TEST(WindowLeakage, ExactMatchesTableComputation) {
  const auto chain = MarkovChainModel::Symmetric(4, 2, 0.8);
  const IndexSet k({0}, 4);
  // With positions 0..1 erased, x_3 and x_4 reveal x_1 only through x_3.
  // I(X_1; X_3) for two steps of a 0.8 chain: flip probability 0.32.
  const LeakageResult r = WindowLeakageExact(chain, k, {Mode::kPrefix, 2});
  EXPECT_NEAR(r.entropy_bits, 1.0, 1e-12);
  EXPECT_NEAR(r.leakage_bits, 1.0 - (-(0.32 * std::log2(0.32) + 0.68 * std::log2(0.68))),
              1e-12);
}

TEST(WindowLeakage, PosteriorMatchesEnumeration) {
  Rng rng = StreamFor(52, 0);
  const HmmModel hmm(RandomPanel(3, 6, 2, rng), 0.2, 0.08);
  const IndexSet k({1, 4}, 6);
  const oracle::Table t = oracle::TabulateHmm(hmm);
  const std::vector<std::size_t> k_list = {1, 4};
  const std::vector<char> erased = {1, 1, 0, 1, 0, 0};
  const Sequence x = hmm.Sample(rng);
  const std::vector<double> got = SensitivePosterior(hmm, k, x, erased);
  std::vector<double> want(4, 0.0);
  double total = 0.0;
  for (std::size_t s = 0; s < t.xs.size(); ++s) {
    bool match = true;
    for (std::size_t i = 0; i < 6; ++i) match = match && (erased[i] || t.xs[s][i] == x[i]);
    if (!match) continue;
    want[oracle::Code(t.xs[s], k_list, t.arity)] += t.p[s];
    total += t.p[s];
  }
  for (std::size_t u = 0; u < 4; ++u) EXPECT_NEAR(got[u], want[u] / total, 1e-12);
}

TEST(WindowLeakage, MonteCarloAgreesWithExact) {
  Rng rng = StreamFor(53, 0);
  const HmmModel hmm(RandomPanel(4, 10, 2, rng), 0.1, 0.02);
  const IndexSet k({0}, 10);
  for (std::size_t omega : {1, 3, 5}) {
    const LeakageResult exact = WindowLeakageExact(hmm, k, {Mode::kPrefix, omega});
    const LeakageResult mc = WindowLeakageMc(hmm, k, {Mode::kPrefix, omega}, 20000, 7);
    EXPECT_NEAR(mc.entropy_bits, exact.entropy_bits, 1e-12);
    EXPECT_LT(std::abs(mc.normalized - exact.normalized), 4.0 * mc.stderr + 1e-12)
        << "omega " << omega;
  }
}

TEST(WindowLeakage, UninformativeEmissionsLeakNothing) {
  Rng rng = StreamFor(54, 0);
  const HmmModel hmm(RandomPanel(3, 8, 2, rng), 0.1, 0.5);
  const LeakageResult r = WindowLeakageExact(hmm, IndexSet({0}, 8), {Mode::kPrefix, 1});
  EXPECT_NEAR(r.leakage_bits, 0.0, 1e-12);
}

TEST(WindowLeakage, DeterministicSensitiveSymbolIsDegenerate) {
  const HmmModel hmm({{0, 1, 1, 0}}, 0.1, 0.0);
  try {
    WindowLeakageExact(hmm, IndexSet({0}, 4), {Mode::kPrefix, 1});
    FAIL() << "expected a degenerate error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerate);
  }
  EXPECT_THROW(WindowLeakageMc(hmm, IndexSet({0}, 4), {Mode::kPrefix, 1}, 10, 1), Error);
}

TEST(Divergence, SymmetricChainsClosedForm) {
  const auto p = MarkovChainModel::Symmetric(4, 2, 0.9);
  const auto q = MarkovChainModel::Symmetric(4, 2, 0.8);
  const double step = 0.9 * std::log2(0.9 / 0.8) + 0.1 * std::log2(0.1 / 0.2);
  EXPECT_NEAR(SequenceKlDivergence(p, q), 3.0 * step, 1e-12);
  EXPECT_NEAR(SequenceKlDivergence(p, p), 0.0, 1e-15);
}

TEST(Divergence, SupportViolationIsInfinite) {
  ExplicitJointModel p(2, 2, {0.25, 0.25, 0.25, 0.25});
  ExplicitJointModel q(2, 2, {0.5, 0.5, 0.0, 0.0});
  EXPECT_TRUE(std::isinf(SequenceKlDivergence(p, q)));
  EXPECT_TRUE(std::isfinite(SequenceKlDivergence(q, p)));
}

TEST(Divergence, MonteCarloAgreesWithExact) {
  Rng rng = StreamFor(55, 0);
  const auto panel = RandomPanel(3, 6, 2, rng);
  const HmmModel p(panel, 0.2, 0.05);
  const HmmModel q(panel, 0.3, 0.1);
  const double exact = SequenceKlDivergence(p, q);
  const Estimate mc = SequenceKlDivergenceMc(p, q, 20000, 3);
  EXPECT_LT(std::abs(mc.value - exact), 4.0 * mc.stderr);
}

TEST(Robustness, MatchedModelsLeakNothing) {
  const auto p = MarkovChainModel::Symmetric(4, 2, 0.85);
  const RobustnessResult r = RobustnessExperiment(p, p, IndexSet({1}, 4), Ordering::Linear(4));
  EXPECT_NEAR(r.leakage_bits, 0.0, 1e-10);
  EXPECT_NEAR(r.kl_bits, 0.0, 1e-12);
  EXPECT_TRUE(r.bound_holds);
}

TEST(Robustness, MismatchedChainStaysBelowDivergence) {
  const auto p = MarkovChainModel::Symmetric(4, 2, 0.9);
  const auto q = MarkovChainModel::Symmetric(4, 2, 0.8);
  const RobustnessResult r = RobustnessExperiment(p, q, IndexSet({0}, 4), Ordering::Linear(4));
  EXPECT_GT(r.leakage_bits, 1e-6);
  EXPECT_LE(r.leakage_bits, r.kl_bits + 1e-9);
  EXPECT_NEAR(r.leakage_under_q_bits, 0.0, 1e-10);
  EXPECT_TRUE(r.bound_holds);
}

TEST(Robustness, RandomHmmPairs) {
  Rng rng = StreamFor(56, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + UniformIndex(rng, 4);
    const auto panel = RandomPanel(3, n, 2, rng);
    const HmmModel p(panel, 0.05 + 0.3 * Uniform01(rng), 0.02 + 0.1 * Uniform01(rng));
    const HmmModel q(panel, 0.05 + 0.3 * Uniform01(rng), 0.02 + 0.1 * Uniform01(rng));
    const IndexSet k({UniformIndex(rng, n)}, n);
    const Ordering order(oracle::RandomPermutation(n, rng));
    const RobustnessResult r = RobustnessExperiment(p, q, k, order);
    EXPECT_LE(r.leakage_bits, r.kl_bits + 1e-9) << "trial " << trial;
    EXPECT_NEAR(r.leakage_under_q_bits, 0.0, 1e-10);
  }
}

}  // namespace
}  // namespace genomask
