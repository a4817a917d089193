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
#include <map>
#include <memory>

#include <gtest/gtest.h>

#include "genomask/mechanism.h"
#include "genomask/release_rule.h"
#include "genomask/sequence_model.h"
#include "oracles.h"

namespace genomask {
namespace {

struct Instance {
  std::unique_ptr<SequenceModel> model;
  std::vector<std::size_t> k;
  std::vector<std::size_t> order;
};

Instance RandomInstance(Rng& rng, int family, std::size_t max_n) {
  Instance inst;
  const std::size_t n = 2 + UniformIndex(rng, max_n - 1);
  switch (family % 3) {
    case 0:
      inst.model = std::make_unique<ExplicitJointModel>(
          n, 2, oracle::RandomTable(std::size_t{1} << n, rng, 0.2));
      break;
    case 1: {
      const double a = Uniform01(rng);
      const double b = Uniform01(rng);
      const double c = Uniform01(rng);
      inst.model = std::make_unique<MarkovChainModel>(
          n, std::vector<double>{a, 1.0 - a},
          std::vector<double>{b, 1.0 - b, 1.0 - c, c});
      break;
    }
    default:
      inst.model = std::make_unique<HmmModel>(RandomPanel(1 + UniformIndex(rng, 3), n, 2, rng),
                                              0.02 + 0.4 * Uniform01(rng),
                                              0.2 * Uniform01(rng));
  }
  const std::vector<std::size_t> perm = oracle::RandomPermutation(n, rng);
  const std::size_t k_size = 1 + UniformIndex(rng, 2);
  inst.k.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k_size));
  std::sort(inst.k.begin(), inst.k.end());
  inst.order = oracle::RandomPermutation(n, rng);
  return inst;
}

TEST(ReleaseRule, TwoAssignmentExample) {
  PredictiveTable table(2, 2);
  table.prob(0, 0) = 0.9;
  table.prob(0, 1) = 0.1;
  table.prob(1, 0) = 0.1;
  table.prob(1, 1) = 0.9;
  table.valid = {1, 1};
  EXPECT_NEAR(ErasureProbability(table, 0, 0), 1.0 - 0.1 / 0.9, 1e-15);
  EXPECT_NEAR(ErasureProbability(table, 0, 1), 0.0, 1e-15);
  EXPECT_NEAR(table.ReleaseMass(), 0.2, 1e-15);
}

TEST(ReleaseRule, InvalidRowsAreIgnoredAndSensitiveErased) {
  PredictiveTable table(2, 2);
  table.prob(0, 0) = 0.3;
  table.prob(0, 1) = 0.7;
  table.valid = {1, 0};
  EXPECT_DOUBLE_EQ(ReleaseProbability(table, 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(ReleaseProbability(table, 0, 1), 0.0);
  table.sensitive = true;
  EXPECT_DOUBLE_EQ(ReleaseProbability(table, 0, 0), 0.0);
}

TEST(Mechanism, IndependentModelReleasesEverythingOutsideK) {
  // Two independent fair bits per side.
  ExplicitJointModel model(3, 2, std::vector<double>(8, 0.125));
  const IndexSet k({1}, 3);
  Rng rng = StreamFor(1, 0);
  for (int r = 0; r < 50; ++r) {
    const Sequence x = model.Sample(rng);
    const MaskResult res = MaskSequence(model, x, k, Ordering::Linear(3), rng);
    EXPECT_EQ(res.masked.symbols, (Sequence{x[0], kErased, x[2]}));
  }
  EXPECT_NEAR(AchievableRateExact(model, k, Ordering::Linear(3)), 2.0 / 3.0, 1e-12);
}

TEST(Mechanism, MarkovChainReleasesAfterFirstRelease) {
  // Once a symbol after K is released, later positions carry no further
  // information about x_1 and go out unmasked.
  const auto chain = MarkovChainModel::Symmetric(5, 2, 0.8);
  const IndexSet k({0}, 5);
  const ExactMechanism mech(chain, k, Ordering::Linear(5));
  for (std::size_t j = 0; j < mech.output().num_outputs(); ++j) {
    const Sequence& y = mech.output().output(j);
    bool seen = false;
    for (std::size_t i = 1; i < y.size(); ++i) {
      if (seen) EXPECT_NE(y[i], kErased) << FormatSequence(y);
      seen = seen || y[i] != kErased;
    }
  }
}

TEST(Mechanism, AllPositionsSensitive) {
  const auto chain = MarkovChainModel::Symmetric(3, 2, 0.7);
  const IndexSet k({0, 1, 2}, 3);
  const OutputJoint joint = ExactOutputDistribution(chain, k, Ordering::Linear(3));
  ASSERT_EQ(joint.num_outputs(), 1u);
  EXPECT_EQ(joint.output(0), (Sequence{kErased, kErased, kErased}));
  EXPECT_DOUBLE_EQ(joint.Rate(), 0.0);
}

TEST(Mechanism, ExactJointMatchesReference) {
  Rng rng = StreamFor(2026, 0);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance inst = RandomInstance(rng, trial, 6);
    const std::size_t n = inst.model->length();
    const ExactMechanism mech(*inst.model, IndexSet(inst.k, n), Ordering(inst.order));
    const oracle::Table table = oracle::Tabulate(*inst.model);
    const oracle::Reference ref = oracle::RunReference(table, inst.k, inst.order);

    double tv = 0.0;
    for (const auto& [key, p] : ref.joint) {
      const std::size_t idx = mech.output().find(key.second);
      const double q = idx == mech.output().num_outputs() ? 0.0 : mech.output().prob(key.first, idx);
      tv += std::abs(p - q);
    }
    EXPECT_NEAR(mech.output().TotalMass(), 1.0, 1e-10);
    EXPECT_LT(0.5 * tv + std::abs(mech.output().TotalMass() - 1.0), 1e-9) << "trial " << trial;

    const auto [info, dev] = oracle::Leakage(ref.joint, oracle::NumCodes(inst.k, table.arity));
    EXPECT_LE(info, 1e-10);
    EXPECT_LE(dev, 1e-10);
    const PrivacyReport report = VerifyPrivacy(mech.output());
    EXPECT_LE(report.mutual_information, 1e-10);
    EXPECT_LE(report.max_deviation, 1e-10);

    EXPECT_NEAR(mech.achievable_rate(), ref.expression_rate, 1e-9) << "trial " << trial;
    EXPECT_NEAR(mech.expression_rate(), ref.expression_rate, 1e-9);
    EXPECT_NEAR(ref.output_rate, ref.expression_rate, 1e-9);
  }
}

TEST(Mechanism, PredictiveTablesMatchReference) {
  Rng rng = StreamFor(77, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = RandomInstance(rng, trial, 5);
    const std::size_t n = inst.model->length();
    const ExactMechanism mech(*inst.model, IndexSet(inst.k, n), Ordering(inst.order));
    const oracle::Reference ref =
        oracle::RunReference(oracle::Tabulate(*inst.model), inst.k, inst.order);
    for (const auto& [partial, expected] : ref.tables) {
      const PredictiveTable* table = mech.TableAt(partial);
      ASSERT_NE(table, nullptr) << FormatSequence(partial);
      for (std::size_t u = 0; u < expected.u_mass.size(); ++u) {
        if (expected.u_mass[u] <= 0.0) continue;
        for (Symbol a = 0; a < 2; ++a) {
          EXPECT_NEAR(table->prob(u, a), expected.cond[u * 2 + static_cast<std::size_t>(a)],
                      1e-10);
        }
      }
    }
  }
}

TEST(Mechanism, LeakyBaselineIsDetected) {
  // Releasing every non-sensitive symbol leaks through the correlations.
  const auto chain = MarkovChainModel::Symmetric(3, 2, 0.9);
  const IndexSet k({1}, 3);
  const OutputJoint joint = JointFromKernel(chain, k, [](std::span<const Symbol> x) {
    Sequence y(x.begin(), x.end());
    y[1] = kErased;
    return std::vector<std::pair<Sequence, double>>{{y, 1.0}};
  });
  const PrivacyReport report = VerifyPrivacy(joint);
  EXPECT_GT(report.mutual_information, 0.1);
  EXPECT_GT(report.max_deviation, 0.1);
}

TEST(Mechanism, KernelRowsAreFaithfulDistributions) {
  Rng rng = StreamFor(31, 0);
  for (int trial = 0; trial < 15; ++trial) {
    const Instance inst = RandomInstance(rng, trial, 5);
    const std::size_t n = inst.model->length();
    const ExactMechanism mech(*inst.model, IndexSet(inst.k, n), Ordering(inst.order));
    const oracle::Table table = oracle::Tabulate(*inst.model);
    for (const Sequence& x : table.xs) {
      double total = 0.0;
      for (const auto& [y, w] : mech.Kernel(x)) {
        total += w;
        for (std::size_t i = 0; i < n; ++i) {
          EXPECT_TRUE(y[i] == kErased || y[i] == x[i]);
        }
        for (std::size_t i : inst.k) EXPECT_EQ(y[i], kErased);
      }
      EXPECT_NEAR(total, 1.0, 1e-10);
    }
  }
}

TEST(Mechanism, SampledOutputsFollowKernel) {
  Rng panel_rng = StreamFor(5, 1);
  const HmmModel hmm(RandomPanel(3, 5, 2, panel_rng), 0.2, 0.05);
  const IndexSet k({2}, 5);
  const Ordering order({4, 0, 2, 1, 3});
  const ExactMechanism mech(hmm, k, order);
  const Sequence x = {0, 1, 1, 0, 1};
  std::map<Sequence, double> expected;
  for (const auto& [y, w] : mech.Kernel(x)) expected[y] = w;

  std::map<Sequence, double> counts;
  const int draws = 100000;
  Rng rng = StreamFor(5, 2);
  for (int r = 0; r < draws; ++r) {
    counts[MaskSequence(mech.oracle(), x, order, rng).masked.symbols] += 1.0;
  }
  for (const auto& [y, c] : counts) EXPECT_TRUE(expected.count(y)) << FormatSequence(y);
  for (const auto& [y, w] : expected) {
    const double sigma = std::sqrt(draws * w * (1.0 - w));
    EXPECT_LT(std::abs(counts[y] - draws * w), 5.0 * sigma + 1.0) << FormatSequence(y);
  }
}

TEST(Mechanism, MonteCarloRateAgreesWithExact) {
  Rng rng = StreamFor(9, 0);
  for (int trial = 0; trial < 3; ++trial) {
    const Instance inst = RandomInstance(rng, trial, 6);
    const std::size_t n = inst.model->length();
    const IndexSet k(inst.k, n);
    const Ordering order(inst.order);
    const double exact = AchievableRateExact(*inst.model, k, order);
    const Estimate mc = AchievableRateMc(*inst.model, k, order, 20000, 100 + trial);
    EXPECT_LT(std::abs(mc.value - exact), 4.0 * mc.stderr + 1e-12) << "trial " << trial;
  }
}

TEST(Mechanism, MaskingIsDeterministicPerSeed) {
  const auto chain = MarkovChainModel::Symmetric(6, 2, 0.85);
  const IndexSet k({2}, 6);
  const Sequence x = {0, 0, 1, 1, 1, 0};
  Rng a = StreamFor(4, 3);
  Rng b = StreamFor(4, 3);
  const MaskResult ra = MaskSequence(chain, x, k, Ordering::Linear(6), a);
  const MaskResult rb = MaskSequence(chain, x, k, Ordering::Linear(6), b);
  EXPECT_EQ(ra.masked.symbols, rb.masked.symbols);
  EXPECT_EQ(TranscriptToJsonLines(ra.transcript), TranscriptToJsonLines(rb.transcript));
}

TEST(Mechanism, OutOfSupportInputIsFlaggedAndMasked) {
  ExplicitJointModel model(2, 2, {0.5, 0.0, 0.0, 0.5});
  Rng rng = StreamFor(1, 1);
  const Sequence x = {0, 1};
  const MaskResult res = MaskSequence(model, x, IndexSet({0}, 2), Ordering::Linear(2), rng);
  EXPECT_FALSE(res.input_in_support);
  EXPECT_EQ(res.masked.symbols[0], kErased);
  EXPECT_TRUE(res.masked.IsFaithfulTo(x));
}

}  // namespace
}  // namespace genomask
