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
#include "genomask/baselines.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "genomask/info_theory.h"

namespace genomask {
namespace {

// Below this H(X_K) the normalized leakage is undefined.
constexpr double kDegenerateEntropy = 1e-12;

double EntropyOf(const std::vector<double>& dist) {
  double h = 0.0;
  for (double p : dist) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

std::vector<char> WindowErasures(std::size_t n, const IndexSet& sensitive,
                                 const WindowPolicy& policy) {
  Require(policy.omega <= n, "window larger than the sequence");
  std::vector<char> erased(n, 0);
  if (policy.mode == WindowPolicy::Mode::kPrefix) {
    std::fill(erased.begin(), erased.begin() + static_cast<std::ptrdiff_t>(policy.omega), 1);
    return erased;
  }
  for (std::size_t k : sensitive.indices()) {
    const std::size_t lo = k >= policy.omega ? k - policy.omega : 0;
    const std::size_t hi = std::min(n - 1, k + policy.omega);
    for (std::size_t i = lo; i <= hi; ++i) erased[i] = 1;
  }
  return erased;
}

MaskedSequence WindowMask(std::span<const Symbol> x, const IndexSet& sensitive,
                          const WindowPolicy& policy) {
  const std::vector<char> erased = WindowErasures(x.size(), sensitive, policy);
  MaskedSequence y;
  y.symbols.assign(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (erased[i]) y.symbols[i] = kErased;
  }
  return y;
}

LeakageResult WindowLeakageExact(const SequenceModel& model,
                                 const IndexSet& sensitive,
                                 const WindowPolicy& policy) {
  const std::size_t n = model.length();
  const std::vector<char> erased = WindowErasures(n, sensitive, policy);
  const AssignmentSpace space = model.SensitiveSpace(sensitive);
  const Support support = model.EnumerateSupport();

  std::vector<double> marginal(space.size(), 0.0);
  std::map<Sequence, std::vector<double>> joint;
  std::vector<Symbol> u(sensitive.size());
  for (std::size_t s = 0; s < support.size(); ++s) {
    const Sequence& x = support.sequences[s];
    for (std::size_t j = 0; j < sensitive.size(); ++j) {
      u[j] = x[sensitive.indices()[j]];
    }
    const std::size_t code = space.Encode(u);
    Sequence key = x;
    for (std::size_t i = 0; i < n; ++i) {
      if (erased[i]) key[i] = kErased;
    }
    auto& row = joint[key];
    if (row.empty()) row.assign(space.size(), 0.0);
    row[code] += support.probs[s];
    marginal[code] += support.probs[s];
  }

  LeakageResult result{};
  result.entropy_bits = EntropyOf(marginal);
  if (result.entropy_bits < kDegenerateEntropy) {
    Fail(ErrorCode::kDegenerate, "sensitive symbols are deterministic");
  }
  double info = 0.0;
  for (const auto& [key, row] : joint) {
    double total = 0.0;
    for (double p : row) total += p;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c] > 0.0) info += row[c] * std::log2(row[c] / (total * marginal[c]));
    }
  }
  result.leakage_bits = std::max(0.0, info);
  result.normalized = result.leakage_bits / result.entropy_bits;
  result.stderr = 0.0;
  return result;
}

std::vector<double> SensitivePosterior(const HmmModel& hmm,
                                       const IndexSet& sensitive,
                                       std::span<const Symbol> x,
                                       std::span<const char> erased) {
  const std::size_t n = hmm.length();
  const std::size_t m = hmm.num_states();
  Require(x.size() == n && erased.size() == n, "length mismatch");
  const AssignmentSpace space = hmm.SensitiveSpace(sensitive);
  const double stay = hmm.stay_prob();
  const double move = hmm.switch_prob();

  std::vector<double> log_weight(space.size());
  std::vector<double> alpha(m);
  for (std::size_t code = 0; code < space.size(); ++code) {
    const std::vector<Symbol> u = space.Decode(code);
    double log_scale = 0.0;
    bool impossible = false;
    for (std::size_t i = 0; i < n && !impossible; ++i) {
      const std::size_t r = sensitive.rank(i);
      const bool in_k = r < sensitive.size();
      if (in_k && !erased[i] && u[r] != x[i]) {
        impossible = true;
        break;
      }
      double total_prev = 0.0;
      if (i > 0) {
        for (double a : alpha) total_prev += a;
      }
      double total = 0.0;
      for (std::size_t s = 0; s < m; ++s) {
        double prior = i == 0 ? 1.0 / static_cast<double>(m)
                              : stay * alpha[s] + move * (total_prev - alpha[s]);
        if (in_k) {
          prior *= hmm.Emission(i, u[r], s);
        } else if (!erased[i]) {
          prior *= hmm.Emission(i, x[i], s);
        }
        alpha[s] = prior;
        total += prior;
      }
      if (total <= 0.0) {
        impossible = true;
        break;
      }
      for (double& a : alpha) a /= total;
      log_scale += std::log(total);
    }
    log_weight[code] =
        impossible ? -std::numeric_limits<double>::infinity() : log_scale;
  }

  const double top = *std::max_element(log_weight.begin(), log_weight.end());
  Require(std::isfinite(top), "released symbols have probability zero");
  std::vector<double> posterior(space.size());
  double total = 0.0;
  for (std::size_t c = 0; c < space.size(); ++c) {
    posterior[c] = std::exp(log_weight[c] - top);
    total += posterior[c];
  }
  for (double& p : posterior) p /= total;
  return posterior;
}

LeakageResult WindowLeakageMc(const HmmModel& hmm, const IndexSet& sensitive,
                              const WindowPolicy& policy, std::size_t samples,
                              std::uint64_t seed) {
  Require(samples >= 2, "need at least two samples");
  const std::vector<char> erased =
      WindowErasures(hmm.length(), sensitive, policy);
  LeakageResult result{};
  result.entropy_bits = EntropyOf(hmm.Conditionals(sensitive).assignment_probs);
  if (result.entropy_bits < kDegenerateEntropy) {
    Fail(ErrorCode::kDegenerate, "sensitive symbols are deterministic");
  }

  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t r = 0; r < samples; ++r) {
    Rng rng = StreamFor(seed, r);
    const Sequence x = hmm.Sample(rng);
    const double h = EntropyOf(SensitivePosterior(hmm, sensitive, x, erased));
    sum += h;
    sum_sq += h * h;
  }
  const double count = static_cast<double>(samples);
  const double mean = sum / count;
  const double var = std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0));
  result.leakage_bits = result.entropy_bits - mean;
  result.normalized = result.leakage_bits / result.entropy_bits;
  result.stderr = std::sqrt(var / count) / result.entropy_bits;
  return result;
}

double SequenceKlDivergence(const SequenceModel& p, const SequenceModel& q) {
  Require(p.length() == q.length() && p.Arities() == q.Arities(),
          "models must share length and alphabet");
  const Support support = p.EnumerateSupport();
  double kl = 0.0;
  for (std::size_t s = 0; s < support.size(); ++s) {
    const double qx = q.JointProb(support.sequences[s]);
    if (qx <= 0.0) return std::numeric_limits<double>::infinity();
    kl += support.probs[s] * std::log2(support.probs[s] / qx);
  }
  return std::max(0.0, kl);
}

Estimate SequenceKlDivergenceMc(const HmmModel& p, const HmmModel& q,
                                std::size_t samples, std::uint64_t seed) {
  Require(samples >= 2, "need at least two samples");
  Require(p.length() == q.length(), "models must share length");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t r = 0; r < samples; ++r) {
    Rng rng = StreamFor(seed, r);
    const Sequence x = p.Sample(rng);
    const double lq = q.LogJointProb(x);
    if (!std::isfinite(lq)) {
      return {std::numeric_limits<double>::infinity(), 0.0};
    }
    const double v = (p.LogJointProb(x) - lq) / std::log(2.0);
    sum += v;
    sum_sq += v * v;
  }
  const double count = static_cast<double>(samples);
  const double mean = sum / count;
  const double var = std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0));
  return {mean, std::sqrt(var / count)};
}

RobustnessResult RobustnessExperiment(const SequenceModel& p,
                                      const SequenceModel& q,
                                      const IndexSet& sensitive,
                                      const Ordering& ordering) {
  Require(p.length() == q.length() && p.Arities() == q.Arities(),
          "models must share length and alphabet");
  const ExactMechanism mechanism(q, sensitive, ordering);
  const OutputJoint joint = JointFromKernel(
      p, sensitive,
      [&](std::span<const Symbol> x) { return mechanism.Kernel(x); });
  RobustnessResult result{};
  result.leakage_bits = joint.MutualInformation();
  result.leakage_under_q_bits = mechanism.output().MutualInformation();
  result.kl_bits = SequenceKlDivergence(p, q);
  result.bound_holds = result.leakage_bits <= result.kl_bits + 1e-9;
  return result;
}

}  // namespace genomask
