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
#include "genomask/mechanism.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "genomask/info_theory.h"

namespace genomask {
namespace {

// Leaves of the exact construction: |support| * 2^n faithful pairs.
constexpr double kPairBudget = static_cast<double>(std::size_t{1} << 24);

std::size_t SensitiveCode(const EnumerationOracle& oracle,
                          std::span<const Symbol> x) {
  std::vector<Symbol> u;
  u.reserve(oracle.sensitive().size());
  for (std::size_t k : oracle.sensitive().indices()) u.push_back(x[k]);
  return oracle.assignments().Encode(u);
}

}  // namespace

std::size_t MaskedSequence::ErasureCount() const {
  return static_cast<std::size_t>(
      std::count(symbols.begin(), symbols.end(), kErased));
}

bool MaskedSequence::IsFaithfulTo(std::span<const Symbol> x) const {
  if (x.size() != symbols.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (symbols[i] != kErased && symbols[i] != x[i]) return false;
  }
  return true;
}

std::string TranscriptToJsonLines(const MechanismTranscript& transcript) {
  std::ostringstream out;
  out.precision(17);
  for (const TranscriptEntry& e : transcript) {
    const Symbol outcome[1] = {e.outcome};
    out << "{\"i\":" << e.index + 1 << ",\"release_prob\":" << e.release_prob
        << ",\"outcome\":\"" << FormatSequence(outcome) << "\"}\n";
  }
  return out.str();
}

MaskResult MaskSequence(const EnumerationOracle& oracle,
                        std::span<const Symbol> x, const Ordering& ordering,
                        Rng& rng) {
  const std::size_t n = oracle.length();
  Require(x.size() == n, "sequence length does not match the model");
  Require(ordering.size() == n, "ordering length does not match the model");
  const std::size_t u_obs = SensitiveCode(oracle, x);

  MaskResult result;
  result.masked.symbols.assign(n, kErased);
  result.transcript.reserve(n);
  result.input_in_support =
      std::find(oracle.support().sequences.begin(),
                oracle.support().sequences.end(),
                Sequence(x.begin(), x.end())) != oracle.support().sequences.end();

  std::vector<double> weights = oracle.InitialWeights();
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t i = ordering[t];
    const PredictiveTable table = oracle.Predict(i, weights);
    const double release = ReleaseProbability(table, x[i], u_obs);
    const Symbol y = Bernoulli(rng, release) ? x[i] : kErased;
    result.masked.symbols[i] = y;
    result.transcript.push_back({i, release, y});
    oracle.Condition(i, y, table, weights);
  }
  return result;
}

MaskResult MaskSequence(const SequenceModel& model, std::span<const Symbol> x,
                        const IndexSet& sensitive, const Ordering& ordering,
                        Rng& rng) {
  model.CheckSequence(x);
  EnumerationOracle oracle(model, sensitive);
  return MaskSequence(oracle, x, ordering, rng);
}

// ---------------------------------------------------------------------------

void OutputJoint::Add(std::size_t u_code, const Sequence& y, double weight) {
  auto [it, inserted] = index_.try_emplace(y, outputs_.size());
  if (inserted) {
    outputs_.push_back(y);
    probs_.emplace_back(assignments_.size(), 0.0);
  }
  probs_[it->second][u_code] += weight;
}

std::size_t OutputJoint::find(const Sequence& y) const {
  auto it = index_.find(y);
  return it == index_.end() ? outputs_.size() : it->second;
}

double OutputJoint::TotalMass() const {
  double total = 0.0;
  for (const auto& row : probs_) {
    for (double p : row) total += p;
  }
  return total;
}

std::vector<double> OutputJoint::AssignmentMarginal() const {
  std::vector<double> marginal(assignments_.size(), 0.0);
  for (const auto& row : probs_) {
    for (std::size_t u = 0; u < row.size(); ++u) marginal[u] += row[u];
  }
  return marginal;
}

std::vector<double> OutputJoint::OutputMarginal() const {
  std::vector<double> marginal(outputs_.size(), 0.0);
  for (std::size_t k = 0; k < outputs_.size(); ++k) {
    for (double p : probs_[k]) marginal[k] += p;
  }
  return marginal;
}

std::vector<double> OutputJoint::Table() const {
  const std::size_t cols = outputs_.size();
  std::vector<double> table(assignments_.size() * cols);
  for (std::size_t k = 0; k < cols; ++k) {
    for (std::size_t u = 0; u < assignments_.size(); ++u) {
      table[u * cols + k] = probs_[k][u];
    }
  }
  return table;
}

double OutputJoint::MutualInformation() const {
  return genomask::MutualInformation(Table(), assignments_.size(),
                                     outputs_.size());
}

double OutputJoint::MaxDeviation() const {
  const std::vector<double> pu = AssignmentMarginal();
  const std::vector<double> py = OutputMarginal();
  double worst = 0.0;
  for (std::size_t k = 0; k < outputs_.size(); ++k) {
    for (std::size_t u = 0; u < pu.size(); ++u) {
      if (pu[u] <= 0.0) continue;
      worst = std::max(worst, std::abs(probs_[k][u] / pu[u] - py[k]));
    }
  }
  return worst;
}

double OutputJoint::ExpectedErasures() const {
  double expected = 0.0;
  for (std::size_t k = 0; k < outputs_.size(); ++k) {
    const auto stars = static_cast<double>(
        std::count(outputs_[k].begin(), outputs_[k].end(), kErased));
    for (double p : probs_[k]) expected += p * stars;
  }
  return expected;
}

double OutputJoint::TotalVariation(const OutputJoint& other) const {
  Require(other.assignments_.size() == assignments_.size(),
          "joints have different assignment spaces");
  double total = 0.0;
  for (std::size_t k = 0; k < outputs_.size(); ++k) {
    const std::size_t j = other.find(outputs_[k]);
    for (std::size_t u = 0; u < assignments_.size(); ++u) {
      const double q = j < other.num_outputs() ? other.probs_[j][u] : 0.0;
      total += std::abs(probs_[k][u] - q);
    }
  }
  for (std::size_t j = 0; j < other.outputs_.size(); ++j) {
    if (find(other.outputs_[j]) < outputs_.size()) continue;
    for (double q : other.probs_[j]) total += q;
  }
  return 0.5 * total;
}

// ---------------------------------------------------------------------------

ExactMechanism::ExactMechanism(const SequenceModel& model, IndexSet sensitive,
                               Ordering ordering, const PrefixVisitor& visitor)
    : oracle_(model, std::move(sensitive)), ordering_(std::move(ordering)) {
  const std::size_t n = oracle_.length();
  Require(ordering_.size() == n, "ordering length does not match the model");
  if (static_cast<double>(oracle_.support().size()) * std::ldexp(1.0, static_cast<int>(n)) >
      kPairBudget) {
    Fail(ErrorCode::kCapacity,
         "exact mechanism enumeration exceeds the budget");
  }
  output_ = OutputJoint(oracle_.assignments(), n);
  std::vector<double> weights = oracle_.InitialWeights();
  std::vector<PrefixEntry> prefix;
  prefix.reserve(n);
  Sequence partial(n, kUnprocessed);
  Visit(0, weights, prefix, partial, visitor);
  expression_rate_ /= static_cast<double>(n);
}

void ExactMechanism::Visit(std::size_t step, std::vector<double>& weights,
                           std::vector<PrefixEntry>& prefix, Sequence& partial,
                           const PrefixVisitor& visitor) {
  const std::size_t n = oracle_.length();
  const Support& support = oracle_.support();
  if (step == n) {
    for (std::size_t s = 0; s < support.size(); ++s) {
      if (weights[s] > 0.0) {
        output_.Add(oracle_.assignment_code(s), partial, weights[s]);
      }
    }
    return;
  }

  const std::size_t i = ordering_[step];
  PredictiveTable table = oracle_.Predict(i, weights);
  const std::vector<double> release = oracle_.ReleaseProbabilities(i, table);

  double mass = 0.0;
  double released = 0.0;
  for (std::size_t s = 0; s < support.size(); ++s) {
    mass += weights[s];
    released += weights[s] * release[s];
  }
  expression_rate_ += mass * table.ReleaseMass();
  if (visitor) {
    visitor(PrefixNode{step, i, prefix, mass, &table,
                       mass > 0.0 ? released / mass : 0.0});
  }

  std::vector<double> child(support.size());
  auto descend = [&](Symbol value) {
    double child_mass = 0.0;
    for (std::size_t s = 0; s < support.size(); ++s) {
      const Symbol x_i = support.sequences[s][i];
      double w = 0.0;
      if (weights[s] != 0.0) {
        w = value == kErased ? weights[s] * (1.0 - release[s])
                             : (x_i == value ? weights[s] * release[s] : 0.0);
      }
      child[s] = w;
      child_mass += w;
    }
    if (child_mass <= 0.0) return;
    std::vector<double> next = child;
    partial[i] = value;
    prefix.push_back({i, value});
    Visit(step + 1, next, prefix, partial, visitor);
    prefix.pop_back();
    partial[i] = kUnprocessed;
  };

  tables_.emplace(partial, std::move(table));
  descend(kErased);
  for (Symbol a = 0; a < oracle_.arity(i); ++a) descend(a);
}

const PredictiveTable* ExactMechanism::TableAt(const Sequence& partial) const {
  auto it = tables_.find(partial);
  return it == tables_.end() ? nullptr : &it->second;
}

std::vector<std::pair<Sequence, double>> ExactMechanism::Kernel(
    std::span<const Symbol> x) const {
  const std::size_t n = oracle_.length();
  Require(x.size() == n, "sequence length does not match the model");
  const std::size_t u_obs = SensitiveCode(oracle_, x);

  std::vector<std::pair<Sequence, double>> out;
  Sequence partial(n, kUnprocessed);
  std::function<void(std::size_t, double)> walk = [&](std::size_t step,
                                                      double prob) {
    if (step == n) {
      out.emplace_back(partial, prob);
      return;
    }
    const std::size_t i = ordering_[step];
    const PredictiveTable* table = TableAt(partial);
    const double release =
        table == nullptr ? 0.0 : ReleaseProbability(*table, x[i], u_obs);
    if (release < 1.0) {
      partial[i] = kErased;
      walk(step + 1, prob * (1.0 - release));
    }
    if (release > 0.0) {
      partial[i] = x[i];
      walk(step + 1, prob * release);
    }
    partial[i] = kUnprocessed;
  };
  walk(0, 1.0);
  return out;
}

OutputJoint ExactOutputDistribution(const SequenceModel& model,
                                    const IndexSet& sensitive,
                                    const Ordering& ordering) {
  return ExactMechanism(model, sensitive, ordering).output();
}

double AchievableRateExact(const SequenceModel& model,
                           const IndexSet& sensitive,
                           const Ordering& ordering) {
  return ExactMechanism(model, sensitive, ordering).achievable_rate();
}

OutputJoint JointFromKernel(const SequenceModel& model,
                            const IndexSet& sensitive,
                            const MaskingKernel& kernel) {
  const Support support = model.EnumerateSupport();
  const AssignmentSpace space = model.SensitiveSpace(sensitive);
  OutputJoint joint(space, model.length());
  std::vector<Symbol> u(sensitive.size());
  for (std::size_t s = 0; s < support.size(); ++s) {
    const Sequence& x = support.sequences[s];
    for (std::size_t j = 0; j < sensitive.size(); ++j) {
      u[j] = x[sensitive.indices()[j]];
    }
    const std::size_t code = space.Encode(u);
    for (const auto& [y, w] : kernel(x)) {
      if (w > 0.0) joint.Add(code, y, support.probs[s] * w);
    }
  }
  return joint;
}

PrivacyReport VerifyPrivacy(const OutputJoint& joint) {
  return {joint.MaxDeviation(), joint.MutualInformation()};
}

PrivacyReport VerifyPrivacyExact(const SequenceModel& model,
                                 const IndexSet& sensitive,
                                 const Ordering& ordering) {
  return VerifyPrivacy(ExactOutputDistribution(model, sensitive, ordering));
}

Estimate EstimateRate(std::size_t runs, std::uint64_t seed, std::size_t n,
                      const std::function<MaskResult(Rng&)>& one_run) {
  Require(runs >= 1, "runs must be at least 1");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t r = 0; r < runs; ++r) {
    Rng rng = StreamFor(seed, r);
    const MaskResult result = one_run(rng);
    const double rate = 1.0 - static_cast<double>(result.masked.ErasureCount()) /
                                  static_cast<double>(n);
    sum += rate;
    sum_sq += rate * rate;
  }
  const double count = static_cast<double>(runs);
  const double mean = sum / count;
  double stderr = 0.0;
  if (runs > 1) {
    const double var = std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0));
    stderr = std::sqrt(var / count);
  }
  return {mean, stderr};
}

Estimate AchievableRateMc(const SequenceModel& model, const IndexSet& sensitive,
                          const Ordering& ordering, std::size_t runs,
                          std::uint64_t seed) {
  EnumerationOracle oracle(model, sensitive);
  return EstimateRate(runs, seed, model.length(), [&](Rng& rng) {
    const Sequence x = model.Sample(rng);
    return MaskSequence(oracle, x, ordering, rng);
  });
}

}  // namespace genomask
