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
#ifndef GENOMASK_MECHANISM_H_
#define GENOMASK_MECHANISM_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "genomask/common.h"
#include "genomask/enumeration.h"
#include "genomask/random.h"
#include "genomask/release_rule.h"
#include "genomask/sequence_model.h"

namespace genomask {

struct MaskedSequence {
  Sequence symbols;

  std::string ToString() const { return FormatSequence(symbols); }
  std::size_t ErasureCount() const;
  // Every non-erased entry equals the source symbol.
  bool IsFaithfulTo(std::span<const Symbol> x) const;
};

// One release decision.
struct TranscriptEntry {
  std::size_t index;    // 0-based position
  double release_prob;  // probability of releasing x_i
  Symbol outcome;       // x_i or kErased
};

using MechanismTranscript = std::vector<TranscriptEntry>;

// JSON lines {"i": <1-based>, "release_prob": p, "outcome": "0"|"*"}.
std::string TranscriptToJsonLines(const MechanismTranscript& transcript);

struct MaskResult {
  MaskedSequence masked;
  MechanismTranscript transcript;
  // False when the input has probability zero under the model; the mechanism
  // still runs, falling back to erasure on impossible contexts.
  bool input_in_support = true;
};

// Masks one sequence with the generic enumeration-backed mechanism.
MaskResult MaskSequence(const EnumerationOracle& oracle,
                        std::span<const Symbol> x, const Ordering& ordering,
                        Rng& rng);
MaskResult MaskSequence(const SequenceModel& model, std::span<const Symbol> x,
                        const IndexSet& sensitive, const Ordering& ordering,
                        Rng& rng);

// Exact joint law of (x_K, Y).
class OutputJoint {
 public:
  OutputJoint() = default;
  OutputJoint(AssignmentSpace assignments, std::size_t length)
      : assignments_(std::move(assignments)), length_(length) {}

  void Add(std::size_t u_code, const Sequence& y, double weight);

  const AssignmentSpace& assignments() const { return assignments_; }
  std::size_t length() const { return length_; }
  std::size_t num_outputs() const { return outputs_.size(); }
  const Sequence& output(std::size_t k) const { return outputs_[k]; }
  double prob(std::size_t u_code, std::size_t k) const {
    return probs_[k][u_code];
  }
  // Index of y among the outputs, or num_outputs() if absent.
  std::size_t find(const Sequence& y) const;

  double TotalMass() const;
  std::vector<double> AssignmentMarginal() const;
  std::vector<double> OutputMarginal() const;
  // Row-major (u, y) table.
  std::vector<double> Table() const;

  double MutualInformation() const;
  // max over u with p(u) > 0 and y of |p(y | u) - p(y)|.
  double MaxDeviation() const;
  double ExpectedErasures() const;
  double Rate() const { return 1.0 - ExpectedErasures() / static_cast<double>(length_); }
  // Total variation between two joints over the same assignment space.
  double TotalVariation(const OutputJoint& other) const;

 private:
  AssignmentSpace assignments_;
  std::size_t length_ = 0;
  std::map<Sequence, std::size_t> index_;
  std::vector<Sequence> outputs_;
  std::vector<std::vector<double>> probs_;
};

// A reachable prefix of the mechanism, reported during exact construction.
struct PrefixNode {
  std::size_t step;     // number of positions already processed
  std::size_t position; // position processed next
  std::span<const PrefixEntry> prefix;
  double mass;          // p(y_prefix)
  const PredictiveTable* table;
  double observed_release_mass;  // p(y_i != * | y_prefix) from the split
};

using PrefixVisitor = std::function<void(const PrefixNode&)>;

// The mechanism evaluated exactly by enumeration over every reachable prefix.
class ExactMechanism {
 public:
  ExactMechanism(const SequenceModel& model, IndexSet sensitive,
                 Ordering ordering, const PrefixVisitor& visitor = {});

  const OutputJoint& output() const { return output_; }
  const IndexSet& sensitive() const { return oracle_.sensitive(); }
  const Ordering& ordering() const { return ordering_; }
  const EnumerationOracle& oracle() const { return oracle_; }

  // 1 - E[e(Y)]/n from the output law.
  double achievable_rate() const { return output_.Rate(); }
  // (1/n) sum_i sum_{prefix} p(prefix) sum_a min_u p(a | u, prefix).
  double expression_rate() const { return expression_rate_; }
  std::size_t num_prefixes() const { return tables_.size(); }

  // Release/erase table at a reachable prefix (positions outside the prefix
  // hold kUnprocessed), or nullptr if the prefix is unreachable.
  const PredictiveTable* TableAt(const Sequence& partial_output) const;

  // w(. | x) for any x, including sequences outside the model's support.
  std::vector<std::pair<Sequence, double>> Kernel(std::span<const Symbol> x) const;

  static constexpr Symbol kUnprocessed = -2;

 private:
  void Visit(std::size_t step, std::vector<double>& weights,
             std::vector<PrefixEntry>& prefix, Sequence& partial,
             const PrefixVisitor& visitor);

  EnumerationOracle oracle_;
  Ordering ordering_;
  OutputJoint output_;
  std::map<Sequence, PredictiveTable> tables_;
  double expression_rate_ = 0.0;
};

OutputJoint ExactOutputDistribution(const SequenceModel& model,
                                    const IndexSet& sensitive,
                                    const Ordering& ordering);

double AchievableRateExact(const SequenceModel& model,
                           const IndexSet& sensitive, const Ordering& ordering);

// Joint of (x_K, Y) when X ~ model and Y ~ kernel(X).
using MaskingKernel =
    std::function<std::vector<std::pair<Sequence, double>>(std::span<const Symbol>)>;
OutputJoint JointFromKernel(const SequenceModel& model,
                            const IndexSet& sensitive,
                            const MaskingKernel& kernel);

struct PrivacyReport {
  double max_deviation;
  double mutual_information;
};

PrivacyReport VerifyPrivacy(const OutputJoint& joint);
PrivacyReport VerifyPrivacyExact(const SequenceModel& model,
                                 const IndexSet& sensitive,
                                 const Ordering& ordering);

struct Estimate {
  double value;
  double stderr;
};

// Mean and standard error of 1 - e(Y)/n over `runs` independent runs; run r
// draws from StreamFor(seed, r).
Estimate EstimateRate(std::size_t runs, std::uint64_t seed, std::size_t n,
                      const std::function<MaskResult(Rng&)>& one_run);

// Samples X from the model and masks it with the generic mechanism.
Estimate AchievableRateMc(const SequenceModel& model, const IndexSet& sensitive,
                          const Ordering& ordering, std::size_t runs,
                          std::uint64_t seed);

}  // namespace genomask

#endif  // GENOMASK_MECHANISM_H_
