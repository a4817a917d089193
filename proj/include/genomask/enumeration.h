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
#ifndef GENOMASK_ENUMERATION_H_
#define GENOMASK_ENUMERATION_H_

#include <cstddef>
#include <span>
#include <vector>

#include "genomask/common.h"
#include "genomask/release_rule.h"
#include "genomask/sequence_model.h"

namespace genomask {

// One already-processed position and its masked value (kErased or a symbol),
// listed in processing order.
struct PrefixEntry {
  std::size_t index;
  Symbol value;
};

// Brute-force conditional queries by weighting every support sequence x with
// p(x) * w(y_prefix | x), where w composes the release rule along the prefix.
// Valid for small sequence spaces only.
class EnumerationOracle {
 public:
  EnumerationOracle(const SequenceModel& model, IndexSet sensitive);

  const Support& support() const { return support_; }
  const IndexSet& sensitive() const { return sensitive_; }
  const AssignmentSpace& assignments() const { return space_; }
  std::size_t length() const { return arities_.size(); }
  int arity(std::size_t i) const { return arities_[i]; }
  // Code of x_K for support element s.
  std::size_t assignment_code(std::size_t s) const { return codes_[s]; }

  // p(x) for each support sequence.
  std::vector<double> InitialWeights() const { return support_.probs; }

  // p(x_i | x_K = u, prefix) given prefix weights.
  PredictiveTable Predict(std::size_t i, std::span<const double> weights) const;

  // Release probability of each support sequence at position i.
  std::vector<double> ReleaseProbabilities(std::size_t i,
                                           const PredictiveTable& table) const;

  // Multiplies weights by w(y_i = value | x, prefix).
  void Condition(std::size_t i, Symbol value, const PredictiveTable& table,
                 std::span<double> weights) const;

  // Weights after processing the whole prefix.
  std::vector<double> WeightsFor(std::span<const PrefixEntry> prefix) const;

  // Distribution of x_i given x_K = u and the prefix event. Throws
  // kImpossibleContext when the conditioning event has probability zero.
  std::vector<double> ConditionalQuery(std::size_t i, std::size_t u_code,
                                       std::span<const PrefixEntry> prefix) const;

 private:
  IndexSet sensitive_;
  std::vector<int> arities_;
  AssignmentSpace space_;
  Support support_;
  std::vector<std::size_t> codes_;
};

// Convenience wrapper: builds an oracle and answers one query.
std::vector<double> ConditionalQuery(const SequenceModel& model, std::size_t i,
                                     std::span<const Symbol> u,
                                     const IndexSet& sensitive,
                                     std::span<const PrefixEntry> prefix);

}  // namespace genomask

#endif  // GENOMASK_ENUMERATION_H_
