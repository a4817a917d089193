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
#include "genomask/enumeration.h"

namespace genomask {

EnumerationOracle::EnumerationOracle(const SequenceModel& model,
                                     IndexSet sensitive)
    : sensitive_(std::move(sensitive)),
      arities_(model.Arities()),
      space_(model.SensitiveSpace(sensitive_)),
      support_(model.EnumerateSupport()) {
  codes_.reserve(support_.size());
  std::vector<Symbol> u(sensitive_.size());
  for (const Sequence& x : support_.sequences) {
    for (std::size_t j = 0; j < sensitive_.size(); ++j) {
      u[j] = x[sensitive_.indices()[j]];
    }
    codes_.push_back(space_.Encode(u));
  }
}

PredictiveTable EnumerationOracle::Predict(
    std::size_t i, std::span<const double> weights) const {
  PredictiveTable table(space_.size(), arities_[i]);
  table.sensitive = sensitive_.contains(i);
  std::vector<double> context(space_.size(), 0.0);
  for (std::size_t s = 0; s < support_.size(); ++s) {
    if (weights[s] == 0.0) continue;
    context[codes_[s]] += weights[s];
    table.prob(codes_[s], support_.sequences[s][i]) += weights[s];
  }
  for (std::size_t u = 0; u < space_.size(); ++u) {
    if (context[u] <= 0.0) continue;
    table.valid[u] = 1;
    for (Symbol a = 0; a < table.arity; ++a) table.prob(u, a) /= context[u];
  }
  return table;
}

std::vector<double> EnumerationOracle::ReleaseProbabilities(
    std::size_t i, const PredictiveTable& table) const {
  std::vector<double> release(support_.size());
  for (std::size_t s = 0; s < support_.size(); ++s) {
    release[s] = ReleaseProbability(table, support_.sequences[s][i], codes_[s]);
  }
  return release;
}

void EnumerationOracle::Condition(std::size_t i, Symbol value,
                                  const PredictiveTable& table,
                                  std::span<double> weights) const {
  for (std::size_t s = 0; s < support_.size(); ++s) {
    if (weights[s] == 0.0) continue;
    const Symbol x_i = support_.sequences[s][i];
    const double r = ReleaseProbability(table, x_i, codes_[s]);
    if (value == kErased) {
      weights[s] *= 1.0 - r;
    } else {
      weights[s] *= (x_i == value) ? r : 0.0;
    }
  }
}

std::vector<double> EnumerationOracle::WeightsFor(
    std::span<const PrefixEntry> prefix) const {
  std::vector<double> weights = InitialWeights();
  std::vector<char> seen(length(), 0);
  for (const PrefixEntry& entry : prefix) {
    Require(entry.index < length() && !seen[entry.index],
            "prefix positions must be distinct and in range");
    Require(entry.value == kErased ||
                (entry.value >= 0 && entry.value < arities_[entry.index]),
            "prefix value outside the alphabet");
    seen[entry.index] = 1;
    const PredictiveTable table = Predict(entry.index, weights);
    Condition(entry.index, entry.value, table, weights);
  }
  return weights;
}

std::vector<double> EnumerationOracle::ConditionalQuery(
    std::size_t i, std::size_t u_code,
    std::span<const PrefixEntry> prefix) const {
  Require(i < length(), "query position out of range");
  for (const PrefixEntry& entry : prefix) {
    Require(entry.index != i, "query position already processed");
  }
  const std::vector<double> weights = WeightsFor(prefix);
  const PredictiveTable table = Predict(i, weights);
  if (!table.valid[u_code]) {
    Fail(ErrorCode::kImpossibleContext,
         "conditioning event has probability zero");
  }
  std::vector<double> dist(static_cast<std::size_t>(table.arity));
  for (Symbol a = 0; a < table.arity; ++a) {
    dist[static_cast<std::size_t>(a)] = table.prob(u_code, a);
  }
  return dist;
}

std::vector<double> ConditionalQuery(const SequenceModel& model, std::size_t i,
                                     std::span<const Symbol> u,
                                     const IndexSet& sensitive,
                                     std::span<const PrefixEntry> prefix) {
  EnumerationOracle oracle(model, sensitive);
  Require(u.size() == sensitive.size(), "assignment size must equal |K|");
  for (std::size_t j = 0; j < u.size(); ++j) {
    Require(u[j] >= 0 && u[j] < model.arity(sensitive.indices()[j]),
            "assignment symbol outside the alphabet");
  }
  return oracle.ConditionalQuery(i, oracle.assignments().Encode(u), prefix);
}

}  // namespace genomask
