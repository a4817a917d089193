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
#ifndef GENOMASK_RELEASE_RULE_H_
#define GENOMASK_RELEASE_RULE_H_

#include <cstddef>
#include <vector>

#include "genomask/common.h"

namespace genomask {

// p(x_i = a | x_K = u, y_prefix) for one position i and every assignment u
// of the sensitive positions. Rows whose context has probability zero are
// marked invalid and take no part in the minimum.
struct PredictiveTable {
  std::size_t num_assignments = 0;
  int arity = 0;
  bool sensitive = false;  // position i itself belongs to K
  std::vector<double> probs;
  std::vector<char> valid;

  PredictiveTable() = default;
  PredictiveTable(std::size_t assignments, int symbols)
      : num_assignments(assignments),
        arity(symbols),
        probs(assignments * static_cast<std::size_t>(symbols), 0.0),
        valid(assignments, 0) {}

  double prob(std::size_t u, Symbol a) const {
    return probs[u * static_cast<std::size_t>(arity) +
                 static_cast<std::size_t>(a)];
  }
  double& prob(std::size_t u, Symbol a) {
    return probs[u * static_cast<std::size_t>(arity) +
                 static_cast<std::size_t>(a)];
  }

  // min_u p(x_i = a | x_K = u, prefix) over valid rows; 0 for sensitive i.
  double MinOverAssignments(Symbol a) const;

  // Sum over a of the minimum: the probability that position i is released.
  double ReleaseMass() const;

  // Largest |sum_a p(a|u) - 1| over valid rows.
  double NormalizationError() const;
};

// Probability of releasing x_i when the true sensitive assignment is u_obs:
// min_u p(x_i | u, prefix) / p(x_i | u_obs, prefix). Sensitive positions and
// impossible contexts (zero denominator or invalid row) release nothing.
double ReleaseProbability(const PredictiveTable& table, Symbol x_i,
                          std::size_t u_obs);

inline double ErasureProbability(const PredictiveTable& table, Symbol x_i,
                                 std::size_t u_obs) {
  return 1.0 - ReleaseProbability(table, x_i, u_obs);
}

}  // namespace genomask

#endif  // GENOMASK_RELEASE_RULE_H_
