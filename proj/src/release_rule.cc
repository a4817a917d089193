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
#include "genomask/release_rule.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace genomask {

double PredictiveTable::MinOverAssignments(Symbol a) const {
  if (sensitive) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t u = 0; u < num_assignments; ++u) {
    if (valid[u]) best = std::min(best, prob(u, a));
  }
  return std::isinf(best) ? 0.0 : best;
}

double PredictiveTable::ReleaseMass() const {
  double total = 0.0;
  for (Symbol a = 0; a < arity; ++a) total += MinOverAssignments(a);
  return total;
}

double PredictiveTable::NormalizationError() const {
  double worst = 0.0;
  for (std::size_t u = 0; u < num_assignments; ++u) {
    if (!valid[u]) continue;
    double total = 0.0;
    for (Symbol a = 0; a < arity; ++a) total += prob(u, a);
    worst = std::max(worst, std::abs(total - 1.0));
  }
  return worst;
}

double ReleaseProbability(const PredictiveTable& table, Symbol x_i,
                          std::size_t u_obs) {
  if (table.sensitive) return 0.0;
  if (!table.valid[u_obs]) return 0.0;
  const double observed = table.prob(u_obs, x_i);
  if (observed <= 0.0) return 0.0;
  const double r = ClampProbability(table.MinOverAssignments(x_i) / observed);
  // Round-off around the endpoints would otherwise spawn branches whose
  // weights are pure noise.
  if (r < kClampTolerance) return 0.0;
  if (r > 1.0 - kClampTolerance) return 1.0;
  return r;
}

}  // namespace genomask
