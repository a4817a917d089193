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
#include "genomask/info_theory.h"

#include <cmath>
#include <limits>
#include <vector>

#include "genomask/common.h"

namespace genomask {
namespace {

constexpr double kSumTolerance = 1e-9;

void CheckNormalized(std::span<const double> dist, const char* what) {
  double total = 0.0;
  for (double p : dist) {
    Require(p >= 0.0 && std::isfinite(p),
            std::string(what) + " has a negative or non-finite entry");
    total += p;
  }
  Require(std::abs(total - 1.0) <= kSumTolerance,
          std::string(what) + " does not sum to 1");
}

double PlogP(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

double Entropy(std::span<const double> dist) {
  CheckNormalized(dist, "distribution");
  double h = 0.0;
  for (double p : dist) h -= PlogP(p);
  return h;
}

double BinaryEntropy(double p) {
  Require(p >= 0.0 && p <= 1.0, "probability outside [0,1]");
  return -PlogP(p) - PlogP(1.0 - p);
}

double MutualInformation(std::span<const double> joint, std::size_t rows,
                         std::size_t cols) {
  Require(joint.size() == rows * cols, "joint table shape mismatch");
  CheckNormalized(joint, "joint distribution");
  std::vector<double> row_marginal(rows, 0.0);
  std::vector<double> col_marginal(cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      row_marginal[r] += joint[r * cols + c];
      col_marginal[c] += joint[r * cols + c];
    }
  }
  double info = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double p = joint[r * cols + c];
      if (p <= 0.0) continue;
      info += p * std::log2(p / (row_marginal[r] * col_marginal[c]));
    }
  }
  // Exact independence can leave -1e-17 style residue.
  return info < 0.0 ? 0.0 : info;
}

double KlDivergence(std::span<const double> p, std::span<const double> q) {
  Require(p.size() == q.size(), "KL arguments have different sizes");
  CheckNormalized(p, "p");
  CheckNormalized(q, "q");
  double d = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] <= 0.0) continue;
    if (q[k] <= 0.0) return std::numeric_limits<double>::infinity();
    d += p[k] * std::log2(p[k] / q[k]);
  }
  return d < 0.0 ? 0.0 : d;
}

}  // namespace genomask
