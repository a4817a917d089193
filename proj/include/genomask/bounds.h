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
#ifndef GENOMASK_BOUNDS_H_
#define GENOMASK_BOUNDS_H_

#include <cstddef>
#include <string>
#include <vector>

#include "genomask/common.h"
#include "genomask/mechanism.h"
#include "genomask/sequence_model.h"
#include "genomask/simplex.h"

namespace genomask {

// (1/n) sum_i sum_a min_u p(x_i = a | x_K = u). Sensitive positions add 0.
double UpperBoundRate(const SequenceModel& model, const IndexSet& sensitive);

// Per-position terms of the bound, sum_a min_u p(x_i = a | x_K = u).
std::vector<double> UpperBoundTerms(const SequenceModel& model,
                                    const IndexSet& sensitive);

struct SufficientConditionReport {
  bool holds = true;
  std::size_t prefixes_checked = 0;
  // First violation, when `holds` is false.
  std::size_t position = 0;
  Symbol symbol = 0;
};

// Checks that every unconditional minimizer u* of p(x_i = a | x_K = u) stays a
// minimizer of p(x_i = a | x_K = u, y_prefix) on every reachable prefix of the
// mechanism (linear order). When it holds the mechanism meets the bound.
SufficientConditionReport CheckSufficientCondition(const SequenceModel& model,
                                                   const IndexSet& sensitive,
                                                   double tolerance = 1e-10);

enum class LpOutcome { kOptimal, kInfeasible, kCapacity, kNumericalFailure };

const char* LpOutcomeName(LpOutcome outcome);

struct LpMechanismEntry {
  Sequence x;
  Sequence y;
  double prob;  // w(y | x)
};

struct LpSolution {
  LpOutcome status = LpOutcome::kCapacity;
  double optimal_rate = 0.0;
  // Faithful (x, y) pairs with positive probability, for x in the support.
  std::vector<LpMechanismEntry> mechanism;
  std::size_t num_variables = 0;
  std::size_t num_constraints = 0;
  std::size_t iterations = 0;
  double primal_residual = 0.0;
};

// Largest LP the solver attempts; larger instances report kCapacity.
inline constexpr std::size_t kMaxLpVariables = 20000;
inline constexpr std::size_t kMaxLpConstraints = 4000;

// Rate of the best perfectly private faithful mechanism, by linear
// programming over w(y | x). Outputs always erase the sensitive positions.
LpSolution LpOptimalRate(const SequenceModel& model, const IndexSet& sensitive,
                         const SimplexOptions& options = {});

// w(. | x) of an LP solution; inputs outside the support are fully erased.
MaskingKernel LpKernel(const LpSolution& solution, std::size_t length);

// {"rate": r, "status": s, "mechanism": [[x, y, p], ...]}
std::string LpSolutionToJson(const LpSolution& solution);

}  // namespace genomask

#endif  // GENOMASK_BOUNDS_H_
