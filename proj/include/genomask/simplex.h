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
#ifndef GENOMASK_SIMPLEX_H_
#define GENOMASK_SIMPLEX_H_

#include <cstddef>
#include <vector>

namespace genomask {

// maximize c'x  subject to  A x = b,  x >= 0, with b >= 0.
// A is given column-wise as sparse (row, value) lists.
struct LinearProgram {
  struct Entry {
    std::size_t row;
    double value;
  };

  std::size_t num_rows = 0;
  std::vector<std::vector<Entry>> columns;
  std::vector<double> objective;  // one per column
  std::vector<double> rhs;        // one per row

  std::size_t AddColumn(double cost, std::vector<Entry> entries);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

const char* LpStatusName(LpStatus status);

struct SimplexOptions {
  double pivot_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  double feasibility_tolerance = 1e-8;
  std::size_t max_iterations = 200000;
  // Consecutive degenerate pivots before switching to Bland's rule.
  std::size_t degenerate_limit = 50;
  // Rebuild the basis inverse from scratch every this many pivots.
  std::size_t refactor_period = 400;
};

struct SimplexResult {
  LpStatus status = LpStatus::kNumericalFailure;
  double objective = 0.0;
  std::vector<double> x;
  std::size_t iterations = 0;
  double primal_residual = 0.0;  // max |A x - b|
};

// Two-phase revised simplex with a dense basis inverse. Pricing is Dantzig's
// rule, falling back to Bland's rule on degenerate stalls; ratio-test ties go
// to the smallest basic index.
SimplexResult SolveSimplex(const LinearProgram& lp,
                           const SimplexOptions& options = {});

}  // namespace genomask

#endif  // GENOMASK_SIMPLEX_H_
