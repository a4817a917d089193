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
#include "genomask/simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "genomask/common.h"

namespace genomask {

std::size_t LinearProgram::AddColumn(double cost, std::vector<Entry> entries) {
  columns.push_back(std::move(entries));
  objective.push_back(cost);
  return columns.size() - 1;
}

const char* LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kNumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

namespace {

class RevisedSimplex {
 public:
  RevisedSimplex(const LinearProgram& lp, const SimplexOptions& options)
      : lp_(lp),
        opt_(options),
        rows_(lp.num_rows),
        cols_(lp.columns.size()),
        basis_(rows_),
        in_basis_(cols_ + rows_, 0),
        binv_(rows_ * rows_, 0.0),
        xb_(lp.rhs),
        duals_(rows_),
        direction_(rows_) {
    // Start from the all-artificial basis.
    for (std::size_t r = 0; r < rows_; ++r) {
      basis_[r] = cols_ + r;
      in_basis_[cols_ + r] = 1;
      binv_[r * rows_ + r] = 1.0;
    }
  }

  SimplexResult Solve() {
    SimplexResult result;
    for (double b : lp_.rhs) {
      Require(b >= 0.0, "simplex requires a non-negative right-hand side");
    }
    LpStatus status = RunPhase(1);
    if (status != LpStatus::kOptimal) return Finish(status);
    double infeasibility = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (IsArtificial(basis_[r])) infeasibility += std::max(0.0, xb_[r]);
    }
    if (infeasibility > opt_.feasibility_tolerance) {
      return Finish(LpStatus::kInfeasible);
    }
    status = RunPhase(2);
    return Finish(status);
  }

 private:
  bool IsArtificial(std::size_t var) const { return var >= cols_; }

  double Cost(int phase, std::size_t var) const {
    if (phase == 1) return IsArtificial(var) ? -1.0 : 0.0;
    return IsArtificial(var) ? 0.0 : lp_.objective[var];
  }

  void ComputeDuals(int phase) {
    std::fill(duals_.begin(), duals_.end(), 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = Cost(phase, basis_[r]);
      if (cb == 0.0) continue;
      const double* row = &binv_[r * rows_];
      for (std::size_t k = 0; k < rows_; ++k) duals_[k] += cb * row[k];
    }
  }

  double ReducedCost(int phase, std::size_t var) const {
    if (IsArtificial(var)) return Cost(phase, var) - duals_[var - cols_];
    double rc = lp_.objective[var] * (phase == 2 ? 1.0 : 0.0);
    for (const auto& e : lp_.columns[var]) rc -= duals_[e.row] * e.value;
    return rc;
  }

  // Entering variable, or SIZE_MAX when the basis is optimal.
  std::size_t Price(int phase, bool bland) const {
    std::size_t best_var = std::numeric_limits<std::size_t>::max();
    double best = opt_.optimality_tolerance;
    const std::size_t limit = phase == 1 ? cols_ + rows_ : cols_;
    for (std::size_t var = 0; var < limit; ++var) {
      if (in_basis_[var]) continue;
      const double rc = ReducedCost(phase, var);
      if (rc > best) {
        best_var = var;
        if (bland) return var;
        best = rc;
      }
    }
    return best_var;
  }

  void ComputeDirection(std::size_t var) {
    std::fill(direction_.begin(), direction_.end(), 0.0);
    if (IsArtificial(var)) {
      const std::size_t c = var - cols_;
      for (std::size_t r = 0; r < rows_; ++r) direction_[r] = binv_[r * rows_ + c];
      return;
    }
    for (const auto& e : lp_.columns[var]) {
      for (std::size_t r = 0; r < rows_; ++r) {
        direction_[r] += binv_[r * rows_ + e.row] * e.value;
      }
    }
  }

  // Leaving row, or SIZE_MAX if the direction is unbounded.
  std::size_t RatioTest(int phase, double* step) const {
    std::size_t leave = std::numeric_limits<std::size_t>::max();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows_; ++r) {
      const double d = direction_[r];
      double ratio;
      if (phase == 2 && IsArtificial(basis_[r])) {
        // Artificials left in the basis must stay at zero.
        if (std::abs(d) <= opt_.pivot_tolerance) continue;
        ratio = 0.0;
      } else {
        if (d <= opt_.pivot_tolerance) continue;
        ratio = std::max(0.0, xb_[r]) / d;
      }
      if (ratio < best ||
          (ratio == best && leave != std::numeric_limits<std::size_t>::max() &&
           basis_[r] < basis_[leave])) {
        best = ratio;
        leave = r;
      }
    }
    *step = best;
    return leave;
  }

  void Pivot(std::size_t leave, std::size_t enter, double step) {
    for (std::size_t r = 0; r < rows_; ++r) xb_[r] -= step * direction_[r];
    xb_[leave] = step;

    const double pivot = direction_[leave];
    double* prow = &binv_[leave * rows_];
    for (std::size_t k = 0; k < rows_; ++k) prow[k] /= pivot;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == leave) continue;
      const double f = direction_[r];
      if (f == 0.0) continue;
      double* row = &binv_[r * rows_];
      for (std::size_t k = 0; k < rows_; ++k) row[k] -= f * prow[k];
    }
    in_basis_[basis_[leave]] = 0;
    in_basis_[enter] = 1;
    basis_[leave] = enter;
  }

  // Rebuilds the basis inverse by Gauss-Jordan elimination and recomputes the
  // basic solution. Returns false if the basis is numerically singular.
  bool Refactor() {
    std::vector<double> b(rows_ * rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
      const std::size_t var = basis_[r];
      if (IsArtificial(var)) {
        b[(var - cols_) * rows_ + r] = 1.0;
      } else {
        for (const auto& e : lp_.columns[var]) b[e.row * rows_ + r] = e.value;
      }
    }
    std::vector<double> inv(rows_ * rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) inv[r * rows_ + r] = 1.0;
    for (std::size_t c = 0; c < rows_; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < rows_; ++r) {
        if (std::abs(b[r * rows_ + c]) > std::abs(b[piv * rows_ + c])) piv = r;
      }
      if (std::abs(b[piv * rows_ + c]) < 1e-13) return false;
      if (piv != c) {
        std::swap_ranges(b.begin() + static_cast<std::ptrdiff_t>(piv * rows_),
                         b.begin() + static_cast<std::ptrdiff_t>((piv + 1) * rows_),
                         b.begin() + static_cast<std::ptrdiff_t>(c * rows_));
        std::swap_ranges(inv.begin() + static_cast<std::ptrdiff_t>(piv * rows_),
                         inv.begin() + static_cast<std::ptrdiff_t>((piv + 1) * rows_),
                         inv.begin() + static_cast<std::ptrdiff_t>(c * rows_));
      }
      const double d = b[c * rows_ + c];
      for (std::size_t k = 0; k < rows_; ++k) {
        b[c * rows_ + k] /= d;
        inv[c * rows_ + k] /= d;
      }
      for (std::size_t r = 0; r < rows_; ++r) {
        if (r == c) continue;
        const double f = b[r * rows_ + c];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < rows_; ++k) {
          b[r * rows_ + k] -= f * b[c * rows_ + k];
          inv[r * rows_ + k] -= f * inv[c * rows_ + k];
        }
      }
    }
    binv_.swap(inv);
    for (std::size_t r = 0; r < rows_; ++r) {
      double v = 0.0;
      for (std::size_t k = 0; k < rows_; ++k) v += binv_[r * rows_ + k] * lp_.rhs[k];
      xb_[r] = std::abs(v) < 1e-15 ? 0.0 : v;
    }
    return true;
  }

  LpStatus RunPhase(int phase) {
    std::size_t degenerate = 0;
    std::size_t since_refactor = 0;
    bool verified = false;
    while (true) {
      if (iterations_ >= opt_.max_iterations) return LpStatus::kNumericalFailure;
      if (opt_.refactor_period > 0 && since_refactor >= opt_.refactor_period) {
        if (!Refactor()) return LpStatus::kNumericalFailure;
        since_refactor = 0;
      }
      ComputeDuals(phase);
      const bool bland = degenerate >= opt_.degenerate_limit;
      const std::size_t enter = Price(phase, bland);
      if (enter == std::numeric_limits<std::size_t>::max()) {
        // Confirm optimality on a freshly factored basis once.
        if (verified || since_refactor == 0) return LpStatus::kOptimal;
        if (!Refactor()) return LpStatus::kNumericalFailure;
        since_refactor = 0;
        verified = true;
        continue;
      }
      verified = false;
      ComputeDirection(enter);
      double step = 0.0;
      const std::size_t leave = RatioTest(phase, &step);
      if (leave == std::numeric_limits<std::size_t>::max()) {
        return LpStatus::kUnbounded;
      }
      Pivot(leave, enter, step);
      degenerate = step <= 0.0 ? degenerate + 1 : 0;
      ++iterations_;
      ++since_refactor;
    }
  }

  SimplexResult Finish(LpStatus status) {
    SimplexResult result;
    result.status = status;
    result.iterations = iterations_;
    result.x.assign(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (!IsArtificial(basis_[r])) result.x[basis_[r]] = std::max(0.0, xb_[r]);
    }
    std::vector<double> ax(rows_, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) {
      result.objective += lp_.objective[j] * result.x[j];
      for (const auto& e : lp_.columns[j]) ax[e.row] += e.value * result.x[j];
    }
    for (std::size_t r = 0; r < rows_; ++r) {
      result.primal_residual =
          std::max(result.primal_residual, std::abs(ax[r] - lp_.rhs[r]));
    }
    if (status == LpStatus::kOptimal &&
        result.primal_residual > opt_.feasibility_tolerance) {
      result.status = LpStatus::kNumericalFailure;
    }
    return result;
  }

  const LinearProgram& lp_;
  SimplexOptions opt_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::size_t> basis_;
  std::vector<char> in_basis_;
  std::vector<double> binv_;
  std::vector<double> xb_;
  std::vector<double> duals_;
  std::vector<double> direction_;
  std::size_t iterations_ = 0;
};

}  // namespace

SimplexResult SolveSimplex(const LinearProgram& lp,
                           const SimplexOptions& options) {
  Require(lp.rhs.size() == lp.num_rows, "rhs size must equal row count");
  Require(lp.objective.size() == lp.columns.size(),
          "objective size must equal column count");
  for (const auto& column : lp.columns) {
    for (const auto& e : column) Require(e.row < lp.num_rows, "row out of range");
  }
  return RevisedSimplex(lp, options).Solve();
}

}  // namespace genomask
