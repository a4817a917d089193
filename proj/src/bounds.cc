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
#include "genomask/bounds.h"

#include <algorithm>
#include <limits>
#include <map>
#include <memory>

#include "json.hpp"

namespace genomask {

std::vector<double> UpperBoundTerms(const SequenceModel& model,
                                    const IndexSet& sensitive) {
  const SensitiveConditionals cond = model.Conditionals(sensitive);
  const std::size_t n = model.length();
  std::vector<double> terms(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (sensitive.contains(i)) continue;
    const int arity = cond.arity[i];
    for (Symbol a = 0; a < arity; ++a) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t u = 0; u < cond.num_assignments; ++u) {
        if (!cond.reachable(u)) continue;
        best = std::min(best, cond.table[i][u * static_cast<std::size_t>(arity) +
                                            static_cast<std::size_t>(a)]);
      }
      if (best < std::numeric_limits<double>::infinity()) terms[i] += best;
    }
  }
  return terms;
}

double UpperBoundRate(const SequenceModel& model, const IndexSet& sensitive) {
  double total = 0.0;
  for (double t : UpperBoundTerms(model, sensitive)) total += t;
  return total / static_cast<double>(model.length());
}

SufficientConditionReport CheckSufficientCondition(const SequenceModel& model,
                                                   const IndexSet& sensitive,
                                                   double tolerance) {
  const SensitiveConditionals cond = model.Conditionals(sensitive);
  SufficientConditionReport report;
  auto visitor = [&](const PrefixNode& node) {
    const PredictiveTable& table = *node.table;
    if (table.sensitive) return;
    ++report.prefixes_checked;
    if (!report.holds) return;
    const std::size_t i = node.position;
    const int arity = table.arity;
    const std::vector<double>& base = cond.table[i];
    for (Symbol a = 0; a < arity; ++a) {
      auto at = [&](std::size_t u) {
        return base[u * static_cast<std::size_t>(arity) +
                    static_cast<std::size_t>(a)];
      };
      double base_min = std::numeric_limits<double>::infinity();
      for (std::size_t u = 0; u < cond.num_assignments; ++u) {
        if (cond.reachable(u)) base_min = std::min(base_min, at(u));
      }
      const double prefix_min = table.MinOverAssignments(a);
      for (std::size_t u = 0; u < cond.num_assignments; ++u) {
        if (!cond.reachable(u) || !table.valid[u]) continue;
        if (at(u) > base_min + tolerance) continue;
        if (table.prob(u, a) > prefix_min + tolerance) {
          report.holds = false;
          report.position = i;
          report.symbol = a;
          return;
        }
      }
    }
  };
  ExactMechanism mechanism(model, sensitive, Ordering::Linear(model.length()),
                           visitor);
  return report;
}

const char* LpOutcomeName(LpOutcome outcome) {
  switch (outcome) {
    case LpOutcome::kOptimal:
      return "optimal";
    case LpOutcome::kInfeasible:
      return "infeasible";
    case LpOutcome::kCapacity:
      return "capacity";
    case LpOutcome::kNumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

LpSolution LpOptimalRate(const SequenceModel& model, const IndexSet& sensitive,
                         const SimplexOptions& options) {
  const std::size_t n = model.length();
  LpSolution solution;

  std::vector<std::size_t> free_positions;
  for (std::size_t i = 0; i < n; ++i) {
    if (!sensitive.contains(i)) free_positions.push_back(i);
  }
  if (free_positions.size() >= 20) return solution;
  const std::size_t num_masks = std::size_t{1} << free_positions.size();

  const Support support = model.EnumerateSupport();
  solution.num_variables = support.size() * num_masks;
  if (solution.num_variables > kMaxLpVariables) return solution;

  const AssignmentSpace space = model.SensitiveSpace(sensitive);
  std::vector<std::size_t> codes(support.size());
  std::vector<double> assignment_mass(space.size(), 0.0);
  std::vector<Symbol> u(sensitive.size());
  for (std::size_t s = 0; s < support.size(); ++s) {
    for (std::size_t j = 0; j < sensitive.size(); ++j) {
      u[j] = support.sequences[s][sensitive.indices()[j]];
    }
    codes[s] = space.Encode(u);
    assignment_mass[codes[s]] += support.probs[s];
  }
  // Reachable assignments in code order; privacy rows tie consecutive ones.
  std::vector<std::size_t> rank(space.size(), space.size());
  std::size_t num_reachable = 0;
  for (std::size_t c = 0; c < space.size(); ++c) {
    if (assignment_mass[c] > 0.0) rank[c] = num_reachable++;
  }
  const std::size_t pairs = num_reachable - 1;

  // Enumerate faithful outputs and assign each distinct y a block of rows.
  std::map<Sequence, std::size_t> output_index;
  std::vector<Sequence> outputs;
  std::vector<std::size_t> variable_output(solution.num_variables);
  for (std::size_t s = 0; s < support.size(); ++s) {
    for (std::size_t mask = 0; mask < num_masks; ++mask) {
      Sequence y = support.sequences[s];
      for (std::size_t k : sensitive.indices()) y[k] = kErased;
      for (std::size_t b = 0; b < free_positions.size(); ++b) {
        if (mask >> b & 1) y[free_positions[b]] = kErased;
      }
      auto [it, inserted] = output_index.emplace(y, outputs.size());
      if (inserted) outputs.push_back(y);
      variable_output[s * num_masks + mask] = it->second;
    }
  }
  solution.num_constraints = support.size() + outputs.size() * pairs;
  if (solution.num_constraints > kMaxLpConstraints) return solution;

  LinearProgram lp;
  lp.num_rows = solution.num_constraints;
  lp.rhs.assign(lp.num_rows, 0.0);
  for (std::size_t s = 0; s < support.size(); ++s) lp.rhs[s] = support.probs[s];
  lp.columns.reserve(solution.num_variables);
  lp.objective.reserve(solution.num_variables);
  for (std::size_t s = 0; s < support.size(); ++s) {
    const std::size_t r = rank[codes[s]];
    const double inv_mass = 1.0 / assignment_mass[codes[s]];
    for (std::size_t mask = 0; mask < num_masks; ++mask) {
      const std::size_t y = variable_output[s * num_masks + mask];
      const auto& seq = outputs[y];
      const double stars =
          static_cast<double>(std::count(seq.begin(), seq.end(), kErased));
      std::vector<LinearProgram::Entry> entries{{s, 1.0}};
      const std::size_t base = support.size() + y * pairs;
      if (r > 0) entries.push_back({base + r - 1, -inv_mass});
      if (r < pairs) entries.push_back({base + r, inv_mass});
      lp.AddColumn(1.0 - stars / static_cast<double>(n), std::move(entries));
    }
  }

  const SimplexResult result = SolveSimplex(lp, options);
  solution.iterations = result.iterations;
  solution.primal_residual = result.primal_residual;
  switch (result.status) {
    case LpStatus::kOptimal:
      solution.status = LpOutcome::kOptimal;
      break;
    case LpStatus::kInfeasible:
      solution.status = LpOutcome::kInfeasible;
      return solution;
    case LpStatus::kUnbounded:
    case LpStatus::kNumericalFailure:
      solution.status = LpOutcome::kNumericalFailure;
      return solution;
  }
  solution.optimal_rate = result.objective;
  for (std::size_t s = 0; s < support.size(); ++s) {
    for (std::size_t mask = 0; mask < num_masks; ++mask) {
      const double z = result.x[s * num_masks + mask];
      if (z <= 0.0) continue;
      const double w = z / support.probs[s];
      if (w < 1e-14) continue;
      solution.mechanism.push_back(
          {support.sequences[s], outputs[variable_output[s * num_masks + mask]], w});
    }
  }
  return solution;
}

MaskingKernel LpKernel(const LpSolution& solution, std::size_t length) {
  auto rows = std::make_shared<
      std::map<Sequence, std::vector<std::pair<Sequence, double>>>>();
  for (const LpMechanismEntry& e : solution.mechanism) {
    (*rows)[e.x].emplace_back(e.y, e.prob);
  }
  return [rows, length](std::span<const Symbol> x) {
    auto it = rows->find(Sequence(x.begin(), x.end()));
    if (it != rows->end()) return it->second;
    return std::vector<std::pair<Sequence, double>>{
        {Sequence(length, kErased), 1.0}};
  };
}

std::string LpSolutionToJson(const LpSolution& solution) {
  nlohmann::json out;
  out["rate"] = solution.optimal_rate;
  out["status"] = LpOutcomeName(solution.status);
  out["variables"] = solution.num_variables;
  out["constraints"] = solution.num_constraints;
  nlohmann::json triples = nlohmann::json::array();
  for (const LpMechanismEntry& e : solution.mechanism) {
    triples.push_back({FormatSequence(e.x), FormatSequence(e.y), e.prob});
  }
  out["mechanism"] = std::move(triples);
  return out.dump();
}

}  // namespace genomask
