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
#ifndef GENOMASK_EXPERIMENTS_H_
#define GENOMASK_EXPERIMENTS_H_

// Parameter sweeps shared by the command-line tool and the acceptance suite.
// Every sweep is a pure function of its arguments and root seed.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "genomask/common.h"
#include "genomask/hardness.h"
#include "genomask/sequence_model.h"
#include "json.hpp"

namespace genomask {

// Rows of heterogeneous cells with a fixed column list. Doubles print in
// shortest round-trip form, so equal inputs give byte-identical files.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;

  void AddRow(std::vector<nlohmann::json> row);
  std::string ToCsv() const;
  // Array of objects keyed by column name.
  std::string ToJson() const;
};

// Mechanism rate (Monte Carlo) and upper bound for every (epsilon, theta).
// All grid points share the root seed, so runs are paired across the grid.
// Columns: experiment,n,m,epsilon,theta,rate,rate_stderr,bound,gap,runs,seed
ResultTable RateSweep(const std::vector<Sequence>& panel,
                      const std::vector<double>& epsilons,
                      const std::vector<double>& thetas,
                      const IndexSet& sensitive, std::size_t runs,
                      std::uint64_t seed);

// One mechanism row, then one window-baseline row per omega (prefix mode).
// Columns: experiment,n,m,epsilon,theta,omega,erasure_rate,erasure_stderr,
//          leakage,leakage_stderr,runs,seed
ResultTable WindowSweep(const HmmModel& hmm, const IndexSet& sensitive,
                        const std::vector<std::size_t>& omegas,
                        std::size_t runs, std::uint64_t seed);

// Exact mechanism rate, LP optimum and bound on the first `length` positions
// of the panel for every (epsilon, theta); parameters are not rescaled.
// `seed` is recorded only, as the panel's origin.
// Columns: experiment,instance,n,m,epsilon,theta,mechanism_rate,lp_rate,
//          bound,lp_status,lp_iterations,seed
ResultTable LpComparison(const std::vector<Sequence>& panel, std::size_t length,
                         const std::vector<double>& epsilons,
                         const std::vector<double>& thetas,
                         const IndexSet& sensitive, std::uint64_t seed);

// Random mismatched pairs on length-n sequences: symmetric Markov chains and
// small HMMs with perturbed parameters, random orderings.
// Columns: experiment,pair,family,n,p_param,q_param,leakage_bits,kl_bits,
//          leakage_under_q_bits,bound_holds,seed
ResultTable RobustnessSweep(std::size_t pairs, std::size_t n,
                            std::uint64_t seed);

// Random covering instances with 1..max_m elements and 1..max_k sets.
std::vector<HittingSetInstance> GenerateHittingSetFamily(std::size_t count,
                                                         std::size_t max_m,
                                                         std::size_t max_k,
                                                         std::uint64_t seed);

// `seed` is recorded only, as the family's origin.
// Columns: experiment,instance,m,k,edges,e_star,h_star,equal,order,witness,
//          sets,seed
ResultTable HardnessSweep(const std::vector<HittingSetInstance>& family,
                          std::uint64_t seed);

// 1-based comma list "1,3" to an index set over n positions.
IndexSet ParseIndexList(const std::string& text, std::size_t n);
std::vector<double> ParseDoubleList(const std::string& text);
std::vector<std::size_t> ParseSizeList(const std::string& text);

}  // namespace genomask

#endif  // GENOMASK_EXPERIMENTS_H_
