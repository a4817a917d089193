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
#include "genomask/experiments.h"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "genomask/baselines.h"
#include "genomask/bounds.h"
#include "genomask/hmm_mechanism.h"
#include "genomask/mechanism.h"
#include "genomask/random.h"

namespace genomask {
namespace {

std::string CsvCell(const nlohmann::json& cell) {
  if (cell.is_null()) return "";
  if (cell.is_string()) {
    const std::string s = cell.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + "\"";
  }
  return cell.dump();
}

std::string JoinOneBased(const std::vector<std::size_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(values[i] + 1);
  }
  return out;
}

std::vector<std::size_t> RandomPermutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(perm[i - 1], perm[UniformIndex(rng, i)]);
  }
  return perm;
}

double UniformIn(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * Uniform01(rng);
}

}  // namespace

void ResultTable::AddRow(std::vector<nlohmann::json> row) {
  Require(row.size() == columns.size(), "row width does not match columns");
  rows.push_back(std::move(row));
}

std::string ResultTable::ToCsv() const {
  std::ostringstream out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out << (c ? "," : "") << columns[c];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << CsvCell(row[c]);
    }
    out << '\n';
  }
  return out.str();
}

std::string ResultTable::ToJson() const {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[columns[c]] = row[c];
    doc.push_back(std::move(obj));
  }
  return doc.dump(1) + "\n";
}

ResultTable RateSweep(const std::vector<Sequence>& panel,
                      const std::vector<double>& epsilons,
                      const std::vector<double>& thetas,
                      const IndexSet& sensitive, std::size_t runs,
                      std::uint64_t seed) {
  Require(!epsilons.empty() && !thetas.empty(), "parameter grids must be non-empty");
  ResultTable table;
  table.columns = {"experiment", "n",    "m",   "epsilon", "theta", "rate",
                   "rate_stderr", "bound", "gap", "runs",    "seed"};
  for (double theta : thetas) {
    for (double epsilon : epsilons) {
      const HmmModel hmm(panel, epsilon, theta);
      const Estimate rate = HmmRateMc(hmm, sensitive, runs, seed);
      const double bound = UpperBoundRate(hmm, sensitive);
      table.AddRow({"rate_sweep", hmm.length(), hmm.num_states(), epsilon, theta,
                    rate.value, rate.stderr, bound, bound - rate.value, runs,
                    seed});
    }
  }
  return table;
}

ResultTable WindowSweep(const HmmModel& hmm, const IndexSet& sensitive,
                        const std::vector<std::size_t>& omegas,
                        std::size_t runs, std::uint64_t seed) {
  ResultTable table;
  table.columns = {"experiment",   "n",       "m",              "epsilon",
                   "theta",        "omega",   "erasure_rate",   "erasure_stderr",
                   "leakage",      "leakage_stderr", "runs",    "seed"};
  const double n = static_cast<double>(hmm.length());
  const Estimate rate = HmmRateMc(hmm, sensitive, runs, seed);
  table.AddRow({"mechanism", hmm.length(), hmm.num_states(), hmm.epsilon(),
                hmm.theta(), nullptr, 1.0 - rate.value, rate.stderr, 0.0, 0.0,
                runs, seed});
  for (std::size_t omega : omegas) {
    WindowPolicy policy;
    policy.mode = WindowPolicy::Mode::kPrefix;
    policy.omega = omega;
    const LeakageResult leak = WindowLeakageMc(hmm, sensitive, policy, runs, seed);
    table.AddRow({"window", hmm.length(), hmm.num_states(), hmm.epsilon(),
                  hmm.theta(), omega, static_cast<double>(omega) / n, 0.0,
                  leak.normalized, leak.stderr, runs, seed});
  }
  return table;
}

ResultTable LpComparison(const std::vector<Sequence>& panel, std::size_t length,
                         const std::vector<double>& epsilons,
                         const std::vector<double>& thetas,
                         const IndexSet& sensitive, std::uint64_t seed) {
  ResultTable table;
  table.columns = {"experiment",     "instance", "n",     "m",
                   "epsilon",        "theta",    "mechanism_rate",
                   "lp_rate",        "bound",    "lp_status", "lp_iterations",
                   "seed"};
  std::size_t instance = 0;
  for (double theta : thetas) {
    for (double epsilon : epsilons) {
      const HmmModel hmm = HmmModel(panel, epsilon, theta).Truncated(length);
      const double mechanism =
          AchievableRateExact(hmm, sensitive, Ordering::Linear(length));
      const LpSolution lp = LpOptimalRate(hmm, sensitive);
      const double bound = UpperBoundRate(hmm, sensitive);
      nlohmann::json lp_rate = nullptr;
      if (lp.status == LpOutcome::kOptimal) lp_rate = lp.optimal_rate;
      table.AddRow({"lp_comparison", instance++, length, hmm.num_states(),
                    epsilon, theta, mechanism, lp_rate, bound,
                    LpOutcomeName(lp.status), lp.iterations, seed});
    }
  }
  return table;
}

ResultTable RobustnessSweep(std::size_t pairs, std::size_t n,
                            std::uint64_t seed) {
  Require(n >= 1 && n <= 6, "robustness sweep supports 1 <= n <= 6");
  ResultTable table;
  table.columns = {"experiment", "pair",         "family",
                   "n",          "p_param",      "q_param",
                   "leakage_bits", "kl_bits",    "leakage_under_q_bits",
                   "bound_holds",  "seed"};
  for (std::size_t r = 0; r < pairs; ++r) {
    Rng rng = StreamFor(seed, r);
    const IndexSet sensitive({UniformIndex(rng, n)}, n);
    const Ordering ordering(RandomPermutation(n, rng));
    RobustnessResult result{};
    std::string family;
    std::string p_param;
    std::string q_param;
    if (r % 2 == 0) {
      const double p_stay = UniformIn(rng, 0.55, 0.99);
      const double q_stay =
          std::clamp(p_stay + UniformIn(rng, -0.25, 0.25), 0.01, 0.99);
      family = "markov";
      p_param = "stay=" + nlohmann::json(p_stay).dump();
      q_param = "stay=" + nlohmann::json(q_stay).dump();
      result = RobustnessExperiment(MarkovChainModel::Symmetric(n, 2, p_stay),
                                    MarkovChainModel::Symmetric(n, 2, q_stay),
                                    sensitive, ordering);
    } else {
      const std::vector<Sequence> panel = RandomPanel(3, n, 2, rng);
      const double p_eps = UniformIn(rng, 0.02, 0.4);
      const double p_theta = UniformIn(rng, 0.01, 0.2);
      const double q_eps = std::clamp(p_eps * UniformIn(rng, 0.5, 1.5), 0.01, 0.6);
      const double q_theta =
          std::clamp(p_theta * UniformIn(rng, 0.5, 1.5), 0.005, 0.3);
      family = "hmm";
      p_param = "epsilon=" + nlohmann::json(p_eps).dump() +
                " theta=" + nlohmann::json(p_theta).dump();
      q_param = "epsilon=" + nlohmann::json(q_eps).dump() +
                " theta=" + nlohmann::json(q_theta).dump();
      result = RobustnessExperiment(HmmModel(panel, p_eps, p_theta),
                                    HmmModel(panel, q_eps, q_theta), sensitive,
                                    ordering);
    }
    table.AddRow({"robustness", r, family, n, p_param, q_param,
                  result.leakage_bits, result.kl_bits,
                  result.leakage_under_q_bits, result.bound_holds, seed});
  }
  return table;
}

std::vector<HittingSetInstance> GenerateHittingSetFamily(std::size_t count,
                                                         std::size_t max_m,
                                                         std::size_t max_k,
                                                         std::uint64_t seed) {
  Require(max_m >= 1 && max_k >= 1, "family bounds must be positive");
  std::vector<HittingSetInstance> family;
  family.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    Rng rng = StreamFor(seed, r);
    HittingSetInstance instance;
    instance.m = 1 + UniformIndex(rng, max_m);
    const std::size_t k = 1 + UniformIndex(rng, max_k);
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<std::size_t> set;
      for (std::size_t e = 0; e < instance.m; ++e) {
        if (Bernoulli(rng, 0.4)) set.push_back(e);
      }
      if (set.empty()) set.push_back(UniformIndex(rng, instance.m));
      instance.sets.push_back(std::move(set));
    }
    // Give every uncovered element to a random set.
    std::vector<char> covered(instance.m, 0);
    for (const auto& set : instance.sets) {
      for (std::size_t e : set) covered[e] = 1;
    }
    for (std::size_t e = 0; e < instance.m; ++e) {
      if (!covered[e]) instance.sets[UniformIndex(rng, k)].push_back(e);
    }
    instance.Validate();
    family.push_back(std::move(instance));
  }
  return family;
}

ResultTable HardnessSweep(const std::vector<HittingSetInstance>& family,
                          std::uint64_t seed) {
  ResultTable table;
  table.columns = {"experiment", "instance", "m",     "k",       "edges", "e_star",
                   "h_star",     "equal",    "order", "witness", "sets",  "seed"};
  for (std::size_t r = 0; r < family.size(); ++r) {
    const HittingSetInstance& instance = family[r];
    const OrderingSearchResult best = BestOrderingExhaustive(instance);
    const HittingSetResult hit = MinHittingSetBruteforce(instance);
    table.AddRow({"hardness", r, instance.m, instance.sets.size(),
                  instance.num_edges(), best.e_star, hit.h_star,
                  best.e_star == hit.h_star, JoinOneBased(best.order),
                  JoinOneBased(hit.witness), instance.ToJson(), seed});
  }
  return table;
}

IndexSet ParseIndexList(const std::string& text, std::size_t n) {
  std::vector<std::size_t> indices;
  for (std::size_t v : ParseSizeList(text)) {
    Require(v >= 1, "indices are 1-based");
    indices.push_back(v - 1);
  }
  return IndexSet(std::move(indices), n);
}

std::vector<std::size_t> ParseSizeList(const std::string& text) {
  std::vector<std::size_t> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      Require(item.find('-') == std::string::npos, "negative value: " + item);
      v = std::stoull(item, &used);
    } catch (const std::logic_error&) {
      Fail(ErrorCode::kInput, "not a non-negative integer: " + item);
    }
    Require(used == item.size(), "not a non-negative integer: " + item);
    values.push_back(static_cast<std::size_t>(v));
  }
  return values;
}

std::vector<double> ParseDoubleList(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::logic_error&) {
      Fail(ErrorCode::kInput, "not a number: " + item);
    }
    Require(used == item.size(), "not a number: " + item);
    values.push_back(v);
  }
  Require(!values.empty(), "empty list");
  return values;
}

}  // namespace genomask
