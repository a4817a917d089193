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
#ifndef GENOMASK_TESTS_ORACLES_H_
#define GENOMASK_TESTS_ORACLES_H_

// Reference computations written independently of the library code paths:
// plain loops over every sequence, every state path and every output prefix.
// Slow, small-instance only.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "genomask/common.h"
#include "genomask/random.h"
#include "genomask/sequence_model.h"

namespace oracle {

using genomask::Sequence;
using genomask::Symbol;

constexpr Symbol kStar = -1;
constexpr Symbol kOpen = -2;

// Every sequence of the product space with its probability.
struct Table {
  std::vector<int> arity;
  std::vector<Sequence> xs;
  std::vector<double> p;
};

inline Table Tabulate(const std::vector<int>& arity,
                      const std::function<double(const Sequence&)>& prob) {
  Table t;
  t.arity = arity;
  Sequence x(arity.size(), 0);
  while (true) {
    t.xs.push_back(x);
    t.p.push_back(prob(x));
    std::size_t i = x.size();
    while (i > 0) {
      --i;
      if (++x[i] < arity[i]) break;
      x[i] = 0;
      if (i == 0) return t;
    }
    if (x.empty()) return t;
  }
}

inline Table Tabulate(const genomask::SequenceModel& model) {
  return Tabulate(model.Arities(),
                  [&](const Sequence& x) { return model.JointProb(x); });
}

// p(x) of the copying HMM by summing over all m^n state paths.
inline double HmmPathProb(const genomask::HmmModel& hmm, const Sequence& x) {
  const std::size_t n = hmm.length();
  const std::size_t m = hmm.num_states();
  const int a = hmm.alphabet();
  const double stay = 1.0 - hmm.epsilon();
  const double move = m > 1 ? hmm.epsilon() / static_cast<double>(m - 1) : 0.0;
  auto emit = [&](std::size_t i, std::size_t s) {
    return hmm.panel()[s][i] == x[i] ? 1.0 - hmm.theta()
                                     : hmm.theta() / static_cast<double>(a - 1);
  };
  std::vector<std::size_t> path(n, 0);
  double total = 0.0;
  while (true) {
    double w = 1.0 / static_cast<double>(m) * emit(0, path[0]);
    for (std::size_t i = 1; i < n; ++i) {
      w *= (path[i] == path[i - 1] ? (m > 1 ? stay : 1.0) : move) * emit(i, path[i]);
    }
    total += w;
    std::size_t i = n;
    bool done = true;
    while (i > 0) {
      --i;
      if (++path[i] < m) {
        done = false;
        break;
      }
      path[i] = 0;
    }
    if (done) return total;
  }
}

inline Table TabulateHmm(const genomask::HmmModel& hmm) {
  return Tabulate(hmm.Arities(),
                  [&](const Sequence& x) { return HmmPathProb(hmm, x); });
}

// Code of x restricted to K, first index most significant.
inline std::size_t Code(const Sequence& x, const std::vector<std::size_t>& k,
                        const std::vector<int>& arity) {
  std::size_t c = 0;
  for (std::size_t j : k) c = c * static_cast<std::size_t>(arity[j]) +
                              static_cast<std::size_t>(x[j]);
  return c;
}

inline std::size_t NumCodes(const std::vector<std::size_t>& k,
                            const std::vector<int>& arity) {
  std::size_t c = 1;
  for (std::size_t j : k) c *= static_cast<std::size_t>(arity[j]);
  return c;
}

// One visited prefix: conditional p(x_i = a | x_K = u, prefix) for all u.
struct PrefixTable {
  std::size_t position;
  double mass;                 // p(prefix)
  std::vector<double> cond;    // [u * arity + a]
  std::vector<double> u_mass;  // p(x_K = u, prefix)
};

struct Reference {
  // p(x_K = u, Y = y).
  std::map<std::pair<std::size_t, Sequence>, double> joint;
  // (1/n) sum_i sum_prefix p(prefix) sum_a min_u p(a | u, prefix).
  double expression_rate = 0.0;
  // 1 - E[#stars]/n from the joint.
  double output_rate = 0.0;
  // Keyed by the partial output (kOpen on unprocessed positions).
  std::map<Sequence, PrefixTable> tables;
};

// The sequential erasure rule evaluated by brute force over (x, prefix).
inline Reference RunReference(const Table& t, const std::vector<std::size_t>& k,
                              const std::vector<std::size_t>& order) {
  const std::size_t n = t.arity.size();
  const std::size_t num_u = NumCodes(k, t.arity);
  std::vector<std::size_t> code(t.xs.size());
  for (std::size_t s = 0; s < t.xs.size(); ++s) code[s] = Code(t.xs[s], k, t.arity);
  auto in_k = [&](std::size_t i) {
    return std::find(k.begin(), k.end(), i) != k.end();
  };

  Reference ref;
  Sequence y(n, kOpen);
  std::function<void(std::size_t, const std::vector<double>&)> visit =
      [&](std::size_t step, const std::vector<double>& w) {
        if (step == n) {
          for (std::size_t s = 0; s < t.xs.size(); ++s) {
            if (w[s] > 0.0) ref.joint[{code[s], y}] += w[s];
          }
          return;
        }
        const std::size_t i = order[step];
        if (in_k(i)) {
          y[i] = kStar;
          visit(step + 1, w);
          y[i] = kOpen;
          return;
        }
        const auto arity = static_cast<std::size_t>(t.arity[i]);
        PrefixTable table{i, 0.0, std::vector<double>(num_u * arity, 0.0),
                          std::vector<double>(num_u, 0.0)};
        for (std::size_t s = 0; s < t.xs.size(); ++s) {
          table.mass += w[s];
          table.u_mass[code[s]] += w[s];
          table.cond[code[s] * arity + static_cast<std::size_t>(t.xs[s][i])] += w[s];
        }
        std::vector<double> min_a(arity, std::numeric_limits<double>::infinity());
        for (std::size_t u = 0; u < num_u; ++u) {
          if (table.u_mass[u] <= 0.0) continue;
          for (std::size_t a = 0; a < arity; ++a) {
            table.cond[u * arity + a] /= table.u_mass[u];
            min_a[a] = std::min(min_a[a], table.cond[u * arity + a]);
          }
        }
        double release_mass = 0.0;
        for (double v : min_a) release_mass += std::isinf(v) ? 0.0 : v;
        ref.expression_rate += table.mass * release_mass / static_cast<double>(n);
        ref.tables[y] = table;

        std::vector<double> erased(w.size(), 0.0);
        std::vector<std::vector<double>> kept(arity, std::vector<double>(w.size(), 0.0));
        double erased_total = 0.0;
        std::vector<double> kept_total(arity, 0.0);
        for (std::size_t s = 0; s < t.xs.size(); ++s) {
          if (w[s] <= 0.0) continue;
          const auto a = static_cast<std::size_t>(t.xs[s][i]);
          const double c = table.cond[code[s] * arity + a];
          const double r = c > 0.0 ? std::min(1.0, min_a[a] / c) : 0.0;
          erased[s] = w[s] * (1.0 - r);
          kept[a][s] = w[s] * r;
          erased_total += erased[s];
          kept_total[a] += kept[a][s];
        }
        // Skip branches that only carry round-off.
        const double floor = 1e-13 * table.mass;
        if (erased_total > floor) {
          y[i] = kStar;
          visit(step + 1, erased);
        }
        for (std::size_t a = 0; a < arity; ++a) {
          if (kept_total[a] > floor) {
            y[i] = static_cast<Symbol>(a);
            visit(step + 1, kept[a]);
          }
        }
        y[i] = kOpen;
      };
  visit(0, t.p);

  double stars = 0.0;
  double total = 0.0;
  for (const auto& [key, p] : ref.joint) {
    total += p;
    stars += p * static_cast<double>(std::count(key.second.begin(), key.second.end(), kStar));
  }
  ref.output_rate = 1.0 - stars / (total * static_cast<double>(n));
  return ref;
}

// I(U; Y) in bits and max |p(y|u) - p(y)| of a joint keyed by (u, y).
inline std::pair<double, double> Leakage(
    const std::map<std::pair<std::size_t, Sequence>, double>& joint,
    std::size_t num_u) {
  std::vector<double> pu(num_u, 0.0);
  std::map<Sequence, double> py;
  for (const auto& [key, p] : joint) {
    pu[key.first] += p;
    py[key.second] += p;
  }
  double info = 0.0;
  double dev = 0.0;
  for (const auto& [key, p] : joint) {
    if (p > 0.0) info += p * std::log2(p / (pu[key.first] * py[key.second]));
  }
  for (const auto& [y, q] : py) {
    for (std::size_t u = 0; u < num_u; ++u) {
      if (pu[u] <= 0.0) continue;
      auto it = joint.find({u, y});
      const double cond = it == joint.end() ? 0.0 : it->second / pu[u];
      dev = std::max(dev, std::abs(cond - q));
    }
  }
  return {std::max(0.0, info), dev};
}

// gamma(i, u, s) = p(x_{K >= i} = u | s_i = s) by enumerating s_{i+1..n}.
inline double GammaByPaths(const genomask::HmmModel& hmm,
                           const std::vector<std::size_t>& k,
                           const std::vector<Symbol>& u, std::size_t i,
                           std::size_t s) {
  const std::size_t n = hmm.length();
  const std::size_t m = hmm.num_states();
  const double stay = m > 1 ? 1.0 - hmm.epsilon() : 1.0;
  const double move = m > 1 ? hmm.epsilon() / static_cast<double>(m - 1) : 0.0;
  auto evidence = [&](std::size_t pos, std::size_t state) {
    for (std::size_t j = 0; j < k.size(); ++j) {
      if (k[j] != pos) continue;
      return hmm.panel()[state][pos] == u[j]
                 ? 1.0 - hmm.theta()
                 : hmm.theta() / static_cast<double>(hmm.alphabet() - 1);
    }
    return 1.0;
  };
  const std::size_t len = n - i - 1;
  std::vector<std::size_t> tail(len, 0);
  double total = 0.0;
  while (true) {
    double w = evidence(i, s);
    std::size_t prev = s;
    for (std::size_t t = 0; t < len; ++t) {
      w *= (tail[t] == prev ? stay : move) * evidence(i + 1 + t, tail[t]);
      prev = tail[t];
    }
    total += w;
    std::size_t t = len;
    bool done = true;
    while (t > 0) {
      --t;
      if (++tail[t] < m) {
        done = false;
        break;
      }
      tail[t] = 0;
    }
    if (done) return total;
  }
}

// Random distribution over `size` outcomes with some exact zeros.
inline std::vector<double> RandomTable(std::size_t size, genomask::Rng& rng,
                                       double zero_prob = 0.0) {
  std::vector<double> p(size);
  double total = 0.0;
  for (double& v : p) {
    v = genomask::Uniform01(rng) < zero_prob ? 0.0 : 0.05 + genomask::Uniform01(rng);
    total += v;
  }
  if (total == 0.0) {
    p[0] = 1.0;
    return p;
  }
  for (double& v : p) v /= total;
  // Renormalize the largest entry so the sum is 1 to the last ulp.
  double sum = 0.0;
  for (double v : p) sum += v;
  *std::max_element(p.begin(), p.end()) += 1.0 - sum;
  return p;
}

inline std::vector<std::size_t> RandomPermutation(std::size_t n, genomask::Rng& rng) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    std::swap(perm[i - 1], perm[genomask::UniformIndex(rng, i)]);
  }
  return perm;
}

}  // namespace oracle

#endif  // GENOMASK_TESTS_ORACLES_H_
