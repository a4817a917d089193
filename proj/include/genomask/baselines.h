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
#ifndef GENOMASK_BASELINES_H_
#define GENOMASK_BASELINES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "genomask/common.h"
#include "genomask/mechanism.h"
#include "genomask/sequence_model.h"

namespace genomask {

// Deterministic window erasure. Prefix mode erases positions 0..omega-1;
// radius mode erases every position within distance omega of a sensitive one.
struct WindowPolicy {
  enum class Mode { kPrefix, kRadius };
  Mode mode = Mode::kPrefix;
  std::size_t omega = 0;
};

// Erased flags for a length-n sequence.
std::vector<char> WindowErasures(std::size_t n, const IndexSet& sensitive,
                                 const WindowPolicy& policy);

MaskedSequence WindowMask(std::span<const Symbol> x, const IndexSet& sensitive,
                          const WindowPolicy& policy);

struct LeakageResult {
  double leakage_bits;  // I(X_K; released coordinates)
  double entropy_bits;  // H(X_K)
  double normalized;    // leakage / entropy
  double stderr;        // of `normalized`; 0 when exact
};

// Exact, by enumerating the support. Throws kDegenerate when H(X_K) = 0.
LeakageResult WindowLeakageExact(const SequenceModel& model,
                                 const IndexSet& sensitive,
                                 const WindowPolicy& policy);

// Monte-Carlo estimate for the HMM: averages the exact posterior entropy
// H(X_K | x_released) over samples x. Throws kDegenerate when H(X_K) = 0.
LeakageResult WindowLeakageMc(const HmmModel& hmm, const IndexSet& sensitive,
                              const WindowPolicy& policy, std::size_t samples,
                              std::uint64_t seed);

// p(x_K = u | x_j for unmasked j) for every u, by a forward pass per u.
// Positions with erased[j] set contribute no evidence.
std::vector<double> SensitivePosterior(const HmmModel& hmm,
                                       const IndexSet& sensitive,
                                       std::span<const Symbol> x,
                                       std::span<const char> erased);

// D(p || q) in bits over full sequences, exact by enumerating p's support.
// +infinity when q misses part of that support.
double SequenceKlDivergence(const SequenceModel& p, const SequenceModel& q);

// E_p[log2 p(X) / q(X)] by sampling from p.
Estimate SequenceKlDivergenceMc(const HmmModel& p, const HmmModel& q,
                                std::size_t samples, std::uint64_t seed);

struct RobustnessResult {
  double leakage_bits;          // I_p(X_K; Y) with the mechanism built on q
  double kl_bits;               // D(p || q)
  double leakage_under_q_bits;  // I_q(X_K; Y), zero by construction
  bool bound_holds;             // leakage <= kl + 1e-9
};

RobustnessResult RobustnessExperiment(const SequenceModel& p,
                                      const SequenceModel& q,
                                      const IndexSet& sensitive,
                                      const Ordering& ordering);

}  // namespace genomask

#endif  // GENOMASK_BASELINES_H_
