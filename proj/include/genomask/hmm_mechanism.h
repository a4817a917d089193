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
#ifndef GENOMASK_HMM_MECHANISM_H_
#define GENOMASK_HMM_MECHANISM_H_

// Streaming implementation of the erasure mechanism for the haplotype-copying
// HMM. Cost is O(|X|^|K| * n * m^2): a backward pass builds the likelihood of
// the sensitive symbols from each hidden state, then a per-run forward belief
// over hidden states is updated after every released or erased symbol.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "genomask/common.h"
#include "genomask/mechanism.h"
#include "genomask/random.h"
#include "genomask/release_rule.h"
#include "genomask/sequence_model.h"

namespace genomask {

// Sensitive-assignment enumeration above this many entries is refused.
inline constexpr std::size_t kMaxHmmSensitive = 12;

// gamma(i, u, s) = p(x_{K >= i} = u_+ | s_i = s). Immutable once built and
// shareable across sessions.
class GammaTable {
 public:
  static GammaTable Compute(const HmmModel& hmm, const IndexSet& sensitive);

  std::size_t length() const { return n_; }
  std::size_t num_states() const { return m_; }
  std::size_t num_assignments() const { return space_.size(); }
  const AssignmentSpace& assignments() const { return space_; }
  const IndexSet& sensitive() const { return sensitive_; }

  double at(std::size_t i, std::size_t u, std::size_t s) const {
    return values_[(i * space_.size() + u) * m_ + s];
  }
  std::span<const double> row(std::size_t i, std::size_t u) const {
    return std::span<const double>(values_).subspan((i * space_.size() + u) * m_, m_);
  }
  // p(x_K = u) under the model.
  double AssignmentProb(std::size_t u) const;
  // True when no sensitive position lies at or after i, so gamma is 1.
  bool IsTrivialFrom(std::size_t i) const {
    return sensitive_.empty() || i > sensitive_.indices().back();
  }

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  IndexSet sensitive_;
  AssignmentSpace space_;
  std::vector<double> values_;
};

// p(s_i | s_{i-1}, x_K = u) as a dense row-major m x m kernel, for i >= 1.
// Throws kImpossibleContext when some row cannot be normalized.
std::vector<double> TransitionGivenSensitive(const HmmModel& hmm,
                                             const GammaTable& gamma,
                                             std::size_t i, std::size_t u);

struct HmmSessionOptions {
  // Past the last sensitive position gamma is identically 1 and the
  // conditioned kernel equals the plain one; skip its normalizers.
  bool plain_kernel_past_last_sensitive = true;
};

// One masking run. Owns the belief psi(u, s); confine to one thread.
class HmmMaskingSession {
 public:
  // `sensitive_values` is the true x_K, in increasing index order.
  HmmMaskingSession(const HmmModel& hmm, const GammaTable& gamma,
                    std::span<const Symbol> sensitive_values,
                    HmmSessionOptions options = {});

  // Number of outputs produced so far (the next position to process).
  std::size_t position() const { return position_; }
  bool done() const { return position_ == hmm_->length(); }

  // p(x_i | x_K = u, y_{<i}) for every u at the current position.
  const PredictiveTable& Predict();

  // Samples y_i for the true symbol x_i and advances the belief.
  Symbol Step(Symbol x_i, Rng& rng);

  // Advances the belief with a given output (y_i = x_i or kErased) without
  // sampling; used to follow a fixed prefix.
  void Observe(Symbol y_i);

  // p(s_{i-1} | x_K = u, y_{<i}) after the last update.
  std::span<const double> belief(std::size_t u) const {
    return std::span<const double>(psi_).subspan(u * m_, m_);
  }
  bool belief_valid(std::size_t u) const { return valid_[u] != 0; }

  const MechanismTranscript& transcript() const { return transcript_; }
  const Sequence& outputs() const { return outputs_; }

 private:
  void ComputePrior();

  const HmmModel* hmm_;
  const GammaTable* gamma_;
  HmmSessionOptions options_;
  std::size_t m_;
  std::size_t num_u_;
  std::size_t u_obs_;
  std::size_t position_ = 0;

  std::vector<double> psi_;    // p(s_{i-1} | u, y_{<i}), [u * m + s]
  std::vector<double> prior_;  // p(s_i | u, y_{<i})
  std::vector<char> valid_;
  PredictiveTable table_;
  bool table_ready_ = false;

  MechanismTranscript transcript_;
  Sequence outputs_;
};

MaskResult MaskHmm(const HmmModel& hmm, const GammaTable& gamma,
                   std::span<const Symbol> x, Rng& rng,
                   HmmSessionOptions options = {});
// Builds gamma then masks; throws kCapacity when |K| > kMaxHmmSensitive.
MaskResult MaskHmm(const HmmModel& hmm, std::span<const Symbol> x,
                   const IndexSet& sensitive, Rng& rng);

// Monte-Carlo rate of the HMM mechanism on sequences sampled from the model.
Estimate HmmRateMc(const HmmModel& hmm, const IndexSet& sensitive,
                   std::size_t runs, std::uint64_t seed);

}  // namespace genomask

#endif  // GENOMASK_HMM_MECHANISM_H_
