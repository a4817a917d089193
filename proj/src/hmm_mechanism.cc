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
#include "genomask/hmm_mechanism.h"

#include <algorithm>
#include <cmath>

namespace genomask {
namespace {

constexpr double kPredictiveTolerance = 1e-6;

void CheckSensitiveSize(const IndexSet& sensitive) {
  if (sensitive.size() > kMaxHmmSensitive) {
    Fail(ErrorCode::kCapacity, "too many sensitive positions for the HMM "
                               "mechanism (" +
                                   std::to_string(sensitive.size()) + " > " +
                                   std::to_string(kMaxHmmSensitive) + ")");
  }
}

}  // namespace

GammaTable GammaTable::Compute(const HmmModel& hmm, const IndexSet& sensitive) {
  CheckSensitiveSize(sensitive);
  GammaTable table;
  table.n_ = hmm.length();
  table.m_ = hmm.num_states();
  table.sensitive_ = sensitive;
  table.space_ = hmm.SensitiveSpace(sensitive);
  const std::size_t n = table.n_;
  const std::size_t m = table.m_;
  const std::size_t num_u = table.space_.size();
  table.values_.assign(n * num_u * m, 1.0);

  for (std::size_t u = 0; u < num_u; ++u) {
    const std::vector<Symbol> values = table.space_.Decode(u);
    auto evidence = [&](std::size_t i, std::size_t s) {
      const std::size_t r = sensitive.rank(i);
      return r < sensitive.size() ? hmm.Emission(i, values[r], s) : 1.0;
    };
    double* last = &table.values_[((n - 1) * num_u + u) * m];
    for (std::size_t s = 0; s < m; ++s) last[s] = evidence(n - 1, s);

    for (std::size_t i = n - 1; i-- > 0;) {
      const double* next = &table.values_[((i + 1) * num_u + u) * m];
      double* cur = &table.values_[(i * num_u + u) * m];
      for (std::size_t s = 0; s < m; ++s) {
        double acc = 0.0;
        for (std::size_t t = 0; t < m; ++t) acc += hmm.Transition(s, t) * next[t];
        cur[s] = evidence(i, s) * acc;
      }
    }
  }
  return table;
}

double GammaTable::AssignmentProb(std::size_t u) const {
  double total = 0.0;
  for (double g : row(0, u)) total += g;
  return total / static_cast<double>(m_);
}

std::vector<double> TransitionGivenSensitive(const HmmModel& hmm,
                                             const GammaTable& gamma,
                                             std::size_t i, std::size_t u) {
  Require(i >= 1 && i < hmm.length(), "kernel position out of range");
  const std::size_t m = hmm.num_states();
  const std::span<const double> g = gamma.row(i, u);
  std::vector<double> kernel(m * m);
  for (std::size_t from = 0; from < m; ++from) {
    double norm = 0.0;
    for (std::size_t to = 0; to < m; ++to) {
      kernel[from * m + to] = hmm.Transition(from, to) * g[to];
      norm += kernel[from * m + to];
    }
    if (norm <= 0.0) {
      Fail(ErrorCode::kImpossibleContext,
           "sensitive assignment unreachable from state " + std::to_string(from));
    }
    for (std::size_t to = 0; to < m; ++to) kernel[from * m + to] /= norm;
  }
  return kernel;
}

// ---------------------------------------------------------------------------

HmmMaskingSession::HmmMaskingSession(const HmmModel& hmm,
                                     const GammaTable& gamma,
                                     std::span<const Symbol> sensitive_values,
                                     HmmSessionOptions options)
    : hmm_(&hmm),
      gamma_(&gamma),
      options_(options),
      m_(hmm.num_states()),
      num_u_(gamma.num_assignments()) {
  Require(gamma.length() == hmm.length() && gamma.num_states() == m_,
          "gamma table does not match the model");
  Require(sensitive_values.size() == gamma.sensitive().size(),
          "sensitive values must match |K|");
  for (std::size_t j = 0; j < sensitive_values.size(); ++j) {
    Require(sensitive_values[j] >= 0 && sensitive_values[j] < hmm.alphabet(),
            "sensitive value outside the alphabet");
  }
  u_obs_ = gamma.assignments().Encode(sensitive_values);
  psi_.assign(num_u_ * m_, 0.0);
  prior_.assign(num_u_ * m_, 0.0);
  valid_.assign(num_u_, 0);
  // psi before position 0 is unused; validity starts from p(x_K = u) > 0.
  for (std::size_t u = 0; u < num_u_; ++u) {
    valid_[u] = gamma.AssignmentProb(u) > 0.0 ? 1 : 0;
  }
  transcript_.reserve(hmm.length());
  outputs_.reserve(hmm.length());
}

void HmmMaskingSession::ComputePrior() {
  const std::size_t i = position_;
  const bool plain = options_.plain_kernel_past_last_sensitive &&
                     gamma_->IsTrivialFrom(i);
  for (std::size_t u = 0; u < num_u_; ++u) {
    double* prior = &prior_[u * m_];
    if (!valid_[u]) {
      std::fill(prior, prior + m_, 0.0);
      continue;
    }
    const std::span<const double> g = gamma_->row(i, u);
    if (i == 0) {
      // p(s_1 | x_K = u) is proportional to the uniform start times gamma.
      double total = 0.0;
      for (std::size_t s = 0; s < m_; ++s) total += g[s];
      for (std::size_t s = 0; s < m_; ++s) prior[s] = g[s] / total;
      continue;
    }
    const double* psi = &psi_[u * m_];
    std::fill(prior, prior + m_, 0.0);
    for (std::size_t from = 0; from < m_; ++from) {
      if (psi[from] == 0.0) continue;
      double weight = psi[from];
      if (!plain) {
        double norm = 0.0;
        for (std::size_t to = 0; to < m_; ++to) {
          norm += hmm_->Transition(from, to) * g[to];
        }
        if (norm <= 0.0) continue;
        weight /= norm;
      }
      for (std::size_t to = 0; to < m_; ++to) {
        prior[to] += weight * hmm_->Transition(from, to);
      }
    }
    if (!plain) {
      for (std::size_t s = 0; s < m_; ++s) prior[s] *= g[s];
    }
  }
}

const PredictiveTable& HmmMaskingSession::Predict() {
  Require(!done(), "session already produced every output");
  if (table_ready_) return table_;
  const std::size_t i = position_;
  ComputePrior();

  const int arity = hmm_->alphabet();
  table_ = PredictiveTable(num_u_, arity);
  const std::size_t rank = gamma_->sensitive().rank(i);
  table_.sensitive = rank < gamma_->sensitive().size();
  for (std::size_t u = 0; u < num_u_; ++u) {
    if (!valid_[u]) continue;
    table_.valid[u] = 1;
    if (table_.sensitive) {
      table_.prob(u, gamma_->assignments().Decode(u)[rank]) = 1.0;
      continue;
    }
    const double* prior = &prior_[u * m_];
    for (std::size_t s = 0; s < m_; ++s) {
      if (prior[s] == 0.0) continue;
      for (Symbol a = 0; a < arity; ++a) {
        table_.prob(u, a) += prior[s] * hmm_->Emission(i, a, s);
      }
    }
  }
  if (table_.NormalizationError() > kPredictiveTolerance) {
    Fail(ErrorCode::kNumerical, "predictive distribution failed to normalize "
                                "at position " +
                                    std::to_string(i + 1));
  }
  table_ready_ = true;
  return table_;
}

Symbol HmmMaskingSession::Step(Symbol x_i, Rng& rng) {
  Require(x_i >= 0 && x_i < hmm_->alphabet(), "symbol outside the alphabet");
  const PredictiveTable& table = Predict();
  const double release = ReleaseProbability(table, x_i, u_obs_);
  const Symbol y = Bernoulli(rng, release) ? x_i : kErased;
  transcript_.push_back({position_, release, y});
  Observe(y);
  return y;
}

void HmmMaskingSession::Observe(Symbol y_i) {
  const PredictiveTable& table = Predict();
  const std::size_t i = position_;
  const int arity = hmm_->alphabet();
  Require(y_i == kErased || (y_i >= 0 && y_i < arity),
          "output symbol outside the alphabet");

  std::vector<double> release(static_cast<std::size_t>(arity));
  for (std::size_t u = 0; u < num_u_; ++u) {
    double* psi = &psi_[u * m_];
    const double* prior = &prior_[u * m_];
    if (!valid_[u]) {
      std::fill(psi, psi + m_, 0.0);
      continue;
    }
    for (Symbol a = 0; a < arity; ++a) {
      release[static_cast<std::size_t>(a)] = ReleaseProbability(table, a, u);
    }
    // p(y_i | s_i, x_K = u, y_{<i}) mixes the emission with the mechanism's
    // own release probabilities.
    double total = 0.0;
    for (std::size_t s = 0; s < m_; ++s) {
      double likelihood;
      if (y_i == kErased) {
        likelihood = 0.0;
        for (Symbol a = 0; a < arity; ++a) {
          likelihood += hmm_->Emission(i, a, s) *
                        (1.0 - release[static_cast<std::size_t>(a)]);
        }
      } else {
        likelihood = hmm_->Emission(i, y_i, s) *
                     release[static_cast<std::size_t>(y_i)];
      }
      psi[s] = prior[s] * likelihood;
      total += psi[s];
    }
    if (total <= 0.0) {
      valid_[u] = 0;
      std::fill(psi, psi + m_, 0.0);
      continue;
    }
    for (std::size_t s = 0; s < m_; ++s) psi[s] /= total;
  }
  outputs_.push_back(y_i);
  ++position_;
  table_ready_ = false;
}

MaskResult MaskHmm(const HmmModel& hmm, const GammaTable& gamma,
                   std::span<const Symbol> x, Rng& rng,
                   HmmSessionOptions options) {
  hmm.CheckSequence(x);
  std::vector<Symbol> values;
  for (std::size_t k : gamma.sensitive().indices()) values.push_back(x[k]);
  HmmMaskingSession session(hmm, gamma, values, options);
  for (std::size_t i = 0; i < hmm.length(); ++i) session.Step(x[i], rng);

  MaskResult result;
  result.masked.symbols = session.outputs();
  result.transcript = session.transcript();
  result.input_in_support = hmm.LogJointProb(x) > -INFINITY;
  return result;
}

MaskResult MaskHmm(const HmmModel& hmm, std::span<const Symbol> x,
                   const IndexSet& sensitive, Rng& rng) {
  const GammaTable gamma = GammaTable::Compute(hmm, sensitive);
  return MaskHmm(hmm, gamma, x, rng);
}

Estimate HmmRateMc(const HmmModel& hmm, const IndexSet& sensitive,
                   std::size_t runs, std::uint64_t seed) {
  const GammaTable gamma = GammaTable::Compute(hmm, sensitive);
  return EstimateRate(runs, seed, hmm.length(), [&](Rng& rng) {
    const Sequence x = hmm.Sample(rng);
    return MaskHmm(hmm, gamma, x, rng);
  });
}

}  // namespace genomask
