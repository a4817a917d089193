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
#ifndef GENOMASK_SEQUENCE_MODEL_H_
#define GENOMASK_SEQUENCE_MODEL_H_

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "genomask/common.h"
#include "genomask/random.h"

namespace genomask {

// Largest number of sequences any enumeration routine will visit.
inline constexpr std::size_t kEnumerationBudget = std::size_t{1} << 22;

// The sequences with positive probability, in lexicographic order.
struct Support {
  std::vector<Sequence> sequences;
  std::vector<double> probs;

  std::size_t size() const { return sequences.size(); }
};

// Per-position table of p(x_i = a | x_K = u), laid out [u * arity + a].
// `reachable[u]` is false when p(x_K = u) = 0; those rows are zero.
struct SensitiveConditionals {
  std::size_t num_assignments = 1;
  std::vector<double> assignment_probs;  // p(x_K = u)
  std::vector<int> arity;                // per position
  std::vector<std::vector<double>> table;

  bool reachable(std::size_t u) const { return assignment_probs[u] > 0.0; }
};

// A distribution over length-n sequences. Implementations are immutable
// after construction.
class SequenceModel {
 public:
  virtual ~SequenceModel() = default;

  virtual std::size_t length() const = 0;
  virtual int arity(std::size_t i) const = 0;

  // p(x). Throws kInput on length or alphabet mismatch.
  virtual double JointProb(std::span<const Symbol> x) const = 0;
  virtual Sequence Sample(Rng& rng) const = 0;

  // Enumerates every sequence of positive probability. The default walks the
  // full product space and is guarded by kEnumerationBudget.
  virtual Support EnumerateSupport() const;

  // p(x_i | x_K = u) for every position. The default enumerates the support.
  virtual SensitiveConditionals Conditionals(const IndexSet& sensitive) const;

  // Number of sequences in the product space, saturating at SIZE_MAX.
  std::size_t SpaceSize() const;
  std::vector<int> Arities() const;
  AssignmentSpace SensitiveSpace(const IndexSet& sensitive) const;

  void CheckSequence(std::span<const Symbol> x) const;
};

// Dense table over |X|^n, row-major with position 1 most significant.
class ExplicitJointModel final : public SequenceModel {
 public:
  ExplicitJointModel(std::size_t n, int alphabet, std::vector<double> probs);

  std::size_t length() const override { return n_; }
  int arity(std::size_t) const override { return alphabet_; }
  double JointProb(std::span<const Symbol> x) const override;
  Sequence Sample(Rng& rng) const override;
  Support EnumerateSupport() const override;

  std::span<const double> probs() const { return probs_; }
  int alphabet() const { return alphabet_; }

 private:
  std::size_t n_;
  int alphabet_;
  std::vector<double> probs_;
  AssignmentSpace space_;
};

class MarkovChainModel final : public SequenceModel {
 public:
  // transition is row-major |X| x |X|.
  MarkovChainModel(std::size_t n, std::vector<double> initial,
                   std::vector<double> transition);

  // Binary or larger chain with uniform start, staying put with
  // probability `stay` and otherwise moving uniformly to another symbol.
  static MarkovChainModel Symmetric(std::size_t n, int alphabet, double stay);

  std::size_t length() const override { return n_; }
  int arity(std::size_t) const override { return alphabet_; }
  double JointProb(std::span<const Symbol> x) const override;
  Sequence Sample(Rng& rng) const override;

  int alphabet() const { return alphabet_; }
  std::span<const double> initial() const { return initial_; }
  double transition(Symbol from, Symbol to) const {
    return transition_[static_cast<std::size_t>(from * alphabet_ + to)];
  }

 private:
  std::size_t n_;
  int alphabet_;
  std::vector<double> initial_;
  std::vector<double> transition_;
};

// Haplotype-copying HMM: hidden state picks a reference row, the emitted
// symbol copies the panel entry or, with probability theta, is replaced by
// one of the other symbols uniformly.
class HmmModel final : public SequenceModel {
 public:
  // panel[j][i] is the symbol of reference j at position i.
  HmmModel(std::vector<Sequence> panel, double epsilon, double theta,
           int alphabet = 2);

  std::size_t length() const override { return n_; }
  int arity(std::size_t) const override { return alphabet_; }
  double JointProb(std::span<const Symbol> x) const override;
  Sequence Sample(Rng& rng) const override;
  SensitiveConditionals Conditionals(
      const IndexSet& sensitive) const override;

  // log p(x) by a scaled forward pass.
  double LogJointProb(std::span<const Symbol> x) const;

  std::size_t num_states() const { return panel_.size(); }
  double epsilon() const { return epsilon_; }
  double theta() const { return theta_; }
  int alphabet() const { return alphabet_; }
  const std::vector<Sequence>& panel() const { return panel_; }
  Symbol reference(std::size_t state, std::size_t i) const {
    return panel_[state][i];
  }

  double stay_prob() const { return stay_; }
  double switch_prob() const { return switch_; }
  double Transition(std::size_t from, std::size_t to) const {
    return from == to ? stay_ : switch_;
  }
  double Emission(std::size_t i, Symbol a, std::size_t state) const {
    return panel_[state][i] == a ? match_ : mismatch_;
  }

  // HMM restricted to the first `n` positions with the same parameters.
  HmmModel Truncated(std::size_t n) const;

 private:
  std::vector<Sequence> panel_;
  double epsilon_;
  double theta_;
  int alphabet_;
  std::size_t n_;
  double stay_;
  double switch_;
  double match_;
  double mismatch_;
};

// Panel file: one haplotype per line, one character per symbol.
std::vector<Sequence> ReadPanel(const std::string& path);
void WritePanel(const std::string& path, const std::vector<Sequence>& panel);
std::vector<Sequence> RandomPanel(std::size_t m, std::size_t n, int alphabet,
                                  Rng& rng);

// Model config JSON. Accepted shapes:
//   {"epsilon": e, "theta": t, "panel_path": "..."}           (HMM)
//   {"type": "hmm", "epsilon": e, "theta": t, "panel": ["0101", ...]}
//   {"type": "markov", "n": n, "initial": [...], "transition": [[...]]}
//   {"type": "explicit", "n": n, "alphabet": a, "probs": [...]}
std::unique_ptr<SequenceModel> LoadModelConfig(const std::string& json_text);

}  // namespace genomask

#endif  // GENOMASK_SEQUENCE_MODEL_H_
