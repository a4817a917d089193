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
#ifndef GENOMASK_HARDNESS_H_
#define GENOMASK_HARDNESS_H_

// Parity models built from hitting-set instances. Choosing the processing
// order that minimizes erasures on these models is as hard as finding a
// minimum hitting set.

#include <cstddef>
#include <string>
#include <vector>

#include "genomask/common.h"
#include "genomask/sequence_model.h"

namespace genomask {

// Universe {0..m-1} and a family of non-empty subsets covering it.
struct HittingSetInstance {
  std::size_t m = 0;
  std::vector<std::vector<std::size_t>> sets;

  // Sorts and deduplicates each set; throws kInput on invalid instances.
  void Validate();
  std::size_t num_edges() const;

  // {"m": int, "sets": [[int, ...], ...]} with 1-based elements.
  static HittingSetInstance FromJson(const std::string& text);
  std::string ToJson() const;
};

// Position i < m holds the bits b_{i,j} for every set S_j containing i,
// packed as an integer (bit t is the t-th such set in index order). Position
// m + j holds the parity of the bits on the edges of S_j. Edge bits are
// independent and uniform.
class ParityModel final : public SequenceModel {
 public:
  explicit ParityModel(HittingSetInstance instance);

  std::size_t length() const override { return n_; }
  int arity(std::size_t i) const override { return arities_[i]; }
  double JointProb(std::span<const Symbol> x) const override;
  Sequence Sample(Rng& rng) const override;
  Support EnumerateSupport() const override;

  const HittingSetInstance& instance() const { return instance_; }
  // Parity positions m..m+k-1.
  IndexSet SensitivePositions() const;
  // The sequence induced by edge bits listed in (element, set) order.
  Sequence FromEdgeBits(const std::vector<int>& bits) const;

 private:
  HittingSetInstance instance_;
  std::size_t n_;
  std::vector<int> arities_;
  // incident_[i] lists the sets containing element i, ascending.
  std::vector<std::vector<std::size_t>> incident_;
};

// Elements erased when the elements are processed in `order`: element o is
// erased iff some S_j is contained in {released so far} + {o}.
std::vector<std::size_t> DeterministicErasureSet(
    const HittingSetInstance& instance, const std::vector<std::size_t>& order);

// Runs the generic mechanism on the parity model with `ordering` over all
// m + k positions and checks that every input is masked deterministically,
// erasing exactly DeterministicErasureSet of the induced element order.
bool VerifyDeterministicRule(const HittingSetInstance& instance,
                             const Ordering& ordering);

inline constexpr std::size_t kMaxOrderingSearch = 8;
inline constexpr std::size_t kMaxHittingSetSearch = 20;

struct OrderingSearchResult {
  std::size_t e_star;
  std::vector<std::size_t> order;  // first order attaining e_star
};

// Minimum erasures over all m! element orders. Throws kCapacity for m > 8.
OrderingSearchResult BestOrderingExhaustive(const HittingSetInstance& instance);

struct HittingSetResult {
  std::size_t h_star;
  std::vector<std::size_t> witness;
};

// Throws kCapacity for m > 20.
HittingSetResult MinHittingSetBruteforce(const HittingSetInstance& instance);

bool IsHittingSet(const HittingSetInstance& instance,
                  const std::vector<std::size_t>& elements);

}  // namespace genomask

#endif  // GENOMASK_HARDNESS_H_
