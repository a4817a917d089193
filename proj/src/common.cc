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
#include "genomask/common.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "genomask/random.h"

namespace genomask {

void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

double ClampProbability(double p) {
  if (std::isnan(p) || p < -kConsistencyTolerance ||
      p > 1.0 + kConsistencyTolerance) {
    Fail(ErrorCode::kNumerical,
         "probability " + std::to_string(p) + " outside [0,1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

IndexSet::IndexSet(std::vector<std::size_t> indices, std::size_t n)
    : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()),
                 indices_.end());
  for (std::size_t i : indices_) {
    Require(i < n, "sensitive index " + std::to_string(i + 1) +
                       " exceeds sequence length " + std::to_string(n));
  }
}

bool IndexSet::contains(std::size_t i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

std::size_t IndexSet::rank(std::size_t i) const {
  auto it = std::lower_bound(indices_.begin(), indices_.end(), i);
  if (it == indices_.end() || *it != i) return indices_.size();
  return static_cast<std::size_t>(it - indices_.begin());
}

Ordering::Ordering(std::vector<std::size_t> perm) : perm_(std::move(perm)) {
  std::vector<bool> seen(perm_.size(), false);
  for (std::size_t p : perm_) {
    Require(p < perm_.size() && !seen[p], "ordering is not a permutation");
    seen[p] = true;
  }
}

Ordering Ordering::Linear(std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  return Ordering(std::move(perm));
}

AssignmentSpace::AssignmentSpace(std::vector<int> arities)
    : arities_(std::move(arities)), strides_(arities_.size()) {
  for (std::size_t j = arities_.size(); j-- > 0;) {
    Require(arities_[j] >= 1, "arity must be positive");
    strides_[j] = size_;
    size_ *= static_cast<std::size_t>(arities_[j]);
  }
}

std::size_t AssignmentSpace::Encode(std::span<const Symbol> values) const {
  std::size_t index = 0;
  for (std::size_t j = 0; j < arities_.size(); ++j) {
    index += static_cast<std::size_t>(values[j]) * strides_[j];
  }
  return index;
}

std::vector<Symbol> AssignmentSpace::Decode(std::size_t index) const {
  std::vector<Symbol> values(arities_.size());
  for (std::size_t j = 0; j < arities_.size(); ++j) {
    values[j] = static_cast<Symbol>(index / strides_[j]);
    index %= strides_[j];
  }
  return values;
}

std::string FormatSequence(std::span<const Symbol> symbols) {
  static constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string out;
  out.reserve(symbols.size());
  for (Symbol s : symbols) {
    if (s == kErased) {
      out.push_back('*');
    } else {
      Require(s >= 0 && s < 36, "symbol out of printable range");
      out.push_back(kDigits[s]);
    }
  }
  return out;
}

Sequence ParseSequence(const std::string& text) {
  Sequence out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '*') {
      out.push_back(kErased);
    } else if (c >= '0' && c <= '9') {
      out.push_back(c - '0');
    } else if (c >= 'a' && c <= 'z') {
      out.push_back(c - 'a' + 10);
    } else {
      Fail(ErrorCode::kInput, std::string("invalid symbol character '") + c +
                                  "'");
    }
  }
  return out;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::size_t SampleCategorical(Rng& rng, std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double target = Uniform01(rng) * total;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (target < weights[k]) return k;
    target -= weights[k];
  }
  // Round-off: return the last index with positive weight.
  for (std::size_t k = weights.size(); k-- > 0;) {
    if (weights[k] > 0.0) return k;
  }
  return 0;
}

}  // namespace genomask
