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
#ifndef GENOMASK_COMMON_H_
#define GENOMASK_COMMON_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace genomask {

// Symbols are 0..arity-1. The erasure symbol is kErased.
using Symbol = int;
inline constexpr Symbol kErased = -1;
using Sequence = std::vector<Symbol>;

enum class ErrorCode {
  kInput,
  kCapacity,
  kNumerical,
  kImpossibleContext,
  kDegenerate,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void Fail(ErrorCode code, const std::string& message);

inline void Require(bool condition, const std::string& message) {
  if (!condition) Fail(ErrorCode::kInput, message);
}

// Probabilities that leave [0,1] by at most this much are clamped.
inline constexpr double kClampTolerance = 1e-12;
// Larger excursions up to this bound are clamped too, beyond it they are a
// numerical-consistency error.
inline constexpr double kConsistencyTolerance = 1e-9;

double ClampProbability(double p);

// Sorted, duplicate-free set of 0-based positions.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::vector<std::size_t> indices, std::size_t n);

  std::span<const std::size_t> indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(std::size_t i) const;
  // Position of i inside the set, or size() if absent.
  std::size_t rank(std::size_t i) const;

 private:
  std::vector<std::size_t> indices_;
};

// Processing order of positions: a permutation of 0..n-1.
class Ordering {
 public:
  Ordering() = default;
  explicit Ordering(std::vector<std::size_t> perm);

  static Ordering Linear(std::size_t n);

  std::span<const std::size_t> perm() const { return perm_; }
  std::size_t size() const { return perm_.size(); }
  std::size_t operator[](std::size_t t) const { return perm_[t]; }

 private:
  std::vector<std::size_t> perm_;
};

// Mixed-radix enumeration of assignments to a set of positions with given
// arities; the first position is most significant.
class AssignmentSpace {
 public:
  AssignmentSpace() = default;
  explicit AssignmentSpace(std::vector<int> arities);

  std::size_t size() const { return size_; }
  std::span<const int> arities() const { return arities_; }
  std::size_t Encode(std::span<const Symbol> values) const;
  std::vector<Symbol> Decode(std::size_t index) const;

 private:
  std::vector<int> arities_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

// Text form: symbols as digits/letters, erasures as '*'.
std::string FormatSequence(std::span<const Symbol> symbols);
Sequence ParseSequence(const std::string& text);

}  // namespace genomask

#endif  // GENOMASK_COMMON_H_
