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
#ifndef GENOMASK_INFO_THEORY_H_
#define GENOMASK_INFO_THEORY_H_

#include <cstddef>
#include <span>

namespace genomask {

// All quantities in bits, with 0 log 0 = 0. Inputs must be non-negative and
// sum to 1 within 1e-9, otherwise kInput is thrown.

double Entropy(std::span<const double> dist);

double BinaryEntropy(double p);

// joint is row-major rows x cols over (A, B).
double MutualInformation(std::span<const double> joint, std::size_t rows,
                         std::size_t cols);

// D(p || q); +infinity when p puts mass where q has none.
double KlDivergence(std::span<const double> p, std::span<const double> q);

}  // namespace genomask

#endif  // GENOMASK_INFO_THEORY_H_
