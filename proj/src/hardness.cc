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
#include "genomask/hardness.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "genomask/mechanism.h"
#include "json.hpp"

namespace genomask {

void HittingSetInstance::Validate() {
  Require(m >= 1, "universe must be non-empty");
  Require(!sets.empty(), "instance needs at least one set");
  std::vector<char> covered(m, 0);
  for (auto& set : sets) {
    Require(!set.empty(), "sets must be non-empty");
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    for (std::size_t e : set) {
      Require(e < m, "set element outside the universe");
      covered[e] = 1;
    }
  }
  Require(std::all_of(covered.begin(), covered.end(), [](char c) { return c; }),
          "sets must cover the universe");
}

std::size_t HittingSetInstance::num_edges() const {
  std::size_t total = 0;
  for (const auto& set : sets) total += set.size();
  return total;
}

HittingSetInstance HittingSetInstance::FromJson(const std::string& text) {
  HittingSetInstance instance;
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    instance.m = doc.at("m").get<std::size_t>();
    for (const auto& set : doc.at("sets")) {
      std::vector<std::size_t> members;
      for (const auto& e : set) {
        const long long v = e.get<long long>();
        Require(v >= 1, "set elements are 1-based");
        members.push_back(static_cast<std::size_t>(v - 1));
      }
      instance.sets.push_back(std::move(members));
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kInput, std::string("bad hitting-set JSON: ") + e.what());
  }
  instance.Validate();
  return instance;
}

std::string HittingSetInstance::ToJson() const {
  nlohmann::json doc;
  doc["m"] = m;
  nlohmann::json family = nlohmann::json::array();
  for (const auto& set : sets) {
    nlohmann::json members = nlohmann::json::array();
    for (std::size_t e : set) members.push_back(e + 1);
    family.push_back(std::move(members));
  }
  doc["sets"] = std::move(family);
  return doc.dump();
}

// ---------------------------------------------------------------------------

ParityModel::ParityModel(HittingSetInstance instance)
    : instance_(std::move(instance)) {
  instance_.Validate();
  const std::size_t m = instance_.m;
  n_ = m + instance_.sets.size();
  incident_.assign(m, {});
  for (std::size_t j = 0; j < instance_.sets.size(); ++j) {
    for (std::size_t e : instance_.sets[j]) incident_[e].push_back(j);
  }
  Require(instance_.num_edges() <= 22, "too many edges for the parity model");
  for (std::size_t i = 0; i < m; ++i) {
    Require(incident_[i].size() <= 20, "element degree too large");
    arities_.push_back(1 << incident_[i].size());
  }
  arities_.resize(n_, 2);
}

IndexSet ParityModel::SensitivePositions() const {
  std::vector<std::size_t> positions(instance_.sets.size());
  std::iota(positions.begin(), positions.end(), instance_.m);
  return IndexSet(positions, n_);
}

Sequence ParityModel::FromEdgeBits(const std::vector<int>& bits) const {
  Require(bits.size() == instance_.num_edges(), "edge bit count mismatch");
  Sequence x(n_, 0);
  std::size_t edge = 0;
  for (std::size_t i = 0; i < instance_.m; ++i) {
    for (std::size_t t = 0; t < incident_[i].size(); ++t, ++edge) {
      const int b = bits[edge] & 1;
      x[i] |= b << t;
      x[instance_.m + incident_[i][t]] ^= b;
    }
  }
  return x;
}

double ParityModel::JointProb(std::span<const Symbol> x) const {
  CheckSequence(x);
  std::vector<int> parity(instance_.sets.size(), 0);
  for (std::size_t i = 0; i < instance_.m; ++i) {
    for (std::size_t t = 0; t < incident_[i].size(); ++t) {
      parity[incident_[i][t]] ^= (x[i] >> t) & 1;
    }
  }
  for (std::size_t j = 0; j < parity.size(); ++j) {
    if (parity[j] != x[instance_.m + j]) return 0.0;
  }
  return std::ldexp(1.0, -static_cast<int>(instance_.num_edges()));
}

Sequence ParityModel::Sample(Rng& rng) const {
  std::vector<int> bits(instance_.num_edges());
  for (int& b : bits) b = Bernoulli(rng, 0.5) ? 1 : 0;
  return FromEdgeBits(bits);
}

Support ParityModel::EnumerateSupport() const {
  const std::size_t edges = instance_.num_edges();
  const std::size_t count = std::size_t{1} << edges;
  Require(count <= kEnumerationBudget, "parity model too large to enumerate");
  Support support;
  support.sequences.reserve(count);
  std::vector<int> bits(edges);
  for (std::size_t code = 0; code < count; ++code) {
    for (std::size_t e = 0; e < edges; ++e) bits[e] = (code >> e) & 1;
    support.sequences.push_back(FromEdgeBits(bits));
  }
  std::sort(support.sequences.begin(), support.sequences.end());
  support.probs.assign(count, std::ldexp(1.0, -static_cast<int>(edges)));
  return support;
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> DeterministicErasureSet(
    const HittingSetInstance& instance, const std::vector<std::size_t>& order) {
  Require(order.size() == instance.m, "order must list every element");
  std::vector<char> seen(instance.m, 0);
  for (std::size_t o : order) {
    Require(o < instance.m && !seen[o], "order must be a permutation");
    seen[o] = 1;
  }
  std::vector<char> released(instance.m, 0);
  std::vector<std::size_t> erased;
  for (std::size_t o : order) {
    const bool erase =
        std::any_of(instance.sets.begin(), instance.sets.end(), [&](const auto& set) {
          return std::binary_search(set.begin(), set.end(), o) &&
                 std::all_of(set.begin(), set.end(), [&](std::size_t e) {
                   return e == o || released[e];
                 });
        });
    if (erase) {
      erased.push_back(o);
    } else {
      released[o] = 1;
    }
  }
  std::sort(erased.begin(), erased.end());
  return erased;
}

bool VerifyDeterministicRule(const HittingSetInstance& instance,
                             const Ordering& ordering) {
  const ParityModel model(instance);
  const std::size_t m = instance.m;
  Require(ordering.size() == model.length(), "ordering must cover every position");
  std::vector<std::size_t> order;
  for (std::size_t p : ordering.perm()) {
    if (p < m) order.push_back(p);
  }
  const std::vector<std::size_t> expected = DeterministicErasureSet(instance, order);
  std::vector<char> expect_erased(model.length(), 1);
  for (std::size_t i = 0; i < m; ++i) {
    expect_erased[i] = std::binary_search(expected.begin(), expected.end(), i);
  }

  const ExactMechanism mechanism(model, model.SensitivePositions(), ordering);
  for (const Sequence& x : mechanism.oracle().support().sequences) {
    const auto outputs = mechanism.Kernel(x);
    if (outputs.size() != 1 || std::abs(outputs[0].second - 1.0) > 1e-12) {
      return false;
    }
    const Sequence& y = outputs[0].first;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if ((y[i] == kErased) != static_cast<bool>(expect_erased[i])) return false;
    }
  }
  return true;
}

OrderingSearchResult BestOrderingExhaustive(const HittingSetInstance& instance) {
  if (instance.m > kMaxOrderingSearch) {
    Fail(ErrorCode::kCapacity, "exhaustive ordering search limited to m <= " +
                                   std::to_string(kMaxOrderingSearch));
  }
  std::vector<std::size_t> order(instance.m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  OrderingSearchResult best{instance.m + 1, order};
  do {
    const std::size_t e = DeterministicErasureSet(instance, order).size();
    if (e < best.e_star) best = {e, order};
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

bool IsHittingSet(const HittingSetInstance& instance,
                  const std::vector<std::size_t>& elements) {
  for (const auto& set : instance.sets) {
    const bool hit = std::any_of(set.begin(), set.end(), [&](std::size_t e) {
      return std::find(elements.begin(), elements.end(), e) != elements.end();
    });
    if (!hit) return false;
  }
  return true;
}

HittingSetResult MinHittingSetBruteforce(const HittingSetInstance& instance) {
  if (instance.m > kMaxHittingSetSearch) {
    Fail(ErrorCode::kCapacity, "brute-force hitting set limited to m <= " +
                                   std::to_string(kMaxHittingSetSearch));
  }
  std::vector<std::uint32_t> set_masks;
  for (const auto& set : instance.sets) {
    std::uint32_t mask = 0;
    for (std::size_t e : set) mask |= std::uint32_t{1} << e;
    set_masks.push_back(mask);
  }
  std::uint32_t best_mask = (std::uint32_t{1} << instance.m) - 1;
  int best_size = std::popcount(best_mask);
  for (std::uint32_t v = 0; v < (std::uint32_t{1} << instance.m); ++v) {
    const int size = std::popcount(v);
    if (size >= best_size) continue;
    const bool hits = std::all_of(set_masks.begin(), set_masks.end(),
                                  [v](std::uint32_t s) { return (s & v) != 0; });
    if (hits) {
      best_size = size;
      best_mask = v;
    }
  }
  HittingSetResult result{static_cast<std::size_t>(best_size), {}};
  for (std::size_t e = 0; e < instance.m; ++e) {
    if (best_mask >> e & 1) result.witness.push_back(e);
  }
  return result;
}

}  // namespace genomask
