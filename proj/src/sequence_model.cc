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
#include "genomask/sequence_model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace genomask {
namespace {

constexpr double kNormalizationTolerance = 1e-12;

void CheckDistribution(std::span<const double> probs, const char* what) {
  double total = 0.0;
  for (double p : probs) {
    Require(p >= 0.0 && std::isfinite(p),
            std::string(what) + " has a negative or non-finite entry");
    total += p;
  }
  Require(std::abs(total - 1.0) <= kNormalizationTolerance,
          std::string(what) + " does not sum to 1");
}

// Odometer over a product space.
bool Advance(Sequence& x, std::span<const int> arities) {
  for (std::size_t j = x.size(); j-- > 0;) {
    if (++x[j] < arities[j]) return true;
    x[j] = 0;
  }
  return false;
}

}  // namespace

std::size_t SequenceModel::SpaceSize() const {
  std::size_t size = 1;
  for (std::size_t i = 0; i < length(); ++i) {
    auto a = static_cast<std::size_t>(arity(i));
    if (size > std::numeric_limits<std::size_t>::max() / a) {
      return std::numeric_limits<std::size_t>::max();
    }
    size *= a;
  }
  return size;
}

std::vector<int> SequenceModel::Arities() const {
  std::vector<int> arities(length());
  for (std::size_t i = 0; i < length(); ++i) arities[i] = arity(i);
  return arities;
}

AssignmentSpace SequenceModel::SensitiveSpace(const IndexSet& sensitive) const {
  std::vector<int> arities;
  arities.reserve(sensitive.size());
  for (std::size_t k : sensitive.indices()) arities.push_back(arity(k));
  return AssignmentSpace(std::move(arities));
}

void SequenceModel::CheckSequence(std::span<const Symbol> x) const {
  Require(x.size() == length(), "sequence length " + std::to_string(x.size()) +
                                    " does not match model length " +
                                    std::to_string(length()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    Require(x[i] >= 0 && x[i] < arity(i),
            "symbol at position " + std::to_string(i + 1) +
                " outside the alphabet");
  }
}

Support SequenceModel::EnumerateSupport() const {
  if (SpaceSize() > kEnumerationBudget) {
    Fail(ErrorCode::kCapacity, "sequence space too large to enumerate");
  }
  const std::vector<int> arities = Arities();
  Support support;
  Sequence x(length(), 0);
  do {
    double p = JointProb(x);
    if (p > 0.0) {
      support.sequences.push_back(x);
      support.probs.push_back(p);
    }
  } while (Advance(x, arities));
  return support;
}

SensitiveConditionals SequenceModel::Conditionals(
    const IndexSet& sensitive) const {
  const Support support = EnumerateSupport();
  const AssignmentSpace space = SensitiveSpace(sensitive);
  const std::size_t n = length();

  SensitiveConditionals out;
  out.num_assignments = space.size();
  out.assignment_probs.assign(space.size(), 0.0);
  out.arity = Arities();
  out.table.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.table[i].assign(space.size() * static_cast<std::size_t>(arity(i)),
                        0.0);
  }

  std::vector<Symbol> u(sensitive.size());
  for (std::size_t s = 0; s < support.size(); ++s) {
    const Sequence& x = support.sequences[s];
    for (std::size_t j = 0; j < sensitive.size(); ++j) {
      u[j] = x[sensitive.indices()[j]];
    }
    const std::size_t code = space.Encode(u);
    out.assignment_probs[code] += support.probs[s];
    for (std::size_t i = 0; i < n; ++i) {
      out.table[i][code * static_cast<std::size_t>(arity(i)) +
                   static_cast<std::size_t>(x[i])] += support.probs[s];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = static_cast<std::size_t>(arity(i));
    for (std::size_t code = 0; code < space.size(); ++code) {
      const double pu = out.assignment_probs[code];
      if (pu <= 0.0) continue;
      for (std::size_t v = 0; v < a; ++v) out.table[i][code * a + v] /= pu;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

ExplicitJointModel::ExplicitJointModel(std::size_t n, int alphabet,
                                       std::vector<double> probs)
    : n_(n),
      alphabet_(alphabet),
      probs_(std::move(probs)),
      space_(std::vector<int>(n, alphabet)) {
  Require(n >= 1, "explicit model needs n >= 1");
  Require(alphabet >= 2, "alphabet size must be at least 2");
  if (space_.size() > kEnumerationBudget) {
    Fail(ErrorCode::kCapacity, "explicit table too large");
  }
  Require(probs_.size() == space_.size(),
          "explicit table must have |X|^n entries");
  CheckDistribution(probs_, "explicit table");
}

double ExplicitJointModel::JointProb(std::span<const Symbol> x) const {
  CheckSequence(x);
  return probs_[space_.Encode(x)];
}

Sequence ExplicitJointModel::Sample(Rng& rng) const {
  return space_.Decode(SampleCategorical(rng, probs_));
}

Support ExplicitJointModel::EnumerateSupport() const {
  Support support;
  for (std::size_t code = 0; code < probs_.size(); ++code) {
    if (probs_[code] > 0.0) {
      support.sequences.push_back(space_.Decode(code));
      support.probs.push_back(probs_[code]);
    }
  }
  return support;
}

// ---------------------------------------------------------------------------

MarkovChainModel::MarkovChainModel(std::size_t n, std::vector<double> initial,
                                   std::vector<double> transition)
    : n_(n),
      alphabet_(static_cast<int>(initial.size())),
      initial_(std::move(initial)),
      transition_(std::move(transition)) {
  Require(n >= 1, "Markov model needs n >= 1");
  Require(alphabet_ >= 2, "alphabet size must be at least 2");
  Require(transition_.size() == initial_.size() * initial_.size(),
          "transition matrix must be |X| x |X|");
  CheckDistribution(initial_, "initial distribution");
  const auto a = static_cast<std::size_t>(alphabet_);
  for (std::size_t r = 0; r < a; ++r) {
    CheckDistribution(std::span<const double>(transition_).subspan(r * a, a),
                      "transition row");
  }
}

MarkovChainModel MarkovChainModel::Symmetric(std::size_t n, int alphabet,
                                             double stay) {
  Require(stay >= 0.0 && stay <= 1.0, "stay probability outside [0,1]");
  const auto a = static_cast<std::size_t>(alphabet);
  std::vector<double> initial(a, 1.0 / static_cast<double>(a));
  std::vector<double> transition(a * a, (1.0 - stay) / static_cast<double>(a - 1));
  for (std::size_t r = 0; r < a; ++r) transition[r * a + r] = stay;
  return MarkovChainModel(n, std::move(initial), std::move(transition));
}

double MarkovChainModel::JointProb(std::span<const Symbol> x) const {
  CheckSequence(x);
  double p = initial_[static_cast<std::size_t>(x[0])];
  for (std::size_t i = 1; i < n_; ++i) p *= transition(x[i - 1], x[i]);
  return p;
}

Sequence MarkovChainModel::Sample(Rng& rng) const {
  const auto a = static_cast<std::size_t>(alphabet_);
  Sequence x(n_);
  x[0] = static_cast<Symbol>(SampleCategorical(rng, initial_));
  for (std::size_t i = 1; i < n_; ++i) {
    auto row = std::span<const double>(transition_).subspan(
        static_cast<std::size_t>(x[i - 1]) * a, a);
    x[i] = static_cast<Symbol>(SampleCategorical(rng, row));
  }
  return x;
}

// ---------------------------------------------------------------------------

HmmModel::HmmModel(std::vector<Sequence> panel, double epsilon, double theta,
                   int alphabet)
    : panel_(std::move(panel)),
      epsilon_(epsilon),
      theta_(theta),
      alphabet_(alphabet) {
  Require(!panel_.empty(), "panel must contain at least one haplotype");
  Require(alphabet_ >= 2, "alphabet size must be at least 2");
  Require(epsilon_ >= 0.0 && epsilon_ <= 1.0, "epsilon outside [0,1]");
  Require(theta_ >= 0.0 && theta_ <= 1.0, "theta outside [0,1]");
  n_ = panel_.front().size();
  Require(n_ >= 1, "panel rows must be non-empty");
  for (const Sequence& row : panel_) {
    Require(row.size() == n_, "panel rows have different lengths");
    for (Symbol s : row) {
      Require(s >= 0 && s < alphabet_, "panel symbol outside alphabet");
    }
  }
  const std::size_t m = panel_.size();
  if (m == 1) {
    stay_ = 1.0;
    switch_ = 0.0;
  } else {
    stay_ = 1.0 - epsilon_;
    switch_ = epsilon_ / static_cast<double>(m - 1);
  }
  match_ = 1.0 - theta_;
  mismatch_ = theta_ / static_cast<double>(alphabet_ - 1);
}

double HmmModel::LogJointProb(std::span<const Symbol> x) const {
  CheckSequence(x);
  const std::size_t m = panel_.size();
  std::vector<double> alpha(m, 1.0 / static_cast<double>(m));
  std::vector<double> next(m);
  double log_scale = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (i > 0) {
      for (std::size_t s = 0; s < m; ++s) {
        double acc = 0.0;
        for (std::size_t r = 0; r < m; ++r) acc += alpha[r] * Transition(r, s);
        next[s] = acc;
      }
      alpha.swap(next);
    }
    double total = 0.0;
    for (std::size_t s = 0; s < m; ++s) {
      alpha[s] *= Emission(i, x[i], s);
      total += alpha[s];
    }
    if (total <= 0.0) return -std::numeric_limits<double>::infinity();
    for (double& v : alpha) v /= total;
    log_scale += std::log(total);
  }
  return log_scale;
}

double HmmModel::JointProb(std::span<const Symbol> x) const {
  return std::exp(LogJointProb(x));
}

Sequence HmmModel::Sample(Rng& rng) const {
  const std::size_t m = panel_.size();
  Sequence x(n_);
  auto state = static_cast<std::size_t>(UniformIndex(rng, m));
  for (std::size_t i = 0; i < n_; ++i) {
    if (i > 0 && m > 1 && Bernoulli(rng, epsilon_)) {
      // Switch to one of the other m-1 references uniformly.
      auto other = static_cast<std::size_t>(UniformIndex(rng, m - 1));
      state = other >= state ? other + 1 : other;
    }
    Symbol copied = panel_[state][i];
    if (Bernoulli(rng, theta_)) {
      auto other = static_cast<Symbol>(
          UniformIndex(rng, static_cast<std::uint64_t>(alphabet_ - 1)));
      copied = other >= copied ? other + 1 : other;
    }
    x[i] = copied;
  }
  return x;
}

SensitiveConditionals HmmModel::Conditionals(const IndexSet& sensitive) const {
  // Forward messages carry p(x_{K<i} = u_-, s_i), backward messages
  // p(x_{K>i} = u_+ | s_i). Only |K| emission factors enter, so no scaling.
  const std::size_t m = panel_.size();
  const AssignmentSpace space = SensitiveSpace(sensitive);
  const std::size_t num_u = space.size();
  const auto a = static_cast<std::size_t>(alphabet_);

  SensitiveConditionals out;
  out.num_assignments = num_u;
  out.assignment_probs.assign(num_u, 0.0);
  out.arity.assign(n_, alphabet_);
  out.table.assign(n_, std::vector<double>(num_u * a, 0.0));

  std::vector<std::vector<double>> forward(n_, std::vector<double>(m));
  std::vector<std::vector<double>> backward(n_, std::vector<double>(m));
  std::vector<double> tmp(m);

  for (std::size_t code = 0; code < num_u; ++code) {
    const std::vector<Symbol> u = space.Decode(code);
    auto evidence = [&](std::size_t i, std::size_t s) {
      std::size_t r = sensitive.rank(i);
      return r < sensitive.size() ? Emission(i, u[r], s) : 1.0;
    };

    std::fill(forward[0].begin(), forward[0].end(), 1.0 / static_cast<double>(m));
    for (std::size_t i = 1; i < n_; ++i) {
      for (std::size_t r = 0; r < m; ++r) tmp[r] = forward[i - 1][r] * evidence(i - 1, r);
      for (std::size_t s = 0; s < m; ++s) {
        double acc = 0.0;
        for (std::size_t r = 0; r < m; ++r) acc += tmp[r] * Transition(r, s);
        forward[i][s] = acc;
      }
    }
    std::fill(backward[n_ - 1].begin(), backward[n_ - 1].end(), 1.0);
    for (std::size_t i = n_ - 1; i-- > 0;) {
      for (std::size_t r = 0; r < m; ++r) tmp[r] = backward[i + 1][r] * evidence(i + 1, r);
      for (std::size_t s = 0; s < m; ++s) {
        double acc = 0.0;
        for (std::size_t r = 0; r < m; ++r) acc += Transition(s, r) * tmp[r];
        backward[i][s] = acc;
      }
    }

    double pu = 0.0;
    for (std::size_t s = 0; s < m; ++s) {
      pu += forward[0][s] * evidence(0, s) * backward[0][s];
    }
    out.assignment_probs[code] = pu;
    if (pu <= 0.0) continue;

    for (std::size_t i = 0; i < n_; ++i) {
      std::size_t r = sensitive.rank(i);
      double* row = &out.table[i][code * a];
      if (r < sensitive.size()) {
        row[static_cast<std::size_t>(u[r])] = 1.0;
        continue;
      }
      for (std::size_t v = 0; v < a; ++v) {
        double acc = 0.0;
        for (std::size_t s = 0; s < m; ++s) {
          acc += forward[i][s] * Emission(i, static_cast<Symbol>(v), s) *
                 backward[i][s];
        }
        row[v] = acc / pu;
      }
    }
  }
  return out;
}

HmmModel HmmModel::Truncated(std::size_t n) const {
  Require(n >= 1 && n <= n_, "truncation length out of range");
  std::vector<Sequence> rows;
  rows.reserve(panel_.size());
  for (const Sequence& row : panel_) {
    rows.emplace_back(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n));
  }
  return HmmModel(std::move(rows), epsilon_, theta_, alphabet_);
}

// ---------------------------------------------------------------------------

std::vector<Sequence> ReadPanel(const std::string& path) {
  std::ifstream in(path);
  Require(in.good(), "cannot open panel file " + path);
  std::vector<Sequence> panel;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Sequence row = ParseSequence(line);
    for (Symbol s : row) Require(s != kErased, "panel contains '*'");
    panel.push_back(std::move(row));
  }
  Require(!panel.empty(), "panel file " + path + " is empty");
  return panel;
}

void WritePanel(const std::string& path, const std::vector<Sequence>& panel) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kInput, "cannot write panel file " + path);
  for (const Sequence& row : panel) out << FormatSequence(row) << '\n';
  if (!out) Fail(ErrorCode::kInput, "failed writing panel file " + path);
}

std::vector<Sequence> RandomPanel(std::size_t m, std::size_t n, int alphabet,
                                  Rng& rng) {
  Require(m >= 1 && n >= 1, "panel dimensions must be positive");
  Require(alphabet >= 2 && alphabet <= 36, "alphabet size must be in [2,36]");
  std::vector<Sequence> panel(m, Sequence(n));
  for (Sequence& row : panel) {
    for (Symbol& s : row) {
      s = static_cast<Symbol>(
          UniformIndex(rng, static_cast<std::uint64_t>(alphabet)));
    }
  }
  return panel;
}

std::unique_ptr<SequenceModel> LoadModelConfig(const std::string& json_text) {
  nlohmann::json config;
  try {
    config = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kInput, std::string("invalid model config: ") + e.what());
  }
  try {
    const std::string type = config.value("type", std::string("hmm"));
    if (type == "hmm") {
      std::vector<Sequence> panel;
      if (config.contains("panel_path")) {
        panel = ReadPanel(config.at("panel_path").get<std::string>());
      } else {
        for (const auto& row : config.at("panel")) {
          panel.push_back(ParseSequence(row.get<std::string>()));
        }
      }
      return std::make_unique<HmmModel>(std::move(panel),
                                        config.at("epsilon").get<double>(),
                                        config.at("theta").get<double>(),
                                        config.value("alphabet", 2));
    }
    if (type == "markov") {
      std::vector<double> transition;
      for (const auto& row : config.at("transition")) {
        for (const auto& v : row) transition.push_back(v.get<double>());
      }
      return std::make_unique<MarkovChainModel>(
          config.at("n").get<std::size_t>(),
          config.at("initial").get<std::vector<double>>(),
          std::move(transition));
    }
    if (type == "explicit") {
      return std::make_unique<ExplicitJointModel>(
          config.at("n").get<std::size_t>(), config.value("alphabet", 2),
          config.at("probs").get<std::vector<double>>());
    }
    Fail(ErrorCode::kInput, "unknown model type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kInput, std::string("invalid model config: ") + e.what());
  }
}

}  // namespace genomask
