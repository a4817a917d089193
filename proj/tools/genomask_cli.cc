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

// genomask: command-line front end for the erasure mechanism.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "genomask/baselines.h"
#include "genomask/bounds.h"
#include "genomask/common.h"
#include "genomask/experiments.h"
#include "genomask/hardness.h"
#include "genomask/hmm_mechanism.h"
#include "genomask/mechanism.h"
#include "genomask/sequence_model.h"
#include "json.hpp"

namespace {

using namespace genomask;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitNumerical = 4;

constexpr const char* kColumnsHelp = R"(CSV columns by experiment:
  fig3        experiment,n,m,epsilon,theta,omega,erasure_rate,erasure_stderr,
              leakage,leakage_stderr,runs,seed
              (first row is the mechanism, omega empty; leakage is
              I(X_K; released)/H(X_K))
  fig4        experiment,n,m,epsilon,theta,rate,rate_stderr,bound,gap,runs,seed
  fig5        experiment,instance,n,m,epsilon,theta,mechanism_rate,lp_rate,
              bound,lp_status,lp_iterations,seed
  robustness  experiment,pair,family,n,p_param,q_param,leakage_bits,kl_bits,
              leakage_under_q_bits,bound_holds,seed
  hardness    experiment,instance,m,k,edges,e_star,h_star,equal,order,witness,
              sets,seed
--json writes the same rows as an array of objects.)";

struct Options {
  std::string panel;
  std::string config;
  std::string q_config;
  double epsilon = 0.1;
  double theta = 0.01;
  int alphabet = 2;
  std::string k = "1";
  std::string omega;
  std::string epsilons;
  std::string thetas;
  std::size_t runs = 1000;
  std::uint64_t seed = 1;
  std::string order;
  std::string out;
  bool json = false;
  bool exact = false;

  // gen-panel and generated panels
  std::size_t m = 100;
  std::size_t n = 100;

  // mask
  std::string input;
  bool sample = false;
  std::string transcript;

  // window
  std::string mode = "prefix";

  // robustness / hardness
  std::size_t pairs = 100;
  std::size_t length = 6;
  std::string instance;
  std::size_t family = 0;
  std::size_t max_m = 5;
  std::size_t max_k = 4;

  std::string experiment;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kInput, "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void Emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kInput, "cannot write " + path);
  out << text;
  if (!out) Fail(ErrorCode::kInput, "failed writing " + path);
}

void EmitTable(const ResultTable& table, const Options& o) {
  Emit(o.json ? table.ToJson() : table.ToCsv(), o.out);
}

std::unique_ptr<SequenceModel> BuildModel(const Options& o) {
  if (!o.config.empty()) return LoadModelConfig(ReadFile(o.config));
  Require(!o.panel.empty(), "either --panel or --config is required");
  return std::make_unique<HmmModel>(ReadPanel(o.panel), o.epsilon, o.theta,
                                    o.alphabet);
}

Ordering BuildOrdering(const Options& o, std::size_t n) {
  if (o.order.empty()) return Ordering::Linear(n);
  std::vector<std::size_t> perm;
  for (std::size_t v : ParseSizeList(o.order)) {
    Require(v >= 1, "--order is 1-based");
    perm.push_back(v - 1);
  }
  Require(perm.size() == n, "--order must list every position once");
  return Ordering(std::move(perm));
}

bool IsLinear(const Ordering& ordering) {
  for (std::size_t t = 0; t < ordering.size(); ++t) {
    if (ordering[t] != t) return false;
  }
  return true;
}

std::vector<Sequence> PanelOrGenerated(const Options& o) {
  if (!o.panel.empty()) return ReadPanel(o.panel);
  Rng rng = StreamFor(o.seed, 0);
  return RandomPanel(o.m, o.n, o.alphabet, rng);
}

// ---------------------------------------------------------------------------

int CmdGenPanel(const Options& o) {
  Rng rng = StreamFor(o.seed, 0);
  const std::vector<Sequence> panel = RandomPanel(o.m, o.n, o.alphabet, rng);
  if (o.out.empty()) {
    for (const Sequence& row : panel) std::cout << FormatSequence(row) << '\n';
  } else {
    WritePanel(o.out, panel);
  }
  return kExitOk;
}

int CmdMask(const Options& o) {
  const auto model = BuildModel(o);
  const std::size_t n = model->length();
  const IndexSet sensitive = ParseIndexList(o.k, n);
  const Ordering ordering = BuildOrdering(o, n);
  Rng rng = StreamFor(o.seed, 0);

  Sequence x;
  if (o.sample) {
    x = model->Sample(rng);
  } else {
    Require(!o.input.empty(), "provide --input or --sample");
    x = ParseSequence(o.input);
  }
  model->CheckSequence(x);

  MaskResult result;
  const auto* hmm = dynamic_cast<const HmmModel*>(model.get());
  if (hmm != nullptr && IsLinear(ordering)) {
    result = MaskHmm(*hmm, x, sensitive, rng);
  } else {
    result = MaskSequence(*model, x, sensitive, ordering, rng);
  }
  if (!result.input_in_support) {
    std::cerr << "warning: input has probability zero under the model\n";
  }
  if (!o.transcript.empty()) {
    Emit(TranscriptToJsonLines(result.transcript), o.transcript);
  }
  if (o.json) {
    nlohmann::json doc;
    doc["input"] = FormatSequence(x);
    doc["masked"] = result.masked.ToString();
    doc["erasures"] = result.masked.ErasureCount();
    doc["input_in_support"] = result.input_in_support;
    nlohmann::json steps = nlohmann::json::array();
    for (const TranscriptEntry& e : result.transcript) {
      const Symbol outcome[1] = {e.outcome};
      steps.push_back({{"i", e.index + 1},
                       {"release_prob", e.release_prob},
                       {"outcome", FormatSequence(outcome)}});
    }
    doc["transcript"] = std::move(steps);
    Emit(doc.dump() + "\n", o.out);
  } else {
    Emit(result.masked.ToString() + "\n", o.out);
  }
  return kExitOk;
}

int CmdRate(const Options& o) {
  const auto model = BuildModel(o);
  const std::size_t n = model->length();
  const IndexSet sensitive = ParseIndexList(o.k, n);
  const Ordering ordering = BuildOrdering(o, n);
  ResultTable table;
  table.columns = {"method", "rate", "stderr", "runs", "seed"};
  if (o.exact) {
    table.AddRow({"exact", AchievableRateExact(*model, sensitive, ordering), 0.0,
                  nullptr, nullptr});
  } else {
    const auto* hmm = dynamic_cast<const HmmModel*>(model.get());
    const Estimate est = hmm != nullptr && IsLinear(ordering)
                             ? HmmRateMc(*hmm, sensitive, o.runs, o.seed)
                             : AchievableRateMc(*model, sensitive, ordering,
                                                o.runs, o.seed);
    table.AddRow({"monte_carlo", est.value, est.stderr, o.runs, o.seed});
  }
  EmitTable(table, o);
  return kExitOk;
}

int CmdBound(const Options& o) {
  const auto model = BuildModel(o);
  const IndexSet sensitive = ParseIndexList(o.k, model->length());
  ResultTable table;
  table.columns = {"bound"};
  table.AddRow({UpperBoundRate(*model, sensitive)});
  EmitTable(table, o);
  return kExitOk;
}

int CmdLp(const Options& o) {
  const auto model = BuildModel(o);
  const IndexSet sensitive = ParseIndexList(o.k, model->length());
  const LpSolution solution = LpOptimalRate(*model, sensitive);
  Emit(LpSolutionToJson(solution) + "\n", o.out);
  switch (solution.status) {
    case LpOutcome::kOptimal:
    case LpOutcome::kInfeasible:
      return kExitOk;
    case LpOutcome::kCapacity:
      std::cerr << "error: LP exceeds the solver's size limits\n";
      return kExitCapacity;
    case LpOutcome::kNumericalFailure:
      std::cerr << "error: LP solver failed numerically\n";
      return kExitNumerical;
  }
  return kExitOk;
}

int CmdWindow(const Options& o) {
  const auto model = BuildModel(o);
  const std::size_t n = model->length();
  const IndexSet sensitive = ParseIndexList(o.k, n);
  WindowPolicy policy;
  Require(o.mode == "prefix" || o.mode == "radius", "--mode is prefix or radius");
  policy.mode = o.mode == "prefix" ? WindowPolicy::Mode::kPrefix
                                   : WindowPolicy::Mode::kRadius;
  const std::vector<std::size_t> omegas =
      ParseSizeList(o.omega.empty() ? "0" : o.omega);
  const auto* hmm = dynamic_cast<const HmmModel*>(model.get());
  Require(o.exact || hmm != nullptr,
          "Monte-Carlo window leakage needs an HMM; use --exact");

  ResultTable table;
  table.columns = {"experiment", "omega", "erasure_rate", "leakage", "stderr", "seed"};
  for (std::size_t omega : omegas) {
    policy.omega = omega;
    const LeakageResult leak =
        o.exact ? WindowLeakageExact(*model, sensitive, policy)
                : WindowLeakageMc(*hmm, sensitive, policy, o.runs, o.seed);
    std::size_t erased = 0;
    for (char e : WindowErasures(n, sensitive, policy)) erased += e ? 1 : 0;
    table.AddRow({o.exact ? "window_exact" : "window_mc", omega,
                  static_cast<double>(erased) / static_cast<double>(n),
                  leak.normalized, leak.stderr,
                  o.exact ? nlohmann::json(nullptr) : nlohmann::json(o.seed)});
  }
  EmitTable(table, o);
  return kExitOk;
}

int CmdRobustness(const Options& o) {
  if (o.config.empty()) {
    EmitTable(RobustnessSweep(o.pairs, o.length, o.seed), o);
    return kExitOk;
  }
  Require(!o.q_config.empty(), "--q-config is required with --config");
  const auto p = LoadModelConfig(ReadFile(o.config));
  const auto q = LoadModelConfig(ReadFile(o.q_config));
  const std::size_t n = p->length();
  const RobustnessResult r = RobustnessExperiment(
      *p, *q, ParseIndexList(o.k, n), BuildOrdering(o, n));
  ResultTable table;
  table.columns = {"leakage_bits", "kl_bits", "leakage_under_q_bits", "bound_holds"};
  table.AddRow({r.leakage_bits, std::isinf(r.kl_bits) ? nlohmann::json("inf")
                                                      : nlohmann::json(r.kl_bits),
                r.leakage_under_q_bits, r.bound_holds});
  EmitTable(table, o);
  return kExitOk;
}

int CmdHardness(const Options& o) {
  if (o.instance.empty()) {
    Require(o.family > 0, "provide --instance or --family");
    EmitTable(HardnessSweep(GenerateHittingSetFamily(o.family, o.max_m, o.max_k,
                                                     o.seed),
                            o.seed),
              o);
    return kExitOk;
  }
  // Inline JSON or a path to a JSON file.
  const bool inline_json = o.instance.find('{') != std::string::npos;
  const HittingSetInstance instance =
      HittingSetInstance::FromJson(inline_json ? o.instance : ReadFile(o.instance));
  const OrderingSearchResult best = BestOrderingExhaustive(instance);
  const HittingSetResult hit = MinHittingSetBruteforce(instance);
  nlohmann::json doc;
  doc["e_star"] = best.e_star;
  doc["h_star"] = hit.h_star;
  nlohmann::json order = nlohmann::json::array();
  for (std::size_t e : best.order) order.push_back(e + 1);
  nlohmann::json witness = nlohmann::json::array();
  for (std::size_t e : hit.witness) witness.push_back(e + 1);
  doc["ordering"] = std::move(order);
  doc["witness"] = std::move(witness);
  Emit(doc.dump() + "\n", o.out);
  return kExitOk;
}

int CmdExperiment(const Options& o) {
  const std::string& name = o.experiment;
  if (name == "fig3") {
    const HmmModel hmm(PanelOrGenerated(o), o.epsilon, o.theta, o.alphabet);
    const std::string omegas =
        o.omega.empty() ? "0,2,4,6,8,10,15,20,25,30,35,40,50" : o.omega;
    EmitTable(WindowSweep(hmm, ParseIndexList(o.k, hmm.length()),
                          ParseSizeList(omegas), o.runs, o.seed),
              o);
  } else if (name == "fig4") {
    const std::vector<Sequence> panel = PanelOrGenerated(o);
    EmitTable(RateSweep(panel,
                        ParseDoubleList(o.epsilons.empty()
                                            ? "0.01,0.05,0.1,0.2,0.3,0.4,0.5"
                                            : o.epsilons),
                        ParseDoubleList(o.thetas.empty() ? "0.01,0.05" : o.thetas),
                        ParseIndexList(o.k, panel.front().size()), o.runs, o.seed),
              o);
  } else if (name == "fig5") {
    const std::vector<Sequence> panel = PanelOrGenerated(o);
    EmitTable(LpComparison(panel, o.length,
                           ParseDoubleList(o.epsilons.empty()
                                               ? "0.01,0.05,0.1,0.2,0.3"
                                               : o.epsilons),
                           ParseDoubleList(o.thetas.empty() ? "0.01,0.05" : o.thetas),
                           ParseIndexList(o.k, o.length), o.seed),
              o);
  } else if (name == "robustness") {
    EmitTable(RobustnessSweep(o.pairs, o.length, o.seed), o);
  } else if (name == "hardness") {
    EmitTable(HardnessSweep(GenerateHittingSetFamily(
                  o.family == 0 ? 200 : o.family, o.max_m, o.max_k, o.seed),
                            o.seed),
              o);
  } else {
    Fail(ErrorCode::kInput, "unknown experiment '" + name +
                                "' (fig3, fig4, fig5, robustness, hardness)");
  }
  return kExitOk;
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInput:
    case ErrorCode::kDegenerate:
      return kExitInput;
    case ErrorCode::kCapacity:
      return kExitCapacity;
    case ErrorCode::kNumerical:
    case ErrorCode::kImpossibleContext:
      return kExitNumerical;
  }
  return kExitInput;
}

void AddModelFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("--panel", o.panel, "Panel file, one haplotype per line");
  cmd->add_option("--config", o.config, "Model config JSON (overrides --panel)");
  cmd->add_option("--epsilon", o.epsilon, "Crossover probability")->capture_default_str();
  cmd->add_option("--theta", o.theta, "Emission error probability")->capture_default_str();
  cmd->add_option("--alphabet", o.alphabet, "Alphabet size")->capture_default_str();
  cmd->add_option("--k", o.k, "Sensitive positions, 1-based, comma-separated")
      ->capture_default_str();
}

int Run(int argc, char** argv) {
  Options o;
  CLI::App app{"Erasure mechanism for hiding sensitive positions in sequences"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-panel", "Write a uniform random panel");
  gen->add_option("--m", o.m, "Number of haplotypes")->capture_default_str();
  gen->add_option("--n", o.n, "Sequence length")->capture_default_str();
  gen->add_option("--alphabet", o.alphabet, "Alphabet size")->capture_default_str();
  gen->add_option("--seed", o.seed, "Root seed")->capture_default_str();
  gen->add_option("--out", o.out, "Output file (default stdout)");

  auto* mask = app.add_subcommand("mask", "Mask one sequence");
  AddModelFlags(mask, o);
  mask->add_option("--input", o.input, "Sequence to mask, e.g. 0110");
  mask->add_flag("--sample", o.sample, "Mask a sequence drawn from the model");
  mask->add_option("--seed", o.seed, "Root seed")->capture_default_str();
  mask->add_option("--order", o.order, "Processing order, 1-based, comma-separated");
  mask->add_option("--transcript", o.transcript, "Write the transcript as JSON lines");
  mask->add_option("--out", o.out, "Output file (default stdout)");
  mask->add_flag("--json", o.json, "Emit JSON with the transcript");

  auto* rate = app.add_subcommand("rate", "Rate of the mechanism");
  AddModelFlags(rate, o);
  rate->add_option("--runs", o.runs, "Monte-Carlo runs")->capture_default_str();
  rate->add_option("--seed", o.seed, "Root seed")->capture_default_str();
  rate->add_option("--order", o.order, "Processing order, 1-based");
  rate->add_flag("--exact", o.exact, "Exact enumeration (small models)");
  rate->add_option("--out", o.out, "Output file");
  rate->add_flag("--json", o.json, "Emit JSON");

  auto* bound = app.add_subcommand("bound", "Upper bound on the achievable rate");
  AddModelFlags(bound, o);
  bound->add_option("--out", o.out, "Output file");
  bound->add_flag("--json", o.json, "Emit JSON");

  auto* lp = app.add_subcommand("lp", "Optimal rate by linear programming (tiny models)");
  AddModelFlags(lp, o);
  lp->add_option("--out", o.out, "Output file");

  auto* window = app.add_subcommand("window", "Leakage of window erasure");
  AddModelFlags(window, o);
  window->add_option("--omega", o.omega, "Window sizes, comma-separated");
  window->add_option("--mode", o.mode, "prefix or radius")->capture_default_str();
  window->add_option("--runs", o.runs, "Monte-Carlo samples")->capture_default_str();
  window->add_option("--seed", o.seed, "Root seed")->capture_default_str();
  window->add_flag("--exact", o.exact, "Exact enumeration (small models)");
  window->add_option("--out", o.out, "Output file");
  window->add_flag("--json", o.json, "Emit JSON");

  auto* robust = app.add_subcommand("robustness", "Leakage under model mismatch");
  robust->add_option("--config", o.config, "True model config JSON");
  robust->add_option("--q-config", o.q_config, "Assumed model config JSON");
  robust->add_option("--k", o.k, "Sensitive positions, 1-based")->capture_default_str();
  robust->add_option("--order", o.order, "Processing order, 1-based");
  robust->add_option("--pairs", o.pairs, "Random pairs when no configs are given")
      ->capture_default_str();
  robust->add_option("--n", o.length, "Sequence length of random pairs")
      ->capture_default_str();
  robust->add_option("--seed", o.seed, "Root seed")->capture_default_str();
  robust->add_option("--out", o.out, "Output file");
  robust->add_flag("--json", o.json, "Emit JSON");

  auto* hard = app.add_subcommand("hardness", "Optimal ordering versus hitting set");
  hard->add_option("--instance", o.instance, "Instance JSON file, or inline {\"m\":..,\"sets\":[[..]]}");
  hard->add_option("--family", o.family, "Generate this many random instances");
  hard->add_option("--max-m", o.max_m, "Largest universe")->capture_default_str();
  hard->add_option("--max-k", o.max_k, "Largest family")->capture_default_str();
  hard->add_option("--seed", o.seed, "Root seed")->capture_default_str();
  hard->add_option("--out", o.out, "Output file");
  hard->add_flag("--json", o.json, "Emit JSON");

  auto* exp = app.add_subcommand("experiment", "Run a named sweep");
  exp->add_option("name", o.experiment, "fig3, fig4, fig5, robustness or hardness")
      ->required();
  AddModelFlags(exp, o);
  exp->add_option("--m", o.m, "Generated panel size")->capture_default_str();
  exp->add_option("--n", o.n, "Generated panel length")->capture_default_str();
  exp->add_option("--epsilons", o.epsilons, "Crossover grid, comma-separated");
  exp->add_option("--thetas", o.thetas, "Error grid, comma-separated");
  exp->add_option("--omega", o.omega, "Window grid, comma-separated");
  exp->add_option("--runs", o.runs, "Monte-Carlo runs per grid point")
      ->capture_default_str();
  exp->add_option("--length", o.length, "Truncation / pair length")->capture_default_str();
  exp->add_option("--pairs", o.pairs, "Robustness pairs")->capture_default_str();
  exp->add_option("--family", o.family, "Hardness instances (default 200)");
  exp->add_option("--max-m", o.max_m, "Largest universe")->capture_default_str();
  exp->add_option("--max-k", o.max_k, "Largest family")->capture_default_str();
  exp->add_option("--seed", o.seed, "Root seed")->capture_default_str();
  exp->add_option("--out", o.out, "Output file");
  exp->add_flag("--json", o.json, "Emit JSON instead of CSV");
  exp->footer(kColumnsHelp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (gen->parsed()) return CmdGenPanel(o);
  if (mask->parsed()) return CmdMask(o);
  if (rate->parsed()) return CmdRate(o);
  if (bound->parsed()) return CmdBound(o);
  if (lp->parsed()) return CmdLp(o);
  if (window->parsed()) return CmdWindow(o);
  if (robust->parsed()) return CmdRobustness(o);
  if (hard->parsed()) return CmdHardness(o);
  if (exp->parsed()) return CmdExperiment(o);
  return kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Run(argc, argv);
  } catch (const genomask::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
}
