// Copyright 2026 The testprio Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <algorithm>
#include <mutex>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "testprio/error.h"
#include "testprio/gini.h"
#include "testprio/mlp.h"
#include "testprio/prioritization.h"
#include "testprio/signature_io.h"

namespace testprio::cli {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Format9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void ApplyJsonConfig(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kFormat, path + ": " + e.what());
  }
  if (!j.is_object()) Fail(ErrorCode::kInvalidArgument, path + ": config must be an object");
  static const std::vector<std::string> kKnown = {
      "probs",  "labels",   "trace",   "profile",  "signatures",     "perm",
      "out",    "out_dir",  "curve",   "method",   "methods",        "criteria",
      "criterion", "seed",  "tie_seed", "random_repeats", "n",        "n_tests",
      "n_train", "dims",    "noise",   "threads",  "timing_strict"};
  try {
    for (const auto& [key, value] : j.items()) {
      if (std::find(kKnown.begin(), kKnown.end(), key) == kKnown.end()) {
        Fail(ErrorCode::kInvalidArgument, path + ": unknown config key '" + key + "'");
      }
    }
    const auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("probs", cfg.probs);
    get("labels", cfg.labels);
    get("trace", cfg.trace);
    get("profile", cfg.profile);
    get("signatures", cfg.signatures);
    get("perm", cfg.perm);
    get("out", cfg.out);
    get("out_dir", cfg.out_dir);
    get("curve", cfg.curve);
    get("method", cfg.method);
    get("methods", cfg.methods);
    get("criteria", cfg.criteria);
    get("criterion", cfg.criterion);
    get("seed", cfg.seed);
    if (j.contains("tie_seed")) cfg.tie_seed = j.at("tie_seed").get<std::uint64_t>();
    get("random_repeats", cfg.random_repeats);
    get("n", cfg.n);
    get("n_tests", cfg.n_tests);
    get("n_train", cfg.n_train);
    get("dims", cfg.dims);
    get("noise", cfg.noise);
    get("threads", cfg.threads);
    get("timing_strict", cfg.timing_strict);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, path + ": " + e.what());
  }
}

void Require(const std::string& value, const char* flag, const std::string& sub) {
  if (value.empty()) {
    Fail(ErrorCode::kInvalidArgument, sub + " requires --" + std::string(flag));
  }
}

std::vector<CriterionConfig> ResolveCriteria(const std::vector<std::string>& names) {
  if (names.empty()) return DefaultCriteriaGrid();
  std::vector<CriterionConfig> out;
  for (const auto& name : names) out.push_back(ParseCriterion(name));
  return out;
}

ProfileDocument LoadProfileFor(const RunConfig& cfg, const ActivationTrace& trace) {
  Require(cfg.profile, "profile", cfg.subcommand);
  auto doc = LoadProfile(cfg.profile);
  if (doc.profile.size() != trace.n_neurons()) {
    Fail(ErrorCode::kFormat, cfg.profile + ": profile has " +
                                 std::to_string(doc.profile.size()) +
                                 " neurons, trace has " + std::to_string(trace.n_neurons()));
  }
  return doc;
}

std::vector<CoverageSignature> SignaturesFor(const RunConfig& cfg) {
  if (!cfg.signatures.empty()) return LoadSignatures(cfg.signatures);
  Require(cfg.trace, "trace (or --signatures)", cfg.subcommand);
  Require(cfg.criterion, "criterion", cfg.subcommand);
  const auto criterion = ParseCriterion(cfg.criterion);
  const auto trace = LoadTrace(cfg.trace);
  const auto doc = LoadProfileFor(cfg, trace);
  return ComputeSignatures(criterion, trace, doc.profile, doc.layers, cfg.threads);
}

void EmitOutcome(const PrioritizationOutcome& outcome, const RunConfig& cfg,
                 std::ostream& out) {
  if (!cfg.out.empty()) {
    SaveOutcome(outcome, cfg.out);
    return;
  }
  out << "rank,test_index\n";
  for (std::size_t r = 0; r < outcome.order.size(); ++r) {
    out << r + 1 << ',' << outcome.order[r] << '\n';
  }
}

int RunScore(const RunConfig& cfg, std::ostream& out) {
  Require(cfg.probs, "probs", cfg.subcommand);
  const auto probs = LoadProbabilities(cfg.probs);
  const auto scores = GiniScores(probs, cfg.threads);
  if (!cfg.out.empty()) {
    SaveScores(scores, cfg.out);
  } else {
    out << "test_index,score\n";
    for (std::size_t i = 0; i < scores.size(); ++i) {
      out << i << ',' << Format9(scores[i]) << '\n';
    }
  }
  return kExitOk;
}

int RunCoverage(const RunConfig& cfg, std::ostream& out) {
  Require(cfg.trace, "trace", cfg.subcommand);
  Require(cfg.criterion, "criterion", cfg.subcommand);
  const auto criterion = ParseCriterion(cfg.criterion);
  const auto trace = LoadTrace(cfg.trace);
  const auto doc = LoadProfileFor(cfg, trace);
  const auto sigs =
      ComputeSignatures(criterion, trace, doc.profile, doc.layers, cfg.threads);
  if (!cfg.out.empty()) SaveSignatures(sigs, cfg.out);
  double mean_rate = 0.0;
  for (const auto& s : sigs) mean_rate += s.rate();
  if (!sigs.empty()) mean_rate /= static_cast<double>(sigs.size());
  out << "criterion,universe,tests,suite_coverage_rate,mean_test_rate\n"
      << criterion.ToString() << ',' << EntityUniverse(criterion, trace.n_neurons())
      << ',' << sigs.size() << ',' << Format9(SuiteCoverageRate(sigs)) << ','
      << Format9(mean_rate) << '\n';
  return kExitOk;
}

int RunPrioritize(const RunConfig& cfg, std::ostream& out) {
  PrioritizationOutcome outcome;
  if (cfg.method == "gini") {
    Require(cfg.probs, "probs", cfg.subcommand);
    outcome = PrioritizeByGini(LoadProbabilities(cfg.probs), cfg.threads);
  } else if (cfg.method == "ctm") {
    outcome = CoverageTotal(SignaturesFor(cfg), cfg.tie_seed);
  } else if (cfg.method == "cam") {
    outcome = CoverageAdditional(SignaturesFor(cfg), cfg.tie_seed);
  } else if (cfg.method == "random") {
    std::size_t n = cfg.n;
    if (n == 0 && !cfg.probs.empty()) n = LoadProbabilities(cfg.probs).n_tests();
    if (n == 0) Fail(ErrorCode::kInvalidArgument, "random needs --n or --probs");
    outcome = RandomPrioritization(n, cfg.seed);
  } else {
    Fail(ErrorCode::kInvalidArgument, "unknown method '" + cfg.method + "'");
  }
  EmitOutcome(outcome, cfg, out);
  return kExitOk;
}

int RunEvaluate(const RunConfig& cfg, std::ostream& out) {
  Require(cfg.perm, "perm", cfg.subcommand);
  Require(cfg.probs, "probs", cfg.subcommand);
  Require(cfg.labels, "labels", cfg.subcommand);
  const auto perm = LoadPermutation(cfg.perm);
  const auto probs = LoadProbabilities(cfg.probs);
  const auto labels = LoadLabels(cfg.labels);
  const auto mask = ComputeMisclassificationMask(probs, labels);
  if (perm.size() != probs.n_tests()) {
    Fail(ErrorCode::kFormat, "permutation has " + std::to_string(perm.size()) +
                                 " tests, probabilities have " +
                                 std::to_string(probs.n_tests()));
  }
  const auto curve = ComputeDetectionCurve(perm, mask);
  if (!cfg.curve.empty()) {
    std::ofstream c(cfg.curve, std::ios::binary | std::ios::trunc);
    if (!c) Fail(ErrorCode::kIo, "cannot open " + cfg.curve + " for writing");
    c << "prefix_length,found\n";
    for (const auto& p : curve) c << p.prioritized << ',' << p.found << '\n';
  }
  const double apfd = Apfd(perm, mask);
  out << "n_tests,misclassified,apfd";
  std::string extra;
  if (!cfg.signatures.empty()) {
    const auto sigs = LoadSignatures(cfg.signatures);
    out << ",tests_to_max_coverage";
    extra = "," + std::to_string(TestsToMaxCoverage(sigs, perm));
  }
  out << '\n' << perm.size() << ',' << mask.k << ',' << Format9(apfd) << extra << '\n';
  return kExitOk;
}

int RunSynth(const RunConfig& cfg, std::ostream& out) {
  SynthConfig sc;
  sc.seed = cfg.seed;
  sc.n_tests = cfg.n_tests;
  sc.n_train = cfg.n_train;
  sc.dims = cfg.dims;
  sc.noise_scale = cfg.noise;
  const auto exp = MakeSynthExperiment(sc);
  const auto traces = TraceSubject(exp, cfg.threads);
  const std::filesystem::path dir = cfg.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + dir.string());
  SaveModel(exp.teacher, dir / "teacher.json");
  SaveModel(exp.subject, dir / "subject.json");
  SaveMatrix(exp.inputs, dir / "inputs.dgm");
  SaveMatrix(exp.train_inputs, dir / "train_inputs.dgm");
  SaveLabels(exp.labels, dir / "labels.txt");
  SaveMatrix(traces.probabilities.matrix(), dir / "probs.dgm");
  SaveMatrix(traces.trace.matrix(), dir / "trace.dgm");
  SaveMatrix(traces.train_trace.matrix(), dir / "train_trace.dgm");
  SaveProfile({traces.layers, traces.profile}, dir / "profile.json");
  const auto mask = ComputeMisclassificationMask(traces.probabilities, exp.labels);
  out << "n_tests,n_neurons,misclassified\n"
      << exp.labels.size() << ',' << traces.trace.n_neurons() << ',' << mask.k << '\n';
  return kExitOk;
}

int RunCompare(const RunConfig& cfg, std::ostream& out) {
  CompareInputs inputs;
  if (cfg.probs.empty()) {
    SynthConfig sc;
    sc.seed = cfg.seed;
    sc.n_tests = cfg.n_tests;
    sc.n_train = cfg.n_train;
    sc.dims = cfg.dims;
    sc.noise_scale = cfg.noise;
    auto exp = MakeSynthExperiment(sc);
    auto traces = TraceSubject(exp, cfg.threads);
    inputs.probs = std::move(traces.probabilities);
    inputs.labels = std::move(exp.labels);
    inputs.trace = std::move(traces.trace);
    inputs.profile = ProfileDocument{std::move(traces.layers), std::move(traces.profile)};
  } else {
    Require(cfg.labels, "labels", cfg.subcommand);
    inputs.probs = LoadProbabilities(cfg.probs);
    inputs.labels = LoadLabels(cfg.labels);
    if (!cfg.trace.empty()) {
      inputs.trace = LoadTrace(cfg.trace);
      inputs.profile = LoadProfileFor(cfg, *inputs.trace);
    }
  }
  CompareOptions opt;
  opt.methods = cfg.methods;
  opt.criteria = ResolveCriteria(cfg.criteria);
  opt.seed = cfg.seed;
  opt.random_repeats = cfg.random_repeats;
  opt.tie_seed = cfg.tie_seed;
  opt.threads = cfg.threads;
  opt.timing_strict = cfg.timing_strict;
  const auto reports = RunComparison(inputs, opt);

  const std::filesystem::path dir = cfg.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + dir.string());
  WriteReport(reports, dir / "report.json");
  out << "method,apfd,saturation_index,wall_time_s\n";
  for (const auto& r : reports) {
    out << r.name << ',' << Format9(r.apfd) << ',' << r.saturation_index << ','
        << Format9(r.wall_time_s) << '\n';
  }
  return kExitOk;
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return kExitInvalidConfig;
    case ErrorCode::kFormat:
    case ErrorCode::kIo: return kExitFileError;
    case ErrorCode::kEvaluation: return kExitEvaluationError;
  }
  return kExitInvalidConfig;
}

// Runs tasks on up to `threads` workers; results land at their own index.
void RunTasks(std::vector<std::function<void()>>& tasks, unsigned threads) {
  if (threads <= 1 || tasks.size() <= 1) {
    for (auto& t : tasks) t();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < std::min<std::size_t>(threads, tasks.size()); ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
          try {
            tasks[i]();
          } catch (...) {
            std::lock_guard lock(error_mu);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

std::vector<MethodReport> RunComparison(const CompareInputs& inputs,
                                        const CompareOptions& options) {
  const auto mask = ComputeMisclassificationMask(inputs.probs, inputs.labels);
  if (mask.k == 0) {
    Fail(ErrorCode::kEvaluation, "no misclassified tests; APFD is undefined");
  }
  const auto wants = [&](const char* m) {
    return std::find(options.methods.begin(), options.methods.end(), m) !=
           options.methods.end();
  };
  for (const auto& m : options.methods) {
    if (m != "gini" && m != "ctm" && m != "cam" && m != "random") {
      Fail(ErrorCode::kInvalidArgument, "unknown method '" + m + "'");
    }
  }
  const bool coverage = wants("ctm") || wants("cam");
  if (coverage && (!inputs.trace || !inputs.profile)) {
    Fail(ErrorCode::kInvalidArgument, "coverage methods need a trace and a profile");
  }
  if (wants("random") && options.random_repeats == 0) {
    Fail(ErrorCode::kInvalidArgument, "random_repeats must be >= 1");
  }

  const unsigned workers = options.timing_strict ? 1 : options.threads;
  std::vector<std::function<void()>> tasks;
  std::vector<MethodReport> reports;

  // Slots are reserved up front so tasks write to stable positions.
  std::size_t slots = wants("gini") ? 1 : 0;
  if (coverage) {
    slots += options.criteria.size() * ((wants("ctm") ? 1 : 0) + (wants("cam") ? 1 : 0));
  }
  if (wants("random")) slots += options.random_repeats;
  reports.resize(slots);
  std::size_t slot = 0;

  if (wants("gini")) {
    tasks.push_back([&, s = slot++] {
      const auto start = Clock::now();
      auto outcome = PrioritizeByGini(inputs.probs);
      reports[s] = EvaluateOutcome(outcome, mask, SecondsSince(start));
    });
  }
  if (coverage) {
    for (const auto& criterion : options.criteria) {
      criterion.Validate();
      const bool ctm = wants("ctm");
      const bool cam = wants("cam");
      const std::size_t ctm_slot = ctm ? slot++ : 0;
      const std::size_t cam_slot = cam ? slot++ : 0;
      tasks.push_back([&, criterion, ctm, cam, ctm_slot, cam_slot] {
        const auto start = Clock::now();
        const auto sigs = ComputeSignatures(criterion, *inputs.trace,
                                            inputs.profile->profile,
                                            inputs.profile->layers);
        const double sig_time = SecondsSince(start);
        const std::string suffix = "-" + criterion.ToString();
        if (ctm) {
          const auto t0 = Clock::now();
          auto outcome = CoverageTotal(sigs, options.tie_seed);
          outcome.method_tag += suffix;
          reports[ctm_slot] = EvaluateOutcome(outcome, mask, sig_time + SecondsSince(t0));
        }
        if (cam) {
          const auto t0 = Clock::now();
          auto outcome = CoverageAdditional(sigs, options.tie_seed);
          outcome.method_tag += suffix;
          reports[cam_slot] = EvaluateOutcome(outcome, mask, sig_time + SecondsSince(t0));
        }
      });
    }
  }
  if (wants("random")) {
    for (std::size_t r = 0; r < options.random_repeats; ++r) {
      tasks.push_back([&, r, s = slot++] {
        const std::uint64_t seed = options.seed + r;
        const auto start = Clock::now();
        auto outcome = RandomPrioritization(inputs.probs.n_tests(), seed);
        if (options.random_repeats > 1) outcome.method_tag += "-" + std::to_string(seed);
        reports[s] = EvaluateOutcome(outcome, mask, SecondsSince(start));
      });
    }
  }
  RunTasks(tasks, workers);
  return reports;
}

int Run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Test prioritization for classifier outputs: Gini impurity ranking, "
               "neuron-coverage baselines and APFD evaluation."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string config_path;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file; flags override it");
    sub->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* score = app.add_subcommand("score", "Gini impurity score per test");
  add_common(score);
  score->add_option("--probs", cfg.probs, "Probability matrix (DGM1 or CSV)");
  score->add_option("--out", cfg.out, "Scores CSV (default: stdout)");

  auto* coverage = app.add_subcommand("coverage", "Coverage signatures for one criterion");
  add_common(coverage);
  coverage->add_option("--trace", cfg.trace, "Activation trace (DGM1 or CSV)");
  coverage->add_option("--profile", cfg.profile, "Layer map + neuron profile JSON");
  coverage->add_option("--criterion", cfg.criterion, "e.g. NAC:0.75, KMNC:1000, TKNC:2");
  coverage->add_option("--out", cfg.out, "DGS1 signature dump");

  auto* prioritize = app.add_subcommand("prioritize", "Order tests with one method");
  add_common(prioritize);
  prioritize->add_option("--method", cfg.method, "gini | ctm | cam | random")
      ->check(CLI::IsMember({"gini", "ctm", "cam", "random"}));
  prioritize->add_option("--probs", cfg.probs, "Probability matrix (gini, random)");
  prioritize->add_option("--signatures", cfg.signatures, "DGS1 signatures (ctm, cam)");
  prioritize->add_option("--trace", cfg.trace, "Activation trace (ctm, cam)");
  prioritize->add_option("--profile", cfg.profile, "Layer map + neuron profile JSON");
  prioritize->add_option("--criterion", cfg.criterion, "Criterion when using --trace");
  prioritize->add_option("--seed", cfg.seed, "Seed for random");
  prioritize->add_option("--n", cfg.n, "Test count for random");
  prioritize->add_option_function<std::uint64_t>(
      "--tie-seed", [&](const std::uint64_t& v) { cfg.tie_seed = v; },
      "Shuffle ties with this seed instead of index order (ctm, cam)");
  prioritize->add_option("--out", cfg.out, "Permutation CSV (sidecar JSON next to it)");

  auto* evaluate = app.add_subcommand("evaluate", "APFD of a permutation");
  add_common(evaluate);
  evaluate->add_option("--perm", cfg.perm, "Permutation CSV");
  evaluate->add_option("--probs", cfg.probs, "Probability matrix");
  evaluate->add_option("--labels", cfg.labels, "Labels, one per line");
  evaluate->add_option("--curve", cfg.curve, "Write the detection curve CSV here");
  evaluate->add_option("--signatures", cfg.signatures,
                       "Also report tests needed to reach maximum coverage");

  const auto add_synth = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Generator seed");
    sub->add_option("--n-tests", cfg.n_tests, "Test inputs")->check(CLI::PositiveNumber);
    sub->add_option("--n-train", cfg.n_train, "Training inputs")->check(CLI::PositiveNumber);
    sub->add_option("--dims", cfg.dims, "Input width then layer widths")->delimiter(',');
    sub->add_option("--noise", cfg.noise, "Subject perturbation scale");
    sub->add_option("--out-dir", cfg.out_dir, "Output directory");
  };

  auto* synth = app.add_subcommand("synth", "Generate a synthetic teacher/subject experiment");
  add_common(synth);
  add_synth(synth);

  auto* compare = app.add_subcommand("compare", "Run and evaluate all methods");
  add_common(compare);
  add_synth(compare);
  compare->add_option("--probs", cfg.probs, "Probability matrix (omit to use synth)");
  compare->add_option("--labels", cfg.labels, "Labels");
  compare->add_option("--trace", cfg.trace, "Activation trace");
  compare->add_option("--profile", cfg.profile, "Layer map + neuron profile JSON");
  compare->add_option("--methods", cfg.methods, "Subset of gini,ctm,cam,random")
      ->delimiter(',');
  compare->add_option("--criteria", cfg.criteria, "Criteria list (default: full grid)")
      ->delimiter(',');
  compare->add_option("--random-repeats", cfg.random_repeats, "Random seeds to run");
  compare->add_option_function<std::uint64_t>(
      "--tie-seed", [&](const std::uint64_t& v) { cfg.tie_seed = v; },
      "Shuffle coverage ties with this seed");
  compare->add_flag("--timing-strict", cfg.timing_strict,
                    "Run methods one at a time for uncontended timings");

  try {
    // The config file is applied before flags so that flags win.
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) {
        ApplyJsonConfig(args[i + 1], cfg);
      } else if (args[i].rfind("--config=", 0) == 0) {
        ApplyJsonConfig(args[i].substr(9), cfg);
      }
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  }

  try {
    if (*score) {
      cfg.subcommand = "score";
      return RunScore(cfg, out);
    }
    if (*coverage) {
      cfg.subcommand = "coverage";
      return RunCoverage(cfg, out);
    }
    if (*prioritize) {
      cfg.subcommand = "prioritize";
      return RunPrioritize(cfg, out);
    }
    if (*evaluate) {
      cfg.subcommand = "evaluate";
      return RunEvaluate(cfg, out);
    }
    if (*synth) {
      cfg.subcommand = "synth";
      return RunSynth(cfg, out);
    }
    cfg.subcommand = "compare";
    return RunCompare(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  }
}

}  // namespace testprio::cli
