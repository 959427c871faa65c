// Copyright 2026 The proxmf Authors
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
//
// Command-line front end.
//
//   proxmf generate   write a synthetic instance as UAI + instance JSON
//   proxmf run        run schedules over instances and budgets, emit CSVs
//   proxmf sweep      damping-sensitivity sweep over an eta grid
//   proxmf oracle     exact log Z / marginals / MAP for tiny instances
//   proxmf lipschitz  spectral-norm estimate and suggested damping
//
// Exit codes: 0 success, 1 any per-run failure, 2 spec/usage errors.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "proxmf/proxmf.hpp"

namespace {

using namespace proxmf;

constexpr int kExitOk = 0;
constexpr int kExitRunFailure = 1;
constexpr int kExitSpecError = 2;

GraphKind parse_kind(const std::string& s) {
  if (s == "grid") return GraphKind::grid;
  if (s == "chain") return GraphKind::chain;
  if (s == "complete") return GraphKind::complete;
  throw CLI::ValidationError("--kind", "expected grid|chain|complete");
}

Coupling parse_coupling(const std::string& s) {
  if (s == "attractive") return Coupling::attractive;
  if (s == "repulsive") return Coupling::repulsive;
  if (s == "mixed") return Coupling::mixed;
  throw CLI::ValidationError("--coupling", "expected attractive|repulsive|mixed");
}

InputSpec input_from_path(const std::string& path) {
  InputSpec in;
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".uai")
    in.uai_path = path;
  else
    in.json_path = path;
  return in;
}

std::vector<double> parse_grid(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

struct RunOptions {
  std::vector<std::string> inputs;
  std::string spec_path;
  std::vector<std::string> schedules;
  double d = -1.0;    // < 0 means unset
  double eta = -1.0;  // < 0 means unset
  int64_t iters = 0;
  int64_t budget_ms = 0;
  uint64_t seed = 0;
  std::string out_dir;
  int threads = 1;
  std::string init = "uniform";
  double tolerance = -1.0;
  bool no_walltime = false;
};

void add_run_options(CLI::App& cmd, RunOptions& opt) {
  auto* input = cmd.add_option("--input", opt.inputs,
                               "instance file (.uai or instance .json)");
  cmd.add_option("--spec", opt.spec_path,
                 "experiment spec JSON; replaces the other flags except --out and --threads")
      ->excludes(input);
  cmd.add_option("--schedule", opt.schedules,
                 "sweep|full_parallel|adhoc|ours_fixed|ours_adaptive|ours_momentum|ours_adam "
                 "(repeatable)");
  cmd.add_option("--d", opt.d, "damping weight for the natural-space schedules");
  cmd.add_option("--eta", opt.eta, "step size; adhoc uses it directly, others as d = 1/eta - 1");
  cmd.add_option("--iters", opt.iters, "iteration budget");
  cmd.add_option("--budget-ms", opt.budget_ms, "wall-clock budget in milliseconds (repeat runs "
                                               "are then not byte-reproducible)");
  cmd.add_option("--seed", opt.seed, "seed for any derived randomness");
  cmd.add_option("--out", opt.out_dir, "output directory for trace and summary CSVs");
  cmd.add_option("--threads", opt.threads, "worker threads for parallel schedules");
  cmd.add_option("--init", opt.init, "uniform|unary initialization");
  cmd.add_option("--tolerance", opt.tolerance, "stop when |dF| drops below this value");
  cmd.add_flag("--no-walltime", opt.no_walltime, "zero wall-clock columns for byte-stable CSVs");
}

ExperimentSpec spec_from_options(const RunOptions& opt) {
  if (!opt.spec_path.empty()) {
    ExperimentSpec spec =
        experiment_spec_from_json(nlohmann::json::parse(read_text_file(opt.spec_path)));
    if (!opt.out_dir.empty()) spec.output_dir = opt.out_dir;
    if (opt.threads > 1) spec.threads = opt.threads;
    return spec;
  }
  if (opt.inputs.empty()) throw ValidationError("either --input or --spec is required");
  ExperimentSpec spec;
  for (const std::string& path : opt.inputs) spec.inputs.push_back(input_from_path(path));

  std::vector<std::string> names = opt.schedules;
  if (names.empty()) names = {"ours_fixed"};
  for (const std::string& name : names) {
    auto alg = algorithm_from_name(name);
    if (!alg) throw ValidationError("unknown schedule '" + name + "'");
    ScheduleConfig cfg = ScheduleConfig::defaults(*alg);
    if (opt.eta > 0.0) {
      cfg.eta_adhoc = opt.eta;
      cfg.d = 1.0 / opt.eta - 1.0;
    }
    if (opt.d >= 0.0) cfg.d = opt.d;
    if (opt.tolerance >= 0.0) cfg.tolerance = opt.tolerance;
    spec.schedules.push_back(std::move(cfg));
  }

  if (opt.iters > 0) spec.budgets.push_back({Budget::Kind::iterations, opt.iters});
  if (opt.budget_ms > 0) spec.budgets.push_back({Budget::Kind::wall_ms, opt.budget_ms});
  if (spec.budgets.empty()) spec.budgets.push_back({Budget::Kind::iterations, 500});

  spec.output_dir = opt.out_dir;
  spec.seed = opt.seed;
  spec.threads = opt.threads;
  spec.record_walltime = !opt.no_walltime;
  if (opt.init == "uniform")
    spec.init = InitMode::uniform;
  else if (opt.init == "unary")
    spec.init = InitMode::unary;
  else
    throw ValidationError("unknown init mode '" + opt.init + "'");
  // No explicit step size: derive d from the estimated Lipschitz constant.
  spec.auto_damping = opt.d < 0.0 && opt.eta <= 0.0;
  return spec;
}

InstanceBundle load_bundle(const std::string& path) {
  InputSpec in = input_from_path(path);
  InstanceBundle bundle;
  if (!in.uai_path.empty()) {
    bundle.field = parse_uai(read_text_file(in.uai_path));
    bundle.id = std::filesystem::path(path).stem().string();
  } else {
    bundle = instance_from_json(nlohmann::json::parse(read_text_file(in.json_path)));
  }
  return bundle;
}

int cmd_generate(const SyntheticSpec& gen, const std::string& out_base) {
  const SyntheticInstance inst = generate_synthetic(gen.kind, gen.rows, gen.cols, gen.labels,
                                                    gen.unary_scale, gen.pair_scale, gen.coupling,
                                                    gen.seed);
  InstanceBundle bundle;
  bundle.id = gen.id();
  bundle.field = inst.field;
  bundle.truth = inst.truth;
  bundle.seed = gen.seed;

  write_text_file(out_base + ".uai", serialize_uai(inst.field));
  write_text_file(out_base + ".json", instance_to_json(bundle).dump(2) + "\n");
  std::cout << bundle.id << ": " << inst.field.num_variables << " variables, "
            << inst.field.factors.size() << " factors -> " << out_base << ".uai, " << out_base
            << ".json\n";
  return kExitOk;
}

int cmd_run(const RunOptions& opt) {
  const ExperimentSpec spec = spec_from_options(opt);
  const ExperimentResult result = run_experiment(spec);
  std::cout << summary_csv(result.summary, spec.record_walltime);
  if (!result.summary_path.empty()) std::cerr << "summary: " << result.summary_path << "\n";
  return result.any_failed ? kExitRunFailure : kExitOk;
}

int cmd_sweep(const RunOptions& opt, const std::string& eta_grid, bool eta_grid_given) {
  ExperimentSpec spec = spec_from_options(opt);
  if (spec.eta_grid.empty() || eta_grid_given) spec.eta_grid = parse_grid(eta_grid);
  if (opt.spec_path.empty() && opt.schedules.empty()) {
    // default comparison pair for sensitivity
    spec.schedules.clear();
    spec.schedules.push_back(ScheduleConfig::defaults(Algorithm::adhoc));
    spec.schedules.push_back(ScheduleConfig::defaults(Algorithm::ours_fixed));
  }
  const std::vector<SweepRow> rows = sensitivity_sweep(spec);
  std::cout << "instance_id,schedule,eta,d,final_F,marker,error\n";
  bool failed = false;
  for (const SweepRow& r : rows) {
    std::cout << r.instance_id << ',' << r.schedule << ',' << detail::format_real(r.eta) << ','
              << detail::format_real(r.d) << ','
              << (r.error.empty() ? detail::format_real(r.final_f) : std::string()) << ','
              << (r.marker ? 1 : 0) << ',' << r.error << "\n";
    failed = failed || !r.error.empty();
  }
  return failed ? kExitRunFailure : kExitOk;
}

int cmd_oracle(const std::string& input, int64_t cap) {
  const InstanceBundle bundle = load_bundle(input);
  const OracleResult oracle = enumerate(bundle.field, cap);
  std::cout << "log_z " << detail::format_real(oracle.log_z) << "\n";
  for (int32_t i = 0; i < bundle.field.num_variables; ++i) {
    std::cout << "marginal " << i;
    for (int l = 0; l < bundle.field.cardinality(i); ++l)
      std::cout << ' '
                << detail::format_real(
                       oracle.marginals[static_cast<size_t>(bundle.field.offset(i) + l)]);
    std::cout << "\n";
  }
  std::cout << "map";
  for (int32_t l : oracle.map_assignment) std::cout << ' ' << l;
  std::cout << "\nmap_log_potential " << detail::format_real(oracle.map_log_potential) << "\n";
  return kExitOk;
}

int cmd_lipschitz(const std::string& input, int max_iters, double tol, double margin,
                  uint64_t seed) {
  const InstanceBundle bundle = load_bundle(input);
  const SpectralEstimate est = spectral_norm(bundle.field, max_iters, tol, seed);
  const double d = suggest_damping(est, margin);
  std::cout << "L " << detail::format_real(est.value) << "\n"
            << "iterations " << est.iterations_used << "\n"
            << "residual " << detail::format_real(est.residual) << "\n"
            << "d " << detail::format_real(d) << "\n"
            << "eta " << detail::format_real(eta_from_damping(d)) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mean-field inference over discrete random fields"};
  app.require_subcommand(1);

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "write a synthetic instance (UAI + JSON)");
  std::string gen_kind = "grid", gen_coupling = "mixed", gen_out = "instance";
  SyntheticSpec gen;
  gen_cmd->add_option("--kind", gen_kind, "grid|chain|complete");
  gen_cmd->add_option("--rows", gen.rows, "grid rows / node count factor");
  gen_cmd->add_option("--cols", gen.cols, "grid cols / node count factor");
  gen_cmd->add_option("--labels", gen.labels, "labels per variable (>= 2)");
  gen_cmd->add_option("--unary-scale", gen.unary_scale, "unary magnitude");
  gen_cmd->add_option("--pair-scale", gen.pair_scale, "coupling magnitude");
  gen_cmd->add_option("--coupling", gen_coupling, "attractive|repulsive|mixed");
  gen_cmd->add_option("--seed", gen.seed, "generator seed");
  gen_cmd->add_option("--out", gen_out, "output base path (writes <out>.uai and <out>.json)");

  // run
  auto* run_cmd = app.add_subcommand("run", "run schedules over instances and budgets");
  RunOptions run_opt;
  add_run_options(*run_cmd, run_opt);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "damping-sensitivity sweep over an eta grid");
  RunOptions sweep_opt;
  std::string eta_grid = "1,0.5,0.25,0.125,0.0625,0.03125,0.015625,0.0078125,0.00390625";
  add_run_options(*sweep_cmd, sweep_opt);
  auto* eta_grid_opt =
      sweep_cmd->add_option("--eta-grid", eta_grid, "comma-separated eta values in (0, 1]");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "exact log Z / marginals / MAP");
  std::string oracle_input;
  int64_t oracle_cap = kDefaultOracleCap;
  oracle_cmd->add_option("--input", oracle_input, "instance file")->required();
  oracle_cmd->add_option("--cap", oracle_cap, "joint state cap");

  // lipschitz
  auto* lip_cmd = app.add_subcommand("lipschitz", "spectral norm and suggested damping");
  std::string lip_input;
  int lip_iters = 1000;
  double lip_tol = 1e-8, lip_margin = 1.05;
  uint64_t lip_seed = 0;
  lip_cmd->add_option("--input", lip_input, "instance file")->required();
  lip_cmd->add_option("--max-iters", lip_iters, "power iteration cap");
  lip_cmd->add_option("--tol", lip_tol, "relative convergence tolerance");
  lip_cmd->add_option("--margin", lip_margin, "safety factor above the estimate (> 1)");
  lip_cmd->add_option("--seed", lip_seed, "start-vector seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitSpecError;
  }

  try {
    if (gen_cmd->parsed()) {
      gen.kind = parse_kind(gen_kind);
      gen.coupling = parse_coupling(gen_coupling);
      return cmd_generate(gen, gen_out);
    }
    if (run_cmd->parsed()) return cmd_run(run_opt);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_opt, eta_grid, eta_grid_opt->count() > 0);
    if (oracle_cmd->parsed()) return cmd_oracle(oracle_input, oracle_cap);
    if (lip_cmd->parsed()) return cmd_lipschitz(lip_input, lip_iters, lip_tol, lip_margin, lip_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSpecError;
  }
  return kExitSpecError;
}
