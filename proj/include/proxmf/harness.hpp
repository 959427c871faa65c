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
// Experiment harness: runs schedules across instances and budgets, decodes MAP
// labelings, computes accuracy against ground truth, and writes per-run trace
// CSVs plus a summary table. Numeric outputs are a pure function of the spec;
// wall-clock columns can be zeroed for byte-reproducible files.
#ifndef PROXMF_HARNESS_HPP
#define PROXMF_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "proxmf/json_io.hpp"
#include "proxmf/lipschitz.hpp"
#include "proxmf/oracle.hpp"
#include "proxmf/schedules.hpp"
#include "proxmf/synthetic.hpp"
#include "proxmf/uai.hpp"

namespace proxmf {

struct Budget {
  enum class Kind { iterations, wall_ms };
  Kind kind = Kind::iterations;
  int64_t amount = 500;

  std::string label() const {
    return (kind == Kind::iterations ? "it" : "ms") + std::to_string(amount);
  }
};

struct SyntheticSpec {
  GraphKind kind = GraphKind::grid;
  int rows = 2;
  int cols = 2;
  int labels = 2;
  double unary_scale = 1.0;
  double pair_scale = 1.0;
  Coupling coupling = Coupling::mixed;
  uint64_t seed = 0;

  std::string id() const {
    return std::string(graph_kind_name(kind)) + std::to_string(rows) + "x" + std::to_string(cols) +
           "L" + std::to_string(labels) + "-" + coupling_name(coupling) + "-s" +
           std::to_string(seed);
  }
};

/// One experiment input: exactly one of a UAI file, an instance JSON file, or
/// an inline generator spec.
struct InputSpec {
  std::string id;  // derived from the source when empty
  std::string uai_path;
  std::string json_path;
  std::optional<SyntheticSpec> generate;
};

struct ExperimentSpec {
  std::vector<InputSpec> inputs;
  std::vector<ScheduleConfig> schedules;
  std::vector<Budget> budgets;
  std::vector<double> eta_grid;  // sensitivity sweeps only
  std::string output_dir;        // no files written when empty
  uint64_t seed = 0;
  InitMode init = InitMode::uniform;
  int threads = 1;
  bool record_walltime = true;  // zero the wall columns for byte-stable CSVs
  int64_t oracle_cap = kDefaultOracleCap;
  bool auto_damping = false;  // d = margin * spectral norm for natural-space schedules
  double damping_margin = 1.05;
};

inline void validate(const ExperimentSpec& spec) {
  if (spec.inputs.empty()) throw ValidationError("experiment: no inputs");
  if (spec.schedules.empty()) throw ValidationError("experiment: no schedules");
  if (spec.budgets.empty()) throw ValidationError("experiment: no budgets");
  for (const ScheduleConfig& c : spec.schedules) validate(c);
  for (double eta : spec.eta_grid)
    if (!(eta > 0.0 && eta <= 1.0))
      throw ValidationError("experiment: eta grid values must lie in (0, 1]");
  if (spec.threads < 1) throw ValidationError("experiment: threads must be >= 1");
}

/// JSON form of an experiment: inputs (uai/json paths or inline generators),
/// schedules, budgets, and the run options, all optional except the first
/// three. See experiment_spec_from_json for the accepted keys.
inline ExperimentSpec experiment_spec_from_json(const nlohmann::json& j) {
  ExperimentSpec spec;
  for (const auto& ji : j.at("inputs")) {
    InputSpec in;
    in.id = ji.value("id", "");
    in.uai_path = ji.value("uai", "");
    in.json_path = ji.value("json", "");
    if (ji.contains("generate")) {
      const auto& jg = ji.at("generate");
      SyntheticSpec gen;
      gen.kind = graph_kind_from_name(jg.value("kind", "grid"));
      gen.rows = jg.value("rows", 2);
      gen.cols = jg.value("cols", 2);
      gen.labels = jg.value("labels", 2);
      gen.unary_scale = jg.value("unary_scale", 1.0);
      gen.pair_scale = jg.value("pair_scale", 1.0);
      gen.coupling = coupling_from_name(jg.value("coupling", "mixed"));
      gen.seed = jg.value("seed", uint64_t{0});
      in.generate = gen;
    }
    spec.inputs.push_back(std::move(in));
  }
  for (const auto& js : j.at("schedules")) {
    const std::string name = js.at("algorithm").get<std::string>();
    const auto alg = algorithm_from_name(name);
    if (!alg) throw ValidationError("unknown schedule '" + name + "'");
    ScheduleConfig cfg = ScheduleConfig::defaults(*alg);
    cfg.d = js.value("d", cfg.d);
    cfg.eta_adhoc = js.value("eta", cfg.eta_adhoc);
    cfg.gamma1 = js.value("gamma1", cfg.gamma1);
    cfg.gamma2 = js.value("gamma2", cfg.gamma2);
    cfg.epsilon = js.value("epsilon", cfg.epsilon);
    cfg.use_pre_update_momentum = js.value("pre_update_momentum", false);
    if (js.contains("tolerance")) cfg.tolerance = js.at("tolerance").get<double>();
    cfg.label = js.value("label", "");
    spec.schedules.push_back(std::move(cfg));
  }
  for (const auto& jb : j.at("budgets")) {
    Budget b;
    if (jb.contains("iterations")) {
      b.kind = Budget::Kind::iterations;
      b.amount = jb.at("iterations").get<int64_t>();
    } else if (jb.contains("wall_ms")) {
      b.kind = Budget::Kind::wall_ms;
      b.amount = jb.at("wall_ms").get<int64_t>();
    } else {
      throw ValidationError("budget entries need 'iterations' or 'wall_ms'");
    }
    spec.budgets.push_back(b);
  }
  spec.eta_grid = j.value("eta_grid", std::vector<double>{});
  spec.output_dir = j.value("output_dir", "");
  spec.seed = j.value("seed", uint64_t{0});
  const std::string init = j.value("init", "uniform");
  if (init == "uniform")
    spec.init = InitMode::uniform;
  else if (init == "unary")
    spec.init = InitMode::unary;
  else
    throw ValidationError("unknown init mode '" + init + "'");
  spec.threads = j.value("threads", 1);
  spec.record_walltime = j.value("record_walltime", true);
  spec.oracle_cap = j.value("oracle_cap", kDefaultOracleCap);
  spec.auto_damping = j.value("auto_damping", false);
  spec.damping_margin = j.value("damping_margin", 1.05);
  return spec;
}

inline nlohmann::json experiment_spec_to_json(const ExperimentSpec& spec) {
  nlohmann::json inputs = nlohmann::json::array();
  for (const InputSpec& in : spec.inputs) {
    nlohmann::json ji;
    if (!in.id.empty()) ji["id"] = in.id;
    if (!in.uai_path.empty()) ji["uai"] = in.uai_path;
    if (!in.json_path.empty()) ji["json"] = in.json_path;
    if (in.generate) {
      ji["generate"] = {{"kind", graph_kind_name(in.generate->kind)},
                        {"rows", in.generate->rows},
                        {"cols", in.generate->cols},
                        {"labels", in.generate->labels},
                        {"unary_scale", in.generate->unary_scale},
                        {"pair_scale", in.generate->pair_scale},
                        {"coupling", coupling_name(in.generate->coupling)},
                        {"seed", in.generate->seed}};
    }
    inputs.push_back(std::move(ji));
  }
  nlohmann::json schedules = nlohmann::json::array();
  for (const ScheduleConfig& c : spec.schedules) {
    nlohmann::json js = {{"algorithm", algorithm_name(c.algorithm)},
                         {"d", c.d},
                         {"eta", c.eta_adhoc},
                         {"gamma1", c.gamma1},
                         {"gamma2", c.gamma2},
                         {"epsilon", c.epsilon},
                         {"pre_update_momentum", c.use_pre_update_momentum}};
    if (c.tolerance) js["tolerance"] = *c.tolerance;
    if (!c.label.empty()) js["label"] = c.label;
    schedules.push_back(std::move(js));
  }
  nlohmann::json budgets = nlohmann::json::array();
  for (const Budget& b : spec.budgets) {
    if (b.kind == Budget::Kind::iterations)
      budgets.push_back({{"iterations", b.amount}});
    else
      budgets.push_back({{"wall_ms", b.amount}});
  }
  return {{"inputs", std::move(inputs)},
          {"schedules", std::move(schedules)},
          {"budgets", std::move(budgets)},
          {"eta_grid", spec.eta_grid},
          {"output_dir", spec.output_dir},
          {"seed", spec.seed},
          {"init", spec.init == InitMode::uniform ? "uniform" : "unary"},
          {"threads", spec.threads},
          {"record_walltime", spec.record_walltime},
          {"oracle_cap", spec.oracle_cap},
          {"auto_damping", spec.auto_damping},
          {"damping_margin", spec.damping_margin}};
}

struct SummaryRow {
  std::string instance_id;
  std::string schedule;
  std::string budget;
  double final_f = 0.0;
  std::optional<double> final_kl;
  std::optional<double> accuracy;
  int iterations = 0;
  int64_t wall_ns = 0;
  std::string error;  // empty on success
};

struct SweepRow {
  std::string instance_id;
  std::string schedule;
  double eta = 1.0;
  double d = 0.0;
  double final_f = 0.0;
  bool marker = false;  // the d = L row added next to the grid
  std::string error;
};

struct ExperimentResult {
  std::vector<SummaryRow> summary;
  std::vector<std::string> trace_files;
  std::string summary_path;
  bool any_failed = false;
};

/// Per-variable argmax of the mean parameters, lowest label index on ties.
inline std::vector<int32_t> decode_map(const MeanFieldState& state) {
  std::vector<int32_t> labels(static_cast<size_t>(state.num_variables));
  for (int32_t i = 0; i < state.num_variables; ++i) {
    const auto qi = state.q_of(i);
    int32_t best = 0;
    for (size_t l = 1; l < qi.size(); ++l)
      if (qi[l] > qi[static_cast<size_t>(best)]) best = static_cast<int32_t>(l);
    labels[static_cast<size_t>(i)] = best;
  }
  return labels;
}

/// Fraction of masked positions where `labels` agrees with the truth. An empty
/// mask scores 1.0 and warns, since nothing was evaluated.
inline double accuracy(std::span<const int32_t> labels, const GroundTruth& truth) {
  if (labels.size() != truth.labels.size() || labels.size() != truth.mask.size())
    throw ValidationError("accuracy: shape mismatch");
  int64_t masked = 0;
  int64_t hits = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (!truth.mask[i]) continue;
    ++masked;
    if (labels[i] == truth.labels[i]) ++hits;
  }
  if (masked == 0) {
    std::cerr << "accuracy: empty mask, defining accuracy as 1.0\n";
    return 1.0;
  }
  return static_cast<double>(hits) / static_cast<double>(masked);
}

namespace detail {

inline std::string csv_double(double x) { return format_real(x); }

inline std::string csv_optional(const std::optional<double>& x) {
  return x ? format_real(*x) : std::string();
}

struct LoadedInstance {
  InstanceBundle bundle;
  std::optional<double> log_z;
  std::optional<SpectralEstimate> spectral;
  std::string spectral_error;
};

inline std::string input_id(const InputSpec& in) {
  if (!in.id.empty()) return in.id;
  if (in.generate) return in.generate->id();
  const std::string& path = !in.uai_path.empty() ? in.uai_path : in.json_path;
  return std::filesystem::path(path).stem().string();
}

inline LoadedInstance load_instance(const InputSpec& in, const ExperimentSpec& spec,
                                    bool want_spectral) {
  LoadedInstance out;
  out.bundle.id = input_id(in);
  const int sources = (!in.uai_path.empty()) + (!in.json_path.empty()) + (in.generate ? 1 : 0);
  if (sources != 1)
    throw ValidationError("input '" + out.bundle.id +
                          "': exactly one of uai, json, or generate is required");
  if (in.generate) {
    SyntheticInstance inst = generate_synthetic(
        in.generate->kind, in.generate->rows, in.generate->cols, in.generate->labels,
        in.generate->unary_scale, in.generate->pair_scale, in.generate->coupling,
        in.generate->seed);
    out.bundle.field = std::move(inst.field);
    out.bundle.truth = std::move(inst.truth);
    out.bundle.seed = in.generate->seed;
  } else if (!in.uai_path.empty()) {
    out.bundle.field = parse_uai(read_text_file(in.uai_path));
  } else {
    const std::string embedded_id_fallback = out.bundle.id;
    out.bundle = instance_from_json(nlohmann::json::parse(read_text_file(in.json_path)));
    if (!in.id.empty())
      out.bundle.id = in.id;
    else if (out.bundle.id.empty())
      out.bundle.id = embedded_id_fallback;
  }

  if (joint_state_count(out.bundle.field, spec.oracle_cap) > 0)
    out.log_z = enumerate(out.bundle.field, spec.oracle_cap, spec.threads).log_z;
  if (want_spectral) {
    try {
      out.spectral = spectral_norm(out.bundle.field, 10000, 1e-10, spec.seed, spec.threads);
    } catch (const std::exception& e) {
      out.spectral_error = e.what();
    }
  }
  return out;
}

inline bool uses_natural_damping(Algorithm a) {
  return a == Algorithm::ours_fixed || a == Algorithm::ours_adaptive ||
         a == Algorithm::ours_momentum || a == Algorithm::ours_adam;
}

inline ScheduleConfig apply_budget(ScheduleConfig cfg, const Budget& budget, int threads) {
  cfg.threads = threads;
  if (budget.kind == Budget::Kind::iterations) {
    cfg.max_iterations = static_cast<int>(budget.amount);
  } else {
    cfg.time_budget = std::chrono::milliseconds(budget.amount);
    cfg.max_iterations = 2'000'000;  // trace-memory guard for wall budgets
  }
  return cfg;
}

inline std::string trace_csv(const std::string& instance_id, const std::string& schedule,
                             const std::vector<TraceRecord>& trace, bool record_walltime) {
  std::string out = "instance_id,schedule,iter,wall_ns,E,negH,F,kl,max_mean_delta\n";
  for (const TraceRecord& r : trace) {
    out += instance_id;
    out += ',';
    out += schedule;
    out += ',';
    out += std::to_string(r.iteration);
    out += ',';
    out += std::to_string(record_walltime ? r.wall_time.count() : 0);
    out += ',';
    out += csv_double(r.objective.expected_energy);
    out += ',';
    out += csv_double(r.objective.neg_entropy);
    out += ',';
    out += csv_double(r.objective.free_energy);
    out += ',';
    out += csv_optional(r.kl);
    out += ',';
    out += csv_double(r.max_mean_delta);
    out += '\n';
  }
  return out;
}

inline std::string sanitize_component(std::string s) {
  for (char& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' || c == '_'))
      c = '_';
  return s;
}

}  // namespace detail

inline std::string summary_csv(const std::vector<SummaryRow>& rows, bool record_walltime = true) {
  std::string out = "instance_id,schedule,budget,final_F,final_kl,accuracy,iterations,wall_ns,error\n";
  for (const SummaryRow& r : rows) {
    out += r.instance_id;
    out += ',';
    out += r.schedule;
    out += ',';
    out += r.budget;
    out += ',';
    out += r.error.empty() ? detail::csv_double(r.final_f) : std::string();
    out += ',';
    out += detail::csv_optional(r.final_kl);
    out += ',';
    out += detail::csv_optional(r.accuracy);
    out += ',';
    out += std::to_string(r.iterations);
    out += ',';
    out += std::to_string(record_walltime ? r.wall_ns : 0);
    out += ',';
    out += r.error;
    out += '\n';
  }
  return out;
}

/// Runs every (instance, schedule, budget) combination in spec order. Per-run
/// failures land in the summary's error column and the batch continues.
inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  ExperimentResult result;
  const bool write_files = !spec.output_dir.empty();
  if (write_files) std::filesystem::create_directories(spec.output_dir);

  for (const InputSpec& input : spec.inputs) {
    std::optional<detail::LoadedInstance> loaded;
    std::string load_error;
    try {
      loaded = detail::load_instance(input, spec, spec.auto_damping);
    } catch (const std::exception& e) {
      load_error = e.what();
    }

    for (const ScheduleConfig& schedule : spec.schedules) {
      for (const Budget& budget : spec.budgets) {
        SummaryRow row;
        row.instance_id = loaded ? loaded->bundle.id : detail::input_id(input);
        row.schedule = schedule.display_name();
        row.budget = budget.label();
        if (!load_error.empty()) {
          row.error = load_error;
          result.any_failed = true;
          result.summary.push_back(std::move(row));
          continue;
        }
        try {
          ScheduleConfig cfg = detail::apply_budget(schedule, budget, spec.threads);
          if (spec.auto_damping && detail::uses_natural_damping(cfg.algorithm)) {
            if (!loaded->spectral)
              throw ValidationError("auto damping unavailable: " + loaded->spectral_error);
            cfg.d = suggest_damping(*loaded->spectral, spec.damping_margin);
          }
          const RunResult run =
              run_schedule(loaded->bundle.field, cfg, spec.init, loaded->log_z);
          row.iterations = static_cast<int>(run.trace.size());
          if (!run.trace.empty()) {
            row.final_f = run.trace.back().objective.free_energy;
            row.final_kl = run.trace.back().kl;
            row.wall_ns = run.trace.back().wall_time.count();
          }
          if (loaded->bundle.truth) {
            const std::vector<int32_t> labels = decode_map(run.final_state);
            row.accuracy = accuracy(labels, *loaded->bundle.truth);
          }
          if (write_files) {
            const std::string name = detail::sanitize_component(row.instance_id) + "__" +
                                     detail::sanitize_component(row.schedule) + "__" +
                                     row.budget + ".csv";
            const std::string path = (std::filesystem::path(spec.output_dir) / name).string();
            write_text_file(path, detail::trace_csv(row.instance_id, row.schedule, run.trace,
                                                    spec.record_walltime));
            result.trace_files.push_back(path);
          }
        } catch (const std::exception& e) {
          row.error = e.what();
          result.any_failed = true;
        }
        result.summary.push_back(std::move(row));
      }
    }
  }

  if (write_files) {
    result.summary_path = (std::filesystem::path(spec.output_dir) / "summary.csv").string();
    write_text_file(result.summary_path, summary_csv(result.summary, spec.record_walltime));
  }
  return result;
}

/// Final F per (schedule, eta) at the largest iteration budget, for the
/// mean-space and natural-space damped schedules in the spec. Natural-space
/// schedules map eta to d = 1/eta - 1 and also get a marker row at the
/// suggested damping d = L.
inline std::vector<SweepRow> sensitivity_sweep(const ExperimentSpec& spec) {
  validate(spec);
  if (spec.eta_grid.empty()) throw ValidationError("sensitivity sweep: eta grid is empty");

  int64_t iterations = 0;
  for (const Budget& b : spec.budgets)
    if (b.kind == Budget::Kind::iterations) iterations = std::max(iterations, b.amount);
  if (iterations == 0) iterations = 500;

  std::vector<SweepRow> rows;
  for (const InputSpec& input : spec.inputs) {
    std::optional<detail::LoadedInstance> loaded;
    std::string load_error;
    try {
      loaded = detail::load_instance(input, spec, true);
    } catch (const std::exception& e) {
      load_error = e.what();
    }

    for (const ScheduleConfig& schedule : spec.schedules) {
      const Algorithm alg = schedule.algorithm;
      const bool natural = detail::uses_natural_damping(alg);
      if (!natural && alg != Algorithm::adhoc) continue;

      auto run_at = [&](double eta, bool marker) {
        SweepRow row;
        row.instance_id = loaded ? loaded->bundle.id : detail::input_id(input);
        row.schedule = schedule.display_name();
        row.eta = eta;
        row.d = natural ? (1.0 / eta - 1.0) : 0.0;
        row.marker = marker;
        if (!load_error.empty()) {
          row.error = load_error;
          rows.push_back(std::move(row));
          return;
        }
        try {
          ScheduleConfig cfg = schedule;
          cfg.threads = spec.threads;
          cfg.max_iterations = static_cast<int>(iterations);
          cfg.time_budget.reset();
          if (natural)
            cfg.d = row.d;
          else
            cfg.eta_adhoc = eta;
          const RunResult run =
              run_schedule(loaded->bundle.field, cfg, spec.init, loaded->log_z);
          row.final_f =
              run.trace.empty() ? 0.0 : run.trace.back().objective.free_energy;
        } catch (const std::exception& e) {
          row.error = e.what();
        }
        rows.push_back(std::move(row));
      };

      for (double eta : spec.eta_grid) run_at(eta, false);
      if (natural && loaded && loaded->spectral)
        run_at(eta_from_damping(loaded->spectral->value), true);
    }
  }

  if (!spec.output_dir.empty()) {
    std::filesystem::create_directories(spec.output_dir);
    std::string csv = "instance_id,schedule,eta,d,final_F,marker,error\n";
    for (const SweepRow& r : rows) {
      csv += r.instance_id;
      csv += ',';
      csv += r.schedule;
      csv += ',';
      csv += detail::csv_double(r.eta);
      csv += ',';
      csv += detail::csv_double(r.d);
      csv += ',';
      csv += r.error.empty() ? detail::csv_double(r.final_f) : std::string();
      csv += ',';
      csv += r.marker ? "1" : "0";
      csv += ',';
      csv += r.error;
      csv += '\n';
    }
    write_text_file((std::filesystem::path(spec.output_dir) / "sweep.csv").string(), csv);
  }
  return rows;
}

}  // namespace proxmf

#endif  // PROXMF_HARNESS_HPP
