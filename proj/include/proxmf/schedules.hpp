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
// Update schedules over mean-field beliefs.
//
//   sweep          sequential coordinate descent, monotone in F
//   full_parallel  all coordinates recomputed from the previous iterate
//   adhoc          damping in mean-parameter space:
//                      q^{t+1} = (1-eta) q^t + eta softmax(-theta*)
//   ours_fixed     damping in natural-parameter space with eta = 1/(1+d):
//                      theta^{t+1} = eta theta* + (1-eta) theta^t,
//                  the closed form of a proximal step whose proximal function
//                  is a weighted KL divergence; converges whenever d exceeds a
//                  Lipschitz constant of grad E
//   ours_adaptive  binary-only anisotropic weights d_i = q_{i,0} q_{i,1} d
//   ours_momentum  direction is an exponential average of grad E
//   ours_adam      second-moment scaled per-entry weights with the momentum
//                  direction
//
// Parallel schedules compute everything from the pre-step snapshot and commit
// simultaneously; per-variable work is partitioned across threads with
// fixed-order accumulation, so traces are identical for any thread count.
#ifndef PROXMF_SCHEDULES_HPP
#define PROXMF_SCHEDULES_HPP

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proxmf/energy.hpp"
#include "proxmf/pairwise_view.hpp"

namespace proxmf {

enum class Algorithm {
  sweep,
  full_parallel,
  adhoc,
  ours_fixed,
  ours_adaptive,
  ours_momentum,
  ours_adam,
};

inline const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::sweep: return "sweep";
    case Algorithm::full_parallel: return "full_parallel";
    case Algorithm::adhoc: return "adhoc";
    case Algorithm::ours_fixed: return "ours_fixed";
    case Algorithm::ours_adaptive: return "ours_adaptive";
    case Algorithm::ours_momentum: return "ours_momentum";
    case Algorithm::ours_adam: return "ours_adam";
  }
  return "unknown";
}

inline std::optional<Algorithm> algorithm_from_name(std::string_view name) {
  for (Algorithm a : {Algorithm::sweep, Algorithm::full_parallel, Algorithm::adhoc,
                      Algorithm::ours_fixed, Algorithm::ours_adaptive, Algorithm::ours_momentum,
                      Algorithm::ours_adam})
    if (name == algorithm_name(a)) return a;
  return std::nullopt;
}

struct ScheduleConfig {
  Algorithm algorithm = Algorithm::ours_fixed;
  double d = 0.0;          // damping weight; eta = 1/(1+d)
  double eta_adhoc = 0.5;  // mean-space damping weight, in (0, 1]
  double gamma1 = 0.95;    // momentum decay (0.99 for ours_adam, see defaults())
  double gamma2 = 0.999;   // second-moment decay
  double epsilon = 1e-8;
  // The damped update can apply either the freshly updated momentum average or
  // the previous one; the fresh average is the default and makes gamma1 = 0
  // coincide with ours_fixed.
  bool use_pre_update_momentum = false;
  int max_iterations = 500;
  std::optional<std::chrono::nanoseconds> time_budget;
  std::optional<double> tolerance;  // stop when |F^{t+1} - F^t| falls below
  int threads = 1;
  std::string label;  // reporting name; algorithm_name() when empty

  static ScheduleConfig defaults(Algorithm a) {
    ScheduleConfig c;
    c.algorithm = a;
    if (a == Algorithm::ours_adam) c.gamma1 = 0.99;
    return c;
  }

  std::string display_name() const { return label.empty() ? algorithm_name(algorithm) : label; }
};

inline void validate(const ScheduleConfig& c) {
  if (!(c.d >= 0.0) || !std::isfinite(c.d))
    throw ValidationError("schedule: damping weight d must be finite and >= 0");
  if (!(c.eta_adhoc > 0.0 && c.eta_adhoc <= 1.0))
    throw ValidationError("schedule: eta_adhoc must lie in (0, 1]");
  if (!(c.gamma1 >= 0.0 && c.gamma1 <= 1.0))
    throw ValidationError("schedule: gamma1 must lie in [0, 1]");
  if (!(c.gamma2 >= 0.0 && c.gamma2 <= 1.0))
    throw ValidationError("schedule: gamma2 must lie in [0, 1]");
  if (!(c.epsilon > 0.0)) throw ValidationError("schedule: epsilon must be positive");
  if (c.max_iterations < 0) throw ValidationError("schedule: max_iterations must be >= 0");
  if (c.threads < 1) throw ValidationError("schedule: threads must be >= 1");
}

/// Optimizer state carried across iterations by the momentum and ADAM rules.
struct OptimizerState {
  std::vector<double> m;       // exponential average of grad E
  std::vector<double> v;       // second moment of the natural gradient, > 0
  std::vector<double> d_diag;  // last applied proximal diagonal, >= 0

  bool initialized() const { return !m.empty(); }
};

struct TraceRecord {
  int iteration = 0;                        // 1-based
  std::chrono::nanoseconds wall_time{0};    // from step-loop start, nondecreasing
  ObjectiveValue objective;
  std::optional<double> kl;                 // F + log Z when log Z is known
  double max_mean_delta = 0.0;              // max_{i,l} |q^{t+1} - q^t|
};

enum class StopReason { max_iterations, tolerance, time_budget };

inline const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::max_iterations: return "max_iterations";
    case StopReason::tolerance: return "tolerance";
    case StopReason::time_budget: return "time_budget";
  }
  return "unknown";
}

enum class InitMode { uniform, unary };

/// uniform: theta = 0 everywhere; unary: theta_{i,l} = -phi_i(l).
inline MeanFieldState init_state(const DiscreteField& field, InitMode mode) {
  MeanFieldState s = make_state(field);
  if (mode == InitMode::unary) {
    for (const Factor& f : field.factors) {
      if (f.arity() != 1) continue;
      auto th = s.theta_of(f.scope[0]);
      for (size_t l = 0; l < th.size(); ++l) th[l] = -f.table[l];
    }
    refresh_mean_all(s);
  }
  return s;
}

namespace detail {

inline void require_binary(const DiscreteField& field, const char* who) {
  for (int32_t c : field.cardinalities)
    if (c != 2) throw ValidationError(std::string(who) + ": adaptive step requires binary variables");
}

// Shared engine behind the step functions and the iteration driver. Owns the
// scratch buffers and the compiled pairwise layout so the driver never
// allocates inside the loop. Every parallel schedule runs as one fused pass:
// per variable, gather grad E from the snapshot, apply the schedule's
// per-entry update, renormalize, and track movement. Each variable is written
// by exactly one worker and its accumulation order is fixed, so results are
// identical for every thread count.
class Stepper {
 public:
  Stepper(const DiscreteField& field, int threads)
      : field_(field),
        threads_(threads < 1 ? 1 : threads),
        view_(PairwiseView::build(field)),
        theta_next_(static_cast<size_t>(field.state_dim())),
        q_next_(static_cast<size_t>(field.state_dim())),
        var_delta_(static_cast<size_t>(field.num_variables)) {}

  const std::optional<PairwiseView>& view() const { return view_; }

  ObjectiveValue objective(const MeanFieldState& s) const {
    if (view_) {
      ObjectiveValue out;
      out.expected_energy = view_->energy(s.q, threads_);
      out.neg_entropy = neg_entropy(s, threads_);
      out.free_energy = out.expected_energy + out.neg_entropy;
      return out;
    }
    return free_energy(field_, s, threads_);
  }

  // One sequential pass: each coordinate sees every earlier update.
  double sweep(MeanFieldState& s) {
    double max_delta = 0.0;
    std::vector<double> tmp;
    for (int32_t i = 0; i < field_.num_variables; ++i) {
      const int li = field_.cardinality(i);
      tmp.resize(static_cast<size_t>(li));
      theta_star_into(field_, s.q, i, tmp);
      auto th = s.theta_of(i);
      auto qi = s.q_of(i);
      for (int l = 0; l < li; ++l) th[static_cast<size_t>(l)] = tmp[static_cast<size_t>(l)];
      for (int l = 0; l < li; ++l) tmp[static_cast<size_t>(l)] = qi[static_cast<size_t>(l)];
      refresh_mean(s, i);
      for (int l = 0; l < li; ++l)
        max_delta = std::max(max_delta,
                             std::abs(qi[static_cast<size_t>(l)] - tmp[static_cast<size_t>(l)]));
    }
    return max_delta;
  }

  double full_parallel(MeanFieldState& s) {
    return natural_pass(s, [&](int64_t, int64_t off, int li, const double* g) {
      for (int l = 0; l < li; ++l) {
        const size_t e = static_cast<size_t>(off + l);
        theta_next_[e] = 1.0 * g[l] + 0.0 * s.theta[e];
      }
    });
  }

  double fixed(MeanFieldState& s, double d) {
    const double eta = 1.0 / (1.0 + d);
    return natural_pass(s, [&, eta](int64_t, int64_t off, int li, const double* g) {
      for (int l = 0; l < li; ++l) {
        const size_t e = static_cast<size_t>(off + l);
        theta_next_[e] = eta * g[l] + (1.0 - eta) * s.theta[e];
      }
    });
  }

  double adaptive(MeanFieldState& s, double d, OptimizerState* opt) {
    require_binary(field_, "step_adaptive");
    if (opt && opt->d_diag.size() != theta_next_.size())
      opt->d_diag.assign(theta_next_.size(), 0.0);
    return natural_pass(s, [&](int64_t, int64_t off, int li, const double* g) {
      const double dt = s.q[static_cast<size_t>(off)] * s.q[static_cast<size_t>(off) + 1] * d;
      const double eta = 1.0 / (1.0 + dt);
      for (int l = 0; l < li; ++l) {
        const size_t e = static_cast<size_t>(off + l);
        if (opt) opt->d_diag[e] = dt;
        theta_next_[e] = eta * g[l] + (1.0 - eta) * s.theta[e];
      }
    });
  }

  double adhoc(MeanFieldState& s, double eta) {
    gather_pass(s, [&](int64_t i, int64_t off, int li, const double* g,
                       std::vector<double>& scratch) {
      scratch.resize(static_cast<size_t>(li));
      softmax_neg_into({g, static_cast<size_t>(li)}, scratch);
      double dmax = 0.0;
      for (int l = 0; l < li; ++l) {
        const size_t e = static_cast<size_t>(off + l);
        const double qn = (1.0 - eta) * s.q[e] + eta * scratch[static_cast<size_t>(l)];
        q_next_[e] = qn;
        theta_next_[e] = -std::log(qn);
        dmax = std::max(dmax, std::abs(qn - s.q[e]));
      }
      var_delta_[static_cast<size_t>(i)] = dmax;
    });
    s.q.swap(q_next_);
    s.theta.swap(theta_next_);
    return max_var_delta();
  }

  double momentum(MeanFieldState& s, double d, double gamma1, bool pre_update,
                  OptimizerState& opt) {
    const bool init = opt.m.size() != theta_next_.size();
    if (init) allocate_optimizer(opt);
    const double eta = 1.0 / (1.0 + d);
    return natural_pass(s, [&, eta](int64_t, int64_t off, int li, const double* g) {
      for (int l = 0; l < li; ++l) {
        const size_t e = static_cast<size_t>(off + l);
        if (init) opt.m[e] = g[l];  // grad E at the initial beliefs
        if (pre_update) {
          theta_next_[e] = eta * opt.m[e] + (1.0 - eta) * s.theta[e];
          opt.m[e] = gamma1 * opt.m[e] + (1.0 - gamma1) * g[l];
        } else {
          opt.m[e] = gamma1 * opt.m[e] + (1.0 - gamma1) * g[l];
          theta_next_[e] = eta * opt.m[e] + (1.0 - eta) * s.theta[e];
        }
      }
    });
  }

  double adam(MeanFieldState& s, double d, double gamma1, double gamma2, double epsilon,
              bool pre_update, OptimizerState& opt) {
    const bool init = opt.m.size() != theta_next_.size();
    if (init) allocate_optimizer(opt, epsilon);
    // Second moment of the raw natural gradient theta^t + grad E(q^t); the
    // proximal diagonal is clamped at zero where sqrt(v) d + eps - 1 would go
    // negative, capping eta at one.
    return natural_pass(s, [&](int64_t, int64_t off, int li, const double* g) {
      for (int l = 0; l < li; ++l) {
        const size_t e = static_cast<size_t>(off + l);
        if (init) opt.m[e] = g[l];
        const double r = s.theta[e] + g[l];
        const double v = gamma2 * r * r + (1.0 - gamma2) * opt.v[e];
        opt.v[e] = v;
        const double dt = std::sqrt(v) * d + epsilon - 1.0;
        const double dclamped = dt > 0.0 ? dt : 0.0;
        opt.d_diag[e] = dclamped;
        const double eta = 1.0 / (1.0 + dclamped);
        if (pre_update) {
          theta_next_[e] = eta * opt.m[e] + (1.0 - eta) * s.theta[e];
          opt.m[e] = gamma1 * opt.m[e] + (1.0 - gamma1) * g[l];
        } else {
          opt.m[e] = gamma1 * opt.m[e] + (1.0 - gamma1) * g[l];
          theta_next_[e] = eta * opt.m[e] + (1.0 - eta) * s.theta[e];
        }
      }
    });
  }

  double step(const ScheduleConfig& cfg, MeanFieldState& s, OptimizerState& opt) {
    switch (cfg.algorithm) {
      case Algorithm::sweep: return sweep(s);
      case Algorithm::full_parallel: return full_parallel(s);
      case Algorithm::adhoc: return adhoc(s, cfg.eta_adhoc);
      case Algorithm::ours_fixed: return fixed(s, cfg.d);
      case Algorithm::ours_adaptive: return adaptive(s, cfg.d, &opt);
      case Algorithm::ours_momentum:
        return momentum(s, cfg.d, cfg.gamma1, cfg.use_pre_update_momentum, opt);
      case Algorithm::ours_adam:
        return adam(s, cfg.d, cfg.gamma1, cfg.gamma2, cfg.epsilon, cfg.use_pre_update_momentum,
                    opt);
    }
    throw ValidationError("unknown algorithm");
  }

 private:
  void allocate_optimizer(OptimizerState& opt, double v0 = 1e-8) {
    opt.m.assign(theta_next_.size(), 0.0);
    opt.v.assign(theta_next_.size(), v0);
    opt.d_diag.assign(theta_next_.size(), 0.0);
  }

  // Gathers grad E per variable from the snapshot q and hands it to `body`
  // along with a per-worker scratch vector.
  template <class Body>
  void gather_pass(const MeanFieldState& s, Body&& body) {
    const bool pairwise = view_.has_value();
    if (pairwise && view_->all_binary) {
      const PairwiseView& v = *view_;
      parallel_for_ranges(
          static_cast<int64_t>(field_.num_variables), threads_, [&](int64_t vb, int64_t ve) {
            std::vector<double> scratch;
            double g[2];
            for (int64_t i = vb; i < ve; ++i) {
              v.gather_one(s.q, i, g);
              body(i, i * 2, 2, static_cast<const double*>(g), scratch);
            }
          });
      return;
    }
    parallel_for_ranges(
        static_cast<int64_t>(field_.num_variables), threads_, [&](int64_t vb, int64_t ve) {
          std::vector<double> grad(8);
          std::vector<double> scratch;
          for (int64_t i = vb; i < ve; ++i) {
            const int64_t off = s.var_offset[static_cast<size_t>(i)];
            const int li = s.cardinalities[static_cast<size_t>(i)];
            grad.resize(static_cast<size_t>(li));
            double* g = grad.data();
            if (pairwise) {
              view_->gather_one(s.q, i, g);
            } else {
              theta_star_into(field_, s.q, static_cast<int32_t>(i),
                              {g, static_cast<size_t>(li)});
            }
            body(i, off, li, static_cast<const double*>(g), scratch);
          }
        });
  }

  // Fused natural-parameter step: `policy` fills theta_next_ for one variable
  // from its gradient; the pass renormalizes and tracks movement, then the
  // buffers are committed at once. The all-binary loop inlines the two-label
  // softmax with the same expressions as softmax_neg_into, so its results are
  // bit-identical to the generic path.
  template <class Policy>
  double natural_pass(MeanFieldState& s, Policy&& policy) {
    if (view_ && view_->all_binary) {
      const PairwiseView& v = *view_;
      parallel_for_ranges(
          static_cast<int64_t>(field_.num_variables), threads_, [&](int64_t vb, int64_t ve) {
            double g[2];
            for (int64_t i = vb; i < ve; ++i) {
              v.gather_one(s.q, i, g);
              const int64_t off = i * 2;
              policy(i, off, 2, static_cast<const double*>(g));
              const double t0 = theta_next_[static_cast<size_t>(off)];
              const double t1 = theta_next_[static_cast<size_t>(off) + 1];
              double q0, q1;
              if (t0 <= t1) {
                const double e = std::exp(t0 - t1);
                const double inv = 1.0 / (1.0 + e);
                q0 = inv;
                q1 = e * inv;
              } else {
                const double e = std::exp(t1 - t0);
                const double inv = 1.0 / (e + 1.0);
                q0 = e * inv;
                q1 = inv;
              }
              q_next_[static_cast<size_t>(off)] = q0;
              q_next_[static_cast<size_t>(off) + 1] = q1;
              const double d0 = std::abs(q0 - s.q[static_cast<size_t>(off)]);
              const double d1 = std::abs(q1 - s.q[static_cast<size_t>(off) + 1]);
              var_delta_[static_cast<size_t>(i)] = d0 > d1 ? d0 : d1;
            }
          });
      s.theta.swap(theta_next_);
      s.q.swap(q_next_);
      return max_var_delta();
    }
    gather_pass(s, [&](int64_t i, int64_t off, int li, const double* g, std::vector<double>&) {
      policy(i, off, li, g);
      softmax_neg_into({theta_next_.data() + off, static_cast<size_t>(li)},
                       {q_next_.data() + off, static_cast<size_t>(li)});
      double dmax = 0.0;
      for (int l = 0; l < li; ++l) {
        const size_t e = static_cast<size_t>(off + l);
        dmax = std::max(dmax, std::abs(q_next_[e] - s.q[e]));
      }
      var_delta_[static_cast<size_t>(i)] = dmax;
    });
    s.theta.swap(theta_next_);
    s.q.swap(q_next_);
    return max_var_delta();
  }

  double max_var_delta() const {
    double m = 0.0;
    for (double x : var_delta_) m = std::max(m, x);
    return m;
  }

  const DiscreteField& field_;
  int threads_;
  std::optional<PairwiseView> view_;
  std::vector<double> theta_next_;
  std::vector<double> q_next_;
  std::vector<double> var_delta_;
};

}  // namespace detail

// Single-step entry points. Each returns the post-step state and leaves the
// input untouched; the driver below reuses one engine instead.

inline MeanFieldState step_sweep(const DiscreteField& field, const MeanFieldState& state) {
  require_validated(field);
  MeanFieldState s = state;
  detail::Stepper(field, 1).sweep(s);
  return s;
}

inline MeanFieldState step_full_parallel(const DiscreteField& field, const MeanFieldState& state,
                                         int threads = 1) {
  require_validated(field);
  MeanFieldState s = state;
  detail::Stepper(field, threads).full_parallel(s);
  return s;
}

inline MeanFieldState step_adhoc(const DiscreteField& field, const MeanFieldState& state,
                                 double eta_adhoc, int threads = 1) {
  require_validated(field);
  if (!(eta_adhoc > 0.0 && eta_adhoc <= 1.0))
    throw ValidationError("step_adhoc: eta must lie in (0, 1]");
  MeanFieldState s = state;
  detail::Stepper(field, threads).adhoc(s, eta_adhoc);
  return s;
}

inline MeanFieldState step_fixed(const DiscreteField& field, const MeanFieldState& state, double d,
                                 int threads = 1) {
  require_validated(field);
  if (!(d >= 0.0)) throw ValidationError("step_fixed: d must be >= 0");
  MeanFieldState s = state;
  detail::Stepper(field, threads).fixed(s, d);
  return s;
}

inline MeanFieldState step_adaptive(const DiscreteField& field, const MeanFieldState& state,
                                    double d, int threads = 1) {
  require_validated(field);
  if (!(d >= 0.0)) throw ValidationError("step_adaptive: d must be >= 0");
  MeanFieldState s = state;
  detail::Stepper(field, threads).adaptive(s, d, nullptr);
  return s;
}

inline MeanFieldState step_momentum(const DiscreteField& field, const MeanFieldState& state,
                                    OptimizerState& opt, double d, double gamma1,
                                    bool use_pre_update_momentum = false, int threads = 1) {
  require_validated(field);
  MeanFieldState s = state;
  detail::Stepper(field, threads).momentum(s, d, gamma1, use_pre_update_momentum, opt);
  return s;
}

inline MeanFieldState step_adam(const DiscreteField& field, const MeanFieldState& state,
                                OptimizerState& opt, double d, double gamma1, double gamma2,
                                double epsilon, bool use_pre_update_momentum = false,
                                int threads = 1) {
  require_validated(field);
  MeanFieldState s = state;
  detail::Stepper(field, threads).adam(s, d, gamma1, gamma2, epsilon, use_pre_update_momentum,
                                       opt);
  return s;
}

struct RunResult {
  std::vector<TraceRecord> trace;
  MeanFieldState final_state;
  StopReason stop_reason = StopReason::max_iterations;
  OptimizerState optimizer;
};

/// Applies the configured step until max_iterations, the time budget, or the
/// |dF| tolerance is hit. F is evaluated after each commit; when a log Z is
/// supplied every record also carries KL = F + log Z. Budget time covers the
/// step loop only.
inline RunResult run_schedule(const DiscreteField& field, const ScheduleConfig& cfg, InitMode mode,
                              std::optional<double> oracle_log_z = std::nullopt,
                              const MeanFieldState* initial = nullptr) {
  require_validated(field);
  validate(cfg);
  if (cfg.algorithm == Algorithm::ours_adaptive) detail::require_binary(field, "run_schedule");

  RunResult result;
  result.final_state = initial ? *initial : init_state(field, mode);
  MeanFieldState& s = result.final_state;
  if (s.dim() != field.state_dim()) throw ValidationError("run_schedule: initial state mismatch");

  detail::Stepper stepper(field, cfg.threads);
  result.trace.reserve(static_cast<size_t>(std::min(cfg.max_iterations, 4096)));

  double prev_f = 0.0;
  bool have_prev = false;
  const auto t0 = std::chrono::steady_clock::now();
  result.stop_reason = StopReason::max_iterations;
  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    if (cfg.time_budget &&
        std::chrono::steady_clock::now() - t0 >= *cfg.time_budget) {
      result.stop_reason = StopReason::time_budget;
      break;
    }
    const double delta = stepper.step(cfg, s, result.optimizer);
    const ObjectiveValue obj = stepper.objective(s);
    TraceRecord rec;
    rec.iteration = iter;
    rec.wall_time =
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0);
    rec.objective = obj;
    if (oracle_log_z) rec.kl = kl_to_posterior(obj, *oracle_log_z);
    rec.max_mean_delta = delta;
    result.trace.push_back(rec);
    if (cfg.tolerance && have_prev && std::abs(obj.free_energy - prev_f) < *cfg.tolerance) {
      result.stop_reason = StopReason::tolerance;
      break;
    }
    prev_f = obj.free_energy;
    have_prev = true;
  }
  return result;
}

}  // namespace proxmf

#endif  // PROXMF_SCHEDULES_HPP
