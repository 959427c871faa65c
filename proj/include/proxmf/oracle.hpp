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
// Exact inference by exhaustive enumeration on tiny fields. All accumulation
// is in log space, so potentials up to around +-700 stay finite.
#ifndef PROXMF_ORACLE_HPP
#define PROXMF_ORACLE_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "proxmf/energy.hpp"
#include "proxmf/parallel.hpp"
#include "proxmf/rng.hpp"
#include "proxmf/state.hpp"

namespace proxmf {

inline constexpr int64_t kDefaultOracleCap = int64_t{1} << 20;

struct OracleResult {
  double log_z = 0.0;
  std::vector<double> marginals;        // flat per-variable simplex blocks
  std::vector<int32_t> map_assignment;  // lowest-lexicographic on score ties
  double map_log_potential = 0.0;
};

namespace detail {

// Streaming log-sum-exp: tracks the running maximum and the rescaled sum.
struct LogAcc {
  double hi = -std::numeric_limits<double>::infinity();
  double sum = 0.0;

  void add(double x) {
    if (x <= hi) {
      sum += std::exp(x - hi);
    } else {
      sum = sum * std::exp(hi - x) + 1.0;
      hi = x;
    }
  }

  void merge(const LogAcc& o) {
    if (o.sum == 0.0) return;
    if (sum == 0.0) {
      *this = o;
      return;
    }
    if (o.hi <= hi) {
      sum += o.sum * std::exp(o.hi - hi);
    } else {
      sum = sum * std::exp(hi - o.hi) + o.sum;
      hi = o.hi;
    }
  }

  double value() const {
    return sum == 0.0 ? -std::numeric_limits<double>::infinity() : hi + std::log(sum);
  }
};

struct FactorIndexer {
  std::vector<int32_t> scope;
  std::vector<int64_t> stride;  // last scope variable fastest
  const double* table = nullptr;

  double score(const std::vector<int32_t>& labels) const {
    int64_t idx = 0;
    for (size_t k = 0; k < scope.size(); ++k)
      idx += stride[k] * labels[static_cast<size_t>(scope[k])];
    return table[idx];
  }
};

struct EnumChunk {
  LogAcc z;
  std::vector<LogAcc> marginal;
  double best_score = -std::numeric_limits<double>::infinity();
  int64_t best_index = -1;
};

}  // namespace detail

inline int64_t joint_state_count(const DiscreteField& field, int64_t cap) {
  int64_t m = 1;
  for (int32_t c : field.cardinalities) {
    m *= c;
    if (m > cap) return -1;
  }
  return m;
}

/// log Z by streaming log-sum-exp over every joint state, exact marginals by
/// per-label accumulation, and the MAP assignment with lowest-lexicographic
/// tie-break. Enumeration is chunked over joint-state ranges and partials are
/// merged in fixed chunk order.
inline OracleResult enumerate(const DiscreteField& field, int64_t max_states = kDefaultOracleCap,
                              int threads = 1) {
  require_validated(field);
  const int64_t m = joint_state_count(field, max_states);
  if (m < 0)
    throw ValidationError("enumerate: joint state space exceeds cap " +
                          std::to_string(max_states));

  std::vector<detail::FactorIndexer> indexers(field.factors.size());
  for (size_t k = 0; k < field.factors.size(); ++k) {
    const Factor& f = field.factors[k];
    detail::FactorIndexer& ix = indexers[k];
    ix.scope = f.scope;
    ix.stride.assign(f.scope.size(), 1);
    for (int a = f.arity() - 2; a >= 0; --a)
      ix.stride[static_cast<size_t>(a)] =
          ix.stride[static_cast<size_t>(a) + 1] *
          field.cardinality(f.scope[static_cast<size_t>(a) + 1]);
    ix.table = f.table.data();
  }

  const int64_t dim = field.state_dim();
  const int32_t n = field.num_variables;
  const int64_t chunk = int64_t{1} << 16;

  // Joint index: variable N-1 fastest, so ascending index is ascending
  // lexicographic order over assignments.
  auto decode = [&](int64_t index, std::vector<int32_t>& labels) {
    for (int32_t i = n - 1; i >= 0; --i) {
      const int32_t c = field.cardinality(i);
      labels[static_cast<size_t>(i)] = static_cast<int32_t>(index % c);
      index /= c;
    }
  };

  detail::EnumChunk total = detail::deterministic_reduce(
      m, chunk, threads,
      detail::EnumChunk{{}, std::vector<detail::LogAcc>(static_cast<size_t>(dim)),
                        -std::numeric_limits<double>::infinity(), -1},
      [&](int64_t b, int64_t e) {
        detail::EnumChunk out;
        out.marginal.assign(static_cast<size_t>(dim), {});
        std::vector<int32_t> labels(static_cast<size_t>(n));
        decode(b, labels);
        for (int64_t s = b; s < e; ++s) {
          double score = 0.0;
          for (const auto& ix : indexers) score += ix.score(labels);
          out.z.add(score);
          for (int32_t i = 0; i < n; ++i)
            out.marginal[static_cast<size_t>(field.offset(i) + labels[static_cast<size_t>(i)])]
                .add(score);
          if (score > out.best_score) {
            out.best_score = score;
            out.best_index = s;
          }
          for (int32_t i = n - 1; i >= 0; --i) {
            if (++labels[static_cast<size_t>(i)] < field.cardinality(i)) break;
            labels[static_cast<size_t>(i)] = 0;
          }
        }
        return out;
      },
      [](detail::EnumChunk acc, const detail::EnumChunk& part) {
        acc.z.merge(part.z);
        if (acc.marginal.size() != part.marginal.size()) acc.marginal.resize(part.marginal.size());
        for (size_t e = 0; e < part.marginal.size(); ++e) acc.marginal[e].merge(part.marginal[e]);
        if (part.best_score > acc.best_score ||
            (part.best_score == acc.best_score && part.best_index >= 0 &&
             (acc.best_index < 0 || part.best_index < acc.best_index))) {
          acc.best_score = part.best_score;
          acc.best_index = part.best_index;
        }
        return acc;
      });

  OracleResult result;
  result.log_z = total.z.value();
  result.marginals.resize(static_cast<size_t>(dim));
  for (size_t e = 0; e < result.marginals.size(); ++e)
    result.marginals[e] = std::exp(total.marginal[e].value() - result.log_z);
  result.map_assignment.assign(static_cast<size_t>(n), 0);
  decode(total.best_index, result.map_assignment);
  result.map_log_potential = total.best_score;
  return result;
}

/// Reference lower envelope for factorized approximations: the smallest
/// KL = F + log Z reached by coordinate-descent sweeps from the uniform and
/// unary starts plus `restarts` random natural-parameter starts.
inline double best_factorized_kl(const DiscreteField& field, int restarts, uint64_t seed,
                                 int64_t max_states = kDefaultOracleCap) {
  const OracleResult oracle = enumerate(field, max_states);

  auto converge = [&](MeanFieldState s) {
    std::vector<double> tmp;
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 5000; ++it) {
      for (int32_t i = 0; i < field.num_variables; ++i) {
        tmp.resize(static_cast<size_t>(field.cardinality(i)));
        theta_star_into(field, s.q, i, tmp);
        auto th = s.theta_of(i);
        for (size_t l = 0; l < tmp.size(); ++l) th[l] = tmp[l];
        refresh_mean(s, i);
      }
      const double f = free_energy(field, s).free_energy;
      if (std::abs(f - prev) < 1e-13) return f;
      prev = f;
    }
    return prev;
  };

  double best = converge(make_state(field));
  {
    MeanFieldState s = make_state(field);
    for (const Factor& f : field.factors) {
      if (f.arity() != 1) continue;
      auto th = s.theta_of(f.scope[0]);
      for (size_t l = 0; l < th.size(); ++l) th[l] = -f.table[l];
    }
    refresh_mean_all(s);
    best = std::min(best, converge(std::move(s)));
  }
  detail::Rng rng(seed);
  for (int r = 0; r < restarts; ++r) {
    MeanFieldState s = make_state(field);
    for (double& x : s.theta) x = rng.uniform(-5.0, 5.0);
    refresh_mean_all(s);
    best = std::min(best, converge(std::move(s)));
  }
  return best + oracle.log_z;
}

}  // namespace proxmf

#endif  // PROXMF_ORACLE_HPP
