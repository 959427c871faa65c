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
// Test-side reference implementations, deliberately written along different
// code paths than the library: two-pass summation instead of streaming
// accumulators, per-state index recomputation instead of compiled walkers.
#ifndef PROXMF_TESTS_SUPPORT_HPP
#define PROXMF_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "proxmf/proxmf.hpp"

namespace testsupport {

inline proxmf::DiscreteField make_field(std::vector<int32_t> cards,
                                        std::vector<proxmf::Factor> factors) {
  proxmf::DiscreteField f;
  f.num_variables = static_cast<int32_t>(cards.size());
  f.cardinalities = std::move(cards);
  f.factors = std::move(factors);
  proxmf::validate(f);
  return f;
}

inline proxmf::Factor potts_pair(int32_t a, int32_t b, double w, int labels = 2) {
  proxmf::Factor f;
  f.scope = {a, b};
  f.table.assign(static_cast<size_t>(labels) * labels, 0.0);
  for (int l = 0; l < labels; ++l) f.table[static_cast<size_t>(l) * labels + l] = w;
  return f;
}

// Grid with one uniform Potts weight on every edge and optional seeded unaries.
inline proxmf::DiscreteField uniform_potts_grid(int rows, int cols, double w,
                                                double unary_scale = 0.0, uint64_t seed = 0) {
  const int32_t n = static_cast<int32_t>(rows) * cols;
  std::vector<proxmf::Factor> factors;
  proxmf::detail::Rng rng(seed);
  for (int32_t i = 0; i < n; ++i) {
    proxmf::Factor f;
    f.scope = {i};
    f.table = {unary_scale > 0 ? rng.uniform(-unary_scale, unary_scale) : 0.0,
               unary_scale > 0 ? rng.uniform(-unary_scale, unary_scale) : 0.0};
    factors.push_back(std::move(f));
  }
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const int32_t v = static_cast<int32_t>(r) * cols + c;
      if (c + 1 < cols) factors.push_back(potts_pair(v, v + 1, w));
      if (r + 1 < rows) factors.push_back(potts_pair(v, v + cols, w));
    }
  std::vector<int32_t> cards(static_cast<size_t>(n), 2);
  return make_field(std::move(cards), std::move(factors));
}

struct BruteResult {
  double log_z = 0.0;
  std::vector<double> marginals;
  std::vector<int32_t> map;
  double map_score = 0.0;
};

inline double state_score(const proxmf::DiscreteField& f, const std::vector<int32_t>& x) {
  double score = 0.0;
  for (const proxmf::Factor& fac : f.factors) {
    int64_t idx = 0;
    for (int32_t v : fac.scope) idx = idx * f.cardinality(v) + x[static_cast<size_t>(v)];
    score += fac.table[static_cast<size_t>(idx)];
  }
  return score;
}

// Exhaustive reference: scores are materialized, then log Z and marginals come
// from a two-pass max-shifted long double sum.
inline BruteResult brute_force(const proxmf::DiscreteField& f) {
  int64_t m = 1;
  for (int32_t c : f.cardinalities) m *= c;
  const int32_t n = f.num_variables;

  std::vector<double> scores(static_cast<size_t>(m));
  std::vector<int32_t> x(static_cast<size_t>(n), 0);
  BruteResult out;
  out.map.assign(static_cast<size_t>(n), 0);
  out.map_score = -1e300;
  for (int64_t s = 0; s < m; ++s) {
    const double sc = state_score(f, x);
    scores[static_cast<size_t>(s)] = sc;
    if (sc > out.map_score) {
      out.map_score = sc;
      out.map = x;
    }
    for (int32_t i = n - 1; i >= 0; --i) {
      if (++x[static_cast<size_t>(i)] < f.cardinality(i)) break;
      x[static_cast<size_t>(i)] = 0;
    }
  }

  const double hi = *std::max_element(scores.begin(), scores.end());
  long double z = 0.0L;
  for (double sc : scores) z += expl(static_cast<long double>(sc - hi));
  out.log_z = hi + static_cast<double>(logl(z));

  out.marginals.assign(static_cast<size_t>(f.state_dim()), 0.0);
  std::vector<long double> acc(static_cast<size_t>(f.state_dim()), 0.0L);
  std::fill(x.begin(), x.end(), 0);
  for (int64_t s = 0; s < m; ++s) {
    const long double w = expl(static_cast<long double>(scores[static_cast<size_t>(s)] - hi));
    for (int32_t i = 0; i < n; ++i)
      acc[static_cast<size_t>(f.offset(i) + x[static_cast<size_t>(i)])] += w;
    for (int32_t i = n - 1; i >= 0; --i) {
      if (++x[static_cast<size_t>(i)] < f.cardinality(i)) break;
      x[static_cast<size_t>(i)] = 0;
    }
  }
  for (size_t e = 0; e < acc.size(); ++e)
    out.marginals[e] = static_cast<double>(acc[e] / z);
  return out;
}

inline proxmf::MeanFieldState random_interior_state(const proxmf::DiscreteField& f,
                                                    uint64_t seed, double scale = 1.5) {
  proxmf::MeanFieldState s = proxmf::make_state(f);
  proxmf::detail::Rng rng(seed);
  for (double& th : s.theta) th = rng.uniform(-scale, scale);
  proxmf::refresh_mean_all(s);
  return s;
}

// Per-variable zero-sum direction for derivative checks along the simplex.
inline std::vector<double> random_tangent(const proxmf::DiscreteField& f, uint64_t seed) {
  proxmf::detail::Rng rng(seed);
  std::vector<double> delta(static_cast<size_t>(f.state_dim()), 0.0);
  for (int32_t i = 0; i < f.num_variables; ++i) {
    const int li = f.cardinality(i);
    double sum = 0.0;
    for (int l = 0; l < li; ++l) {
      const double v = rng.uniform(-1.0, 1.0);
      delta[static_cast<size_t>(f.offset(i) + l)] = v;
      sum += v;
    }
    for (int l = 0; l < li; ++l) delta[static_cast<size_t>(f.offset(i) + l)] -= sum / li;
  }
  return delta;
}

// (E(q + h d) - E(q - h d)) / 2h against the snapshot q.
inline double central_difference_energy(const proxmf::DiscreteField& f,
                                        const std::vector<double>& q,
                                        const std::vector<double>& delta, double h) {
  std::vector<double> qp = q, qm = q;
  for (size_t e = 0; e < q.size(); ++e) {
    qp[e] += h * delta[e];
    qm[e] -= h * delta[e];
  }
  return (proxmf::expected_energy(f, qp) - proxmf::expected_energy(f, qm)) / (2.0 * h);
}

}  // namespace testsupport

#endif  // PROXMF_TESTS_SUPPORT_HPP
