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
#ifndef PROXMF_STATE_HPP
#define PROXMF_STATE_HPP

#include <cmath>
#include <span>
#include <vector>

#include "proxmf/field.hpp"

namespace proxmf {

/// Factorized categorical beliefs. The natural parameters `theta` are the
/// canonical representation; the mean parameters `q` are the cached softmax of
/// -theta per variable. Finite theta keeps every q entry strictly positive and
/// every per-variable block on the simplex.
struct MeanFieldState {
  int32_t num_variables = 0;
  std::vector<int64_t> var_offset;
  std::vector<int32_t> cardinalities;
  std::vector<double> theta;
  std::vector<double> q;

  int64_t dim() const { return static_cast<int64_t>(theta.size()); }
  int64_t offset(int32_t v) const { return var_offset[static_cast<size_t>(v)]; }
  int32_t cardinality(int32_t v) const { return cardinalities[static_cast<size_t>(v)]; }

  std::span<double> theta_of(int32_t v) {
    return {theta.data() + offset(v), static_cast<size_t>(cardinality(v))};
  }
  std::span<const double> theta_of(int32_t v) const {
    return {theta.data() + offset(v), static_cast<size_t>(cardinality(v))};
  }
  std::span<double> q_of(int32_t v) {
    return {q.data() + offset(v), static_cast<size_t>(cardinality(v))};
  }
  std::span<const double> q_of(int32_t v) const {
    return {q.data() + offset(v), static_cast<size_t>(cardinality(v))};
  }
};

namespace detail {

// softmax(-theta) with max subtraction: the largest exponent is exactly zero.
// The binary branch evaluates one exp instead of two; exp(0) is exactly 1, so
// it produces bit-identical results to the general loop.
inline void softmax_neg_into(std::span<const double> theta, std::span<double> out) {
  if (theta.size() == 2) {
    if (theta[0] <= theta[1]) {
      const double e = std::exp(theta[0] - theta[1]);
      const double inv = 1.0 / (1.0 + e);
      out[0] = inv;
      out[1] = e * inv;
    } else {
      const double e = std::exp(theta[1] - theta[0]);
      const double inv = 1.0 / (e + 1.0);
      out[0] = e * inv;
      out[1] = inv;
    }
    return;
  }
  double lo = theta[0];
  for (double x : theta) lo = std::min(lo, x);
  double sum = 0.0;
  for (size_t l = 0; l < theta.size(); ++l) {
    const double e = std::exp(lo - theta[l]);
    out[l] = e;
    sum += e;
  }
  const double inv = 1.0 / sum;
  for (size_t l = 0; l < out.size(); ++l) out[l] *= inv;
}

}  // namespace detail

/// Mean parameters of one variable from its natural parameters: the softmax of
/// -theta, strictly positive and summing to one. Invariant to adding a
/// constant to all entries.
inline std::vector<double> mean_from_natural(std::span<const double> theta_i) {
  if (theta_i.empty()) throw ValidationError("mean_from_natural: empty natural-parameter block");
  for (double x : theta_i)
    if (!std::isfinite(x)) throw ValidationError("mean_from_natural: non-finite natural parameter");
  std::vector<double> out(theta_i.size());
  detail::softmax_neg_into(theta_i, out);
  return out;
}

inline std::vector<double> mean_from_natural(const MeanFieldState& state, int32_t variable) {
  return mean_from_natural(state.theta_of(variable));
}

inline void refresh_mean(MeanFieldState& state, int32_t variable) {
  detail::softmax_neg_into(state.theta_of(variable), state.q_of(variable));
}

inline void refresh_mean_all(MeanFieldState& state) {
  for (int32_t i = 0; i < state.num_variables; ++i) refresh_mean(state, i);
}

/// Uniform beliefs (theta = 0) shaped like `field`.
inline MeanFieldState make_state(const DiscreteField& field) {
  require_validated(field);
  MeanFieldState s;
  s.num_variables = field.num_variables;
  s.var_offset = field.var_offset;
  s.cardinalities = field.cardinalities;
  s.theta.assign(static_cast<size_t>(field.state_dim()), 0.0);
  s.q.resize(static_cast<size_t>(field.state_dim()));
  refresh_mean_all(s);
  return s;
}

inline MeanFieldState state_from_theta(const DiscreteField& field, std::vector<double> theta) {
  MeanFieldState s = make_state(field);
  if (static_cast<int64_t>(theta.size()) != s.dim())
    throw ValidationError("state_from_theta: shape mismatch");
  for (double x : theta)
    if (!std::isfinite(x)) throw ValidationError("state_from_theta: non-finite natural parameter");
  s.theta = std::move(theta);
  refresh_mean_all(s);
  return s;
}

/// Adopts externally supplied mean parameters verbatim (no renormalization)
/// and re-derives theta = -log q. Every entry must be strictly positive.
inline MeanFieldState state_from_mean(const DiscreteField& field, std::vector<double> q) {
  MeanFieldState s = make_state(field);
  if (static_cast<int64_t>(q.size()) != s.dim())
    throw ValidationError("state_from_mean: shape mismatch");
  for (double x : q)
    if (!(x > 0.0) || !std::isfinite(x))
      throw ValidationError("state_from_mean: mean parameters must be strictly positive");
  s.q = std::move(q);
  for (size_t e = 0; e < s.theta.size(); ++e) s.theta[e] = -std::log(s.q[e]);
  return s;
}

}  // namespace proxmf

#endif  // PROXMF_STATE_HPP
