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
// Variational objective: expected energy, entropy, and the per-variable
// conditional expectations that drive every update rule.
#ifndef PROXMF_ENERGY_HPP
#define PROXMF_ENERGY_HPP

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "proxmf/field.hpp"
#include "proxmf/parallel.hpp"
#include "proxmf/state.hpp"

namespace proxmf {

struct ObjectiveValue {
  double expected_energy = 0.0;  // E(q)
  double neg_entropy = 0.0;      // -H(q), in [-sum_i log L_i, 0]
  double free_energy = 0.0;      // F = E - H, computed as the sum of the two
};

namespace detail {

struct FactorWalk {
  int arity = 0;
  std::array<int64_t, kMaxFactorArity> offset{};
  std::array<int32_t, kMaxFactorArity> card{};
  std::array<int32_t, kMaxFactorArity> digit{};

  FactorWalk(const DiscreteField& field, const Factor& f) : arity(f.arity()) {
    for (int k = 0; k < arity; ++k) {
      offset[static_cast<size_t>(k)] = field.offset(f.scope[static_cast<size_t>(k)]);
      card[static_cast<size_t>(k)] = field.cardinality(f.scope[static_cast<size_t>(k)]);
    }
  }

  // Row-major order, last scope variable fastest.
  void advance() {
    for (int k = arity - 1; k >= 0; --k) {
      if (++digit[static_cast<size_t>(k)] < card[static_cast<size_t>(k)]) return;
      digit[static_cast<size_t>(k)] = 0;
    }
  }
};

// Multilinear expectation of one factor table under q.
inline double factor_expectation(const DiscreteField& field, const Factor& f,
                                 std::span<const double> q) {
  if (f.arity() == 1) {
    const double* qi = q.data() + field.offset(f.scope[0]);
    double acc = 0.0;
    for (size_t l = 0; l < f.table.size(); ++l) acc += f.table[l] * qi[l];
    return acc;
  }
  if (f.arity() == 2) {
    const double* qa = q.data() + field.offset(f.scope[0]);
    const double* qb = q.data() + field.offset(f.scope[1]);
    const int lb = field.cardinality(f.scope[1]);
    const int la = field.cardinality(f.scope[0]);
    double acc = 0.0;
    for (int a = 0; a < la; ++a) {
      const double* row = f.table.data() + static_cast<int64_t>(a) * lb;
      double s = 0.0;
      for (int b = 0; b < lb; ++b) s += row[b] * qb[b];
      acc += qa[a] * s;
    }
    return acc;
  }
  FactorWalk w(field, f);
  double acc = 0.0;
  for (size_t e = 0; e < f.table.size(); ++e) {
    double p = 1.0;
    for (int k = 0; k < w.arity; ++k)
      p *= q[static_cast<size_t>(w.offset[static_cast<size_t>(k)] +
                                 w.digit[static_cast<size_t>(k)])];
    acc += f.table[e] * p;
    w.advance();
  }
  return acc;
}

// Accumulates -E[table | x_var = l] into acc[l]: the factor's contribution to
// theta_star of the variable at scope position `pos`.
inline void factor_conditional_into(const DiscreteField& field, const Factor& f, int pos,
                                    std::span<const double> q, std::span<double> acc) {
  if (f.arity() == 1) {
    for (size_t l = 0; l < f.table.size(); ++l) acc[l] -= f.table[l];
    return;
  }
  if (f.arity() == 2) {
    const int other_pos = 1 - pos;
    const double* qo = q.data() + field.offset(f.scope[static_cast<size_t>(other_pos)]);
    const int lo = field.cardinality(f.scope[static_cast<size_t>(other_pos)]);
    const int li = field.cardinality(f.scope[static_cast<size_t>(pos)]);
    if (pos == 0) {
      for (int a = 0; a < li; ++a) {
        const double* row = f.table.data() + static_cast<int64_t>(a) * lo;
        double s = 0.0;
        for (int b = 0; b < lo; ++b) s += row[b] * qo[b];
        acc[static_cast<size_t>(a)] -= s;
      }
    } else {
      for (int a = 0; a < lo; ++a) {
        const double* row = f.table.data() + static_cast<int64_t>(a) * li;
        const double w = qo[a];
        for (int b = 0; b < li; ++b) acc[static_cast<size_t>(b)] -= row[b] * w;
      }
    }
    return;
  }
  FactorWalk w(field, f);
  for (size_t e = 0; e < f.table.size(); ++e) {
    double p = 1.0;
    for (int k = 0; k < w.arity; ++k) {
      if (k == pos) continue;
      p *= q[static_cast<size_t>(w.offset[static_cast<size_t>(k)] +
                                 w.digit[static_cast<size_t>(k)])];
    }
    acc[static_cast<size_t>(w.digit[static_cast<size_t>(pos)])] -= f.table[e] * p;
    w.advance();
  }
}

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace detail

/// E(q): minus the expectation of the summed log-potentials, by clique
/// enumeration. Partial sums are combined in fixed factor-index order, so the
/// value does not depend on the thread count.
inline double expected_energy(const DiscreteField& field, std::span<const double> q,
                              int threads = 1) {
  require_validated(field);
  if (static_cast<int64_t>(q.size()) != field.state_dim())
    throw ValidationError("expected_energy: state shape mismatch");
  const int64_t n = static_cast<int64_t>(field.factors.size());
  const double sum = detail::deterministic_reduce(
      n, int64_t{256}, threads, 0.0,
      [&](int64_t b, int64_t e) {
        double acc = 0.0;
        for (int64_t k = b; k < e; ++k)
          acc += detail::factor_expectation(field, field.factors[static_cast<size_t>(k)], q);
        return acc;
      },
      [](double a, double b) { return a + b; });
  return -sum;
}

/// -H(q) = sum q log q with the convention 0 log 0 = 0, combined in fixed
/// per-variable order.
inline double neg_entropy(const MeanFieldState& state, int threads = 1) {
  return detail::deterministic_reduce(
      static_cast<int64_t>(state.num_variables), int64_t{1024}, threads, 0.0,
      [&](int64_t b, int64_t e) {
        double acc = 0.0;
        for (int64_t i = b; i < e; ++i)
          for (double x : state.q_of(static_cast<int32_t>(i))) acc += detail::xlogx(x);
        return acc;
      },
      [](double a, double b) { return a + b; });
}

inline ObjectiveValue free_energy(const DiscreteField& field, const MeanFieldState& state,
                                  int threads = 1) {
  if (state.dim() != field.state_dim() || state.num_variables != field.num_variables)
    throw ValidationError("free_energy: state shape mismatch");
  ObjectiveValue out;
  out.expected_energy = expected_energy(field, state.q, threads);
  out.neg_entropy = neg_entropy(state, threads);
  out.free_energy = out.expected_energy + out.neg_entropy;
  return out;
}

/// theta*_{i,l} = -sum over factors containing i of E[table | x_i = l], taken
/// against the snapshot `q`. This is the coordinate-wise optimum in natural
/// parameters and equals the gradient of the multilinear E(q). The
/// representative carries no per-variable additive constant, so momentum-style
/// accumulations of it are well-defined.
inline void theta_star_into(const DiscreteField& field, std::span<const double> q,
                            int32_t variable, std::span<double> out) {
  for (size_t l = 0; l < out.size(); ++l) out[l] = 0.0;
  const int64_t ab = field.adj_begin[static_cast<size_t>(variable)];
  const int64_t ae = field.adj_begin[static_cast<size_t>(variable) + 1];
  for (int64_t a = ab; a < ae; ++a) {
    const Factor& f = field.factors[static_cast<size_t>(field.adj_factor[static_cast<size_t>(a)])];
    int pos = 0;
    while (f.scope[static_cast<size_t>(pos)] != variable) ++pos;
    detail::factor_conditional_into(field, f, pos, q, out);
  }
}

inline std::vector<double> theta_star(const DiscreteField& field, const MeanFieldState& state,
                                      int32_t variable) {
  require_validated(field);
  if (variable < 0 || variable >= field.num_variables)
    throw ValidationError("theta_star: variable index out of range");
  if (state.dim() != field.state_dim()) throw ValidationError("theta_star: state shape mismatch");
  std::vector<double> out(static_cast<size_t>(field.cardinality(variable)));
  theta_star_into(field, state.q, variable, out);
  return out;
}

/// KL(Q || P) = F(q) + log Z. Nonnegative whenever log Z is exact.
inline double kl_to_posterior(const ObjectiveValue& objective, double log_z) {
  return objective.free_energy + log_z;
}

}  // namespace proxmf

#endif  // PROXMF_ENERGY_HPP
