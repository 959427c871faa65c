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
#ifndef PROXMF_PAIRWISE_VIEW_HPP
#define PROXMF_PAIRWISE_VIEW_HPP

#include <optional>
#include <span>
#include <vector>

#include "proxmf/field.hpp"
#include "proxmf/parallel.hpp"

namespace proxmf {

/// Precompiled layout of a unary+pairwise field for batched updates: merged
/// flat unaries plus a directed-arc CSR in which every table copy is stored
/// row-major from the owning endpoint's side, so each gather streams rows
/// contiguously. Each variable's accumulation order is fixed by the CSR, which
/// makes batched results independent of the thread count.
struct PairwiseView {
  struct Arc {
    int32_t other = 0;
    int32_t l_this = 0;
    int32_t l_other = 0;
    int64_t table = 0;  // offset into arc_tables, [l_this][l_other] row-major
  };
  struct EdgeRef {
    int32_t a = 0;
    int32_t b = 0;
    int64_t table = 0;  // a-major copy in arc_tables
  };
  // All-binary fields additionally compile arcs with inline tables and
  // precomputed neighbor offsets: one sequential stream, no indirection.
  struct BinaryArc {
    int64_t other_off = 0;
    double t00 = 0, t01 = 0, t10 = 0, t11 = 0;
  };

  int32_t num_variables = 0;
  std::vector<int64_t> var_offset;
  std::vector<int32_t> cardinalities;
  std::vector<double> unary;  // flat merged log-potentials, zero where absent
  std::vector<int64_t> arc_begin;
  std::vector<Arc> arcs;
  std::vector<double> arc_tables;
  std::vector<EdgeRef> edges;  // each pairwise factor once
  std::vector<BinaryArc> binary_arcs;  // same order as arcs; empty unless all binary
  bool all_binary = false;

  int64_t dim() const { return var_offset.back(); }

  /// nullopt when any factor has arity greater than two.
  static std::optional<PairwiseView> build(const DiscreteField& field) {
    require_validated(field);
    for (const Factor& f : field.factors)
      if (f.arity() > 2) return std::nullopt;

    PairwiseView v;
    v.num_variables = field.num_variables;
    v.var_offset = field.var_offset;
    v.cardinalities = field.cardinalities;
    v.unary.assign(static_cast<size_t>(field.state_dim()), 0.0);
    v.arc_begin.assign(static_cast<size_t>(field.num_variables) + 1, 0);

    for (const Factor& f : field.factors) {
      if (f.arity() == 1) {
        double* u = v.unary.data() + field.offset(f.scope[0]);
        for (size_t l = 0; l < f.table.size(); ++l) u[l] += f.table[l];
      } else {
        ++v.arc_begin[static_cast<size_t>(f.scope[0]) + 1];
        ++v.arc_begin[static_cast<size_t>(f.scope[1]) + 1];
      }
    }
    for (int32_t i = 0; i < field.num_variables; ++i)
      v.arc_begin[static_cast<size_t>(i) + 1] += v.arc_begin[static_cast<size_t>(i)];

    v.arcs.resize(static_cast<size_t>(v.arc_begin.back()));
    std::vector<int64_t> cursor(v.arc_begin.begin(), v.arc_begin.end() - 1);
    for (const Factor& f : field.factors) {
      if (f.arity() != 2) continue;
      const int32_t a = f.scope[0];
      const int32_t b = f.scope[1];
      const int la = field.cardinality(a);
      const int lb = field.cardinality(b);

      const int64_t fwd = static_cast<int64_t>(v.arc_tables.size());
      v.arc_tables.insert(v.arc_tables.end(), f.table.begin(), f.table.end());
      const int64_t rev = static_cast<int64_t>(v.arc_tables.size());
      v.arc_tables.resize(v.arc_tables.size() + f.table.size());
      for (int i = 0; i < la; ++i)
        for (int j = 0; j < lb; ++j)
          v.arc_tables[static_cast<size_t>(rev + static_cast<int64_t>(j) * la + i)] =
              f.table[static_cast<size_t>(static_cast<int64_t>(i) * lb + j)];

      v.arcs[static_cast<size_t>(cursor[static_cast<size_t>(a)]++)] = {b, la, lb, fwd};
      v.arcs[static_cast<size_t>(cursor[static_cast<size_t>(b)]++)] = {a, lb, la, rev};
      v.edges.push_back({a, b, fwd});
    }

    v.all_binary = true;
    for (int32_t c : v.cardinalities) v.all_binary = v.all_binary && c == 2;
    if (v.all_binary) {
      v.binary_arcs.resize(v.arcs.size());
      for (size_t k = 0; k < v.arcs.size(); ++k) {
        const Arc& arc = v.arcs[k];
        const double* t = v.arc_tables.data() + arc.table;
        v.binary_arcs[k] = {v.var_offset[static_cast<size_t>(arc.other)], t[0], t[1], t[2], t[3]};
      }
    }
    return v;
  }

  /// y_{i,l} = -sum over incident pairwise tables of sum_m phi(l, m) x_{j,m}.
  /// This is the constant Hessian of the expected energy applied to x; both
  /// arc orientations are present, so the operator is symmetric.
  void coupling_apply(std::span<const double> x, std::span<double> y, int threads = 1) const {
    gather<false>(x, y, threads);
  }

  /// theta*_{i,l} for every variable against the snapshot q.
  void theta_star_all(std::span<const double> q, std::span<double> out, int threads = 1) const {
    gather<true>(q, out, threads);
  }

  /// E(q) over the compiled layout; fixed-chunk reductions keep the value
  /// identical for every thread count.
  double energy(std::span<const double> q, int threads = 1) const {
    const double un = detail::deterministic_reduce(
        static_cast<int64_t>(num_variables), int64_t{4096}, threads, 0.0,
        [&](int64_t b, int64_t e) {
          double acc = 0.0;
          for (int64_t i = b; i < e; ++i) {
            const int64_t off = var_offset[static_cast<size_t>(i)];
            const int li = cardinalities[static_cast<size_t>(i)];
            for (int l = 0; l < li; ++l)
              acc += unary[static_cast<size_t>(off + l)] * q[static_cast<size_t>(off + l)];
          }
          return acc;
        },
        [](double a, double b) { return a + b; });
    const double pw = detail::deterministic_reduce(
        static_cast<int64_t>(edges.size()), int64_t{4096}, threads, 0.0,
        [&](int64_t b, int64_t e) {
          double acc = 0.0;
          for (int64_t k = b; k < e; ++k) {
            const EdgeRef& ed = edges[static_cast<size_t>(k)];
            const double* qa = q.data() + var_offset[static_cast<size_t>(ed.a)];
            const double* qb = q.data() + var_offset[static_cast<size_t>(ed.b)];
            const int la = cardinalities[static_cast<size_t>(ed.a)];
            const int lb = cardinalities[static_cast<size_t>(ed.b)];
            const double* t = arc_tables.data() + ed.table;
            for (int i = 0; i < la; ++i) {
              const double* row = t + static_cast<int64_t>(i) * lb;
              double s = 0.0;
              for (int j = 0; j < lb; ++j) s += row[j] * qb[j];
              acc += qa[i] * s;
            }
          }
          return acc;
        },
        [](double a, double b) { return a + b; });
    return -(un + pw);
  }

  // Gradient of one variable's block against the snapshot x, written to g.
  void gather_one(std::span<const double> x, int64_t i, double* g) const {
    const int64_t off = var_offset[static_cast<size_t>(i)];
    const int64_t ab = arc_begin[static_cast<size_t>(i)];
    const int64_t ae = arc_begin[static_cast<size_t>(i) + 1];
    if (all_binary) {
      double g0 = -unary[static_cast<size_t>(off)];
      double g1 = -unary[static_cast<size_t>(off) + 1];
      const double* xp = x.data();
      for (int64_t a = ab; a < ae; ++a) {
        const BinaryArc& arc = binary_arcs[static_cast<size_t>(a)];
        const double x0 = xp[arc.other_off];
        const double x1 = xp[arc.other_off + 1];
        g0 -= arc.t00 * x0 + arc.t01 * x1;
        g1 -= arc.t10 * x0 + arc.t11 * x1;
      }
      g[0] = g0;
      g[1] = g1;
      return;
    }
    const int li = cardinalities[static_cast<size_t>(i)];
    for (int l = 0; l < li; ++l) g[l] = -unary[static_cast<size_t>(off + l)];
    for (int64_t a = ab; a < ae; ++a) {
      const Arc& arc = arcs[static_cast<size_t>(a)];
      const double* t = arc_tables.data() + arc.table;
      const double* xo = x.data() + var_offset[static_cast<size_t>(arc.other)];
      if (arc.l_this == 2 && arc.l_other == 2) {
        g[0] -= t[0] * xo[0] + t[1] * xo[1];
        g[1] -= t[2] * xo[0] + t[3] * xo[1];
      } else {
        for (int l = 0; l < arc.l_this; ++l) {
          const double* row = t + static_cast<int64_t>(l) * arc.l_other;
          double s = 0.0;
          for (int m = 0; m < arc.l_other; ++m) s += row[m] * xo[m];
          g[l] -= s;
        }
      }
    }
  }

 private:
  template <bool WithUnary>
  void gather(std::span<const double> x, std::span<double> y, int threads) const {
    detail::parallel_for_ranges(
        static_cast<int64_t>(num_variables), threads, [&](int64_t vb, int64_t ve) {
          for (int64_t i = vb; i < ve; ++i) {
            const int64_t off = var_offset[static_cast<size_t>(i)];
            double* out = y.data() + off;
            if constexpr (WithUnary) {
              gather_one(x, i, out);
            } else {
              const int li = cardinalities[static_cast<size_t>(i)];
              const int64_t ab = arc_begin[static_cast<size_t>(i)];
              const int64_t ae = arc_begin[static_cast<size_t>(i) + 1];
              for (int l = 0; l < li; ++l) out[l] = 0.0;
              for (int64_t a = ab; a < ae; ++a) {
                const Arc& arc = arcs[static_cast<size_t>(a)];
                const double* t = arc_tables.data() + arc.table;
                const double* xo = x.data() + var_offset[static_cast<size_t>(arc.other)];
                for (int l = 0; l < arc.l_this; ++l) {
                  const double* row = t + static_cast<int64_t>(l) * arc.l_other;
                  double s = 0.0;
                  for (int m = 0; m < arc.l_other; ++m) s += row[m] * xo[m];
                  out[l] -= s;
                }
              }
            }
          }
        });
  }
};

}  // namespace proxmf

#endif  // PROXMF_PAIRWISE_VIEW_HPP
