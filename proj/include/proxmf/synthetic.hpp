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
#ifndef PROXMF_SYNTHETIC_HPP
#define PROXMF_SYNTHETIC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "proxmf/field.hpp"
#include "proxmf/oracle.hpp"
#include "proxmf/rng.hpp"

namespace proxmf {

enum class GraphKind { grid, chain, complete };
enum class Coupling { attractive, repulsive, mixed };

inline const char* graph_kind_name(GraphKind k) {
  switch (k) {
    case GraphKind::grid: return "grid";
    case GraphKind::chain: return "chain";
    case GraphKind::complete: return "complete";
  }
  return "unknown";
}

inline const char* coupling_name(Coupling c) {
  switch (c) {
    case Coupling::attractive: return "attractive";
    case Coupling::repulsive: return "repulsive";
    case Coupling::mixed: return "mixed";
  }
  return "unknown";
}

inline GraphKind graph_kind_from_name(const std::string& name) {
  for (GraphKind k : {GraphKind::grid, GraphKind::chain, GraphKind::complete})
    if (name == graph_kind_name(k)) return k;
  throw ValidationError("unknown graph kind '" + name + "'");
}

inline Coupling coupling_from_name(const std::string& name) {
  for (Coupling c : {Coupling::attractive, Coupling::repulsive, Coupling::mixed})
    if (name == coupling_name(c)) return c;
  throw ValidationError("unknown coupling '" + name + "'");
}

struct SyntheticInstance {
  DiscreteField field;
  GroundTruth truth;
};

/// Synthetic benchmark instances: unaries drawn uniform in
/// [-unary_scale, unary_scale] and Potts pairwise tables w [x_i = x_j] with w
/// drawn from [0, pair_scale], [-pair_scale, 0], or [-pair_scale, pair_scale]
/// depending on `coupling`. Grids use the 4-neighborhood; chains connect the
/// rows*cols nodes in a line; complete graphs connect all pairs. Deterministic
/// and byte-identical for equal seeds. Truth labels are the exact MAP when the
/// instance is small enough to enumerate, otherwise the per-variable unary
/// argmax; the mask covers every variable.
inline SyntheticInstance generate_synthetic(GraphKind kind, int rows, int cols, int labels,
                                            double unary_scale, double pair_scale,
                                            Coupling coupling, uint64_t seed) {
  if (rows < 1 || cols < 1)
    throw ValidationError("generate_synthetic: rows*cols must be at least 1");
  if (labels < 2) throw ValidationError("generate_synthetic: labels < 2");
  if (!(unary_scale >= 0.0) || !(pair_scale >= 0.0))
    throw ValidationError("generate_synthetic: scales must be >= 0");
  const int64_t n64 = static_cast<int64_t>(rows) * cols;
  if (n64 > (int64_t{1} << 24))
    throw ValidationError("generate_synthetic: instance size exceeds generation cap");
  const int32_t n = static_cast<int32_t>(n64);

  std::vector<std::pair<int32_t, int32_t>> edge_list;
  switch (kind) {
    case GraphKind::grid:
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
          const int32_t v = static_cast<int32_t>(r) * cols + c;
          if (c + 1 < cols) edge_list.emplace_back(v, v + 1);
          if (r + 1 < rows) edge_list.emplace_back(v, v + cols);
        }
      break;
    case GraphKind::chain:
      for (int32_t v = 0; v + 1 < n; ++v) edge_list.emplace_back(v, v + 1);
      break;
    case GraphKind::complete:
      for (int32_t a = 0; a < n; ++a)
        for (int32_t b = a + 1; b < n; ++b) edge_list.emplace_back(a, b);
      break;
  }

  SyntheticInstance out;
  DiscreteField& field = out.field;
  field.num_variables = n;
  field.cardinalities.assign(static_cast<size_t>(n), labels);
  field.factors.reserve(static_cast<size_t>(n) + edge_list.size());

  detail::Rng rng(seed);
  for (int32_t i = 0; i < n; ++i) {
    Factor f;
    f.scope = {i};
    f.table.resize(static_cast<size_t>(labels));
    for (int l = 0; l < labels; ++l)
      f.table[static_cast<size_t>(l)] = rng.uniform(-unary_scale, unary_scale);
    field.factors.push_back(std::move(f));
  }
  for (const auto& [a, b] : edge_list) {
    double w = 0.0;
    switch (coupling) {
      case Coupling::attractive: w = rng.uniform(0.0, pair_scale); break;
      case Coupling::repulsive: w = rng.uniform(-pair_scale, 0.0); break;
      case Coupling::mixed: w = rng.uniform(-pair_scale, pair_scale); break;
    }
    Factor f;
    f.scope = {a, b};
    f.table.assign(static_cast<size_t>(labels) * labels, 0.0);
    for (int l = 0; l < labels; ++l)
      f.table[static_cast<size_t>(l) * labels + static_cast<size_t>(l)] = w;
    field.factors.push_back(std::move(f));
  }
  validate(field);

  out.truth.mask.assign(static_cast<size_t>(n), 1);
  if (n <= 15 && joint_state_count(field, kDefaultOracleCap) > 0) {
    out.truth.labels = enumerate(field).map_assignment;
  } else {
    out.truth.labels.assign(static_cast<size_t>(n), 0);
    for (const Factor& f : field.factors) {
      if (f.arity() != 1) continue;
      int32_t best = 0;
      for (int l = 1; l < labels; ++l)
        if (f.table[static_cast<size_t>(l)] > f.table[static_cast<size_t>(best)]) best = l;
      out.truth.labels[static_cast<size_t>(f.scope[0])] = best;
    }
  }
  return out;
}

}  // namespace proxmf

#endif  // PROXMF_SYNTHETIC_HPP
