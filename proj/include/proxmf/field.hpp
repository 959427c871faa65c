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
#ifndef PROXMF_FIELD_HPP
#define PROXMF_FIELD_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace proxmf {

// Expectations enumerate the joint label space of a factor, so arity is capped
// to keep per-factor work bounded.
inline constexpr int kMaxFactorArity = 8;

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense log-potential table over the joint labels of `scope`. The table is
/// row-major with the last scope variable fastest.
struct Factor {
  std::vector<int32_t> scope;  // distinct variable indices
  std::vector<double> table;   // log-potentials, all finite

  int arity() const { return static_cast<int>(scope.size()); }
};

/// Reference labels for accuracy metrics. `mask[i] == 1` marks positions that
/// are scored.
struct GroundTruth {
  std::vector<int32_t> labels;
  std::vector<uint8_t> mask;
};

/// A discrete random field: per-variable label counts plus log-potential
/// factors of arbitrary arity. Evidence, if any, is expected to be folded into
/// the tables by the producer. After validate() the field is immutable and
/// safe to share across threads.
struct DiscreteField {
  int32_t num_variables = 0;
  std::vector<int32_t> cardinalities;
  std::vector<Factor> factors;

  // Derived by validate().
  std::vector<int64_t> var_offset;  // N+1 prefix offsets into flat label arrays
  std::vector<int64_t> adj_begin;   // N+1 CSR offsets into adj_factor
  std::vector<int32_t> adj_factor;  // indices of factors containing each variable
  bool validated = false;

  int64_t state_dim() const { return var_offset.empty() ? 0 : var_offset.back(); }
  int64_t offset(int32_t v) const { return var_offset[static_cast<size_t>(v)]; }
  int32_t cardinality(int32_t v) const { return cardinalities[static_cast<size_t>(v)]; }
};

inline int64_t expected_table_size(const DiscreteField& field, const Factor& factor) {
  int64_t n = 1;
  for (int32_t v : factor.scope) {
    n *= field.cardinalities[static_cast<size_t>(v)];
    if (n > (int64_t{1} << 40)) throw ValidationError("factor table size overflows the cap");
  }
  return n;
}

/// Checks all field invariants, merges duplicate unary factors by adding their
/// tables, and builds the flat-offset and adjacency indices. Throws
/// ValidationError naming the offending factor and invariant.
inline void validate(DiscreteField& field) {
  if (field.num_variables < 0) throw ValidationError("num_variables must be nonnegative");
  if (static_cast<int64_t>(field.cardinalities.size()) != field.num_variables)
    throw ValidationError("cardinalities length " + std::to_string(field.cardinalities.size()) +
                          " does not match num_variables " +
                          std::to_string(field.num_variables));
  for (int32_t i = 0; i < field.num_variables; ++i) {
    if (field.cardinalities[static_cast<size_t>(i)] < 2)
      throw ValidationError("variable " + std::to_string(i) + " has cardinality " +
                            std::to_string(field.cardinalities[static_cast<size_t>(i)]) +
                            ", need at least 2");
  }

  for (size_t k = 0; k < field.factors.size(); ++k) {
    const Factor& f = field.factors[k];
    const std::string tag = "factor " + std::to_string(k) + ": ";
    if (f.scope.empty()) throw ValidationError(tag + "empty scope");
    if (f.arity() > kMaxFactorArity)
      throw ValidationError(tag + "arity " + std::to_string(f.arity()) + " exceeds cap " +
                            std::to_string(kMaxFactorArity));
    for (int32_t v : f.scope) {
      if (v < 0 || v >= field.num_variables)
        throw ValidationError(tag + "variable index " + std::to_string(v) +
                              " out of range [0, " + std::to_string(field.num_variables) + ")");
    }
    std::vector<int32_t> sorted(f.scope);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ValidationError(tag + "duplicate variable in scope");
    const int64_t want = expected_table_size(field, f);
    if (static_cast<int64_t>(f.table.size()) != want)
      throw ValidationError(tag + "table has " + std::to_string(f.table.size()) +
                            " entries, scope requires " + std::to_string(want));
    for (double x : f.table) {
      if (!std::isfinite(x)) throw ValidationError(tag + "non-finite potential");
    }
  }

  // Merge duplicate unaries by addition; the first occurrence keeps its slot.
  std::vector<int64_t> first_unary(static_cast<size_t>(field.num_variables), -1);
  std::vector<Factor> merged;
  merged.reserve(field.factors.size());
  for (Factor& f : field.factors) {
    if (f.arity() == 1) {
      const auto v = static_cast<size_t>(f.scope[0]);
      if (first_unary[v] < 0) {
        first_unary[v] = static_cast<int64_t>(merged.size());
        merged.push_back(std::move(f));
      } else {
        std::vector<double>& into = merged[static_cast<size_t>(first_unary[v])].table;
        for (size_t l = 0; l < into.size(); ++l) into[l] += f.table[l];
      }
    } else {
      merged.push_back(std::move(f));
    }
  }
  field.factors = std::move(merged);

  field.var_offset.assign(static_cast<size_t>(field.num_variables) + 1, 0);
  for (int32_t i = 0; i < field.num_variables; ++i)
    field.var_offset[static_cast<size_t>(i) + 1] =
        field.var_offset[static_cast<size_t>(i)] + field.cardinalities[static_cast<size_t>(i)];

  field.adj_begin.assign(static_cast<size_t>(field.num_variables) + 1, 0);
  for (const Factor& f : field.factors)
    for (int32_t v : f.scope) ++field.adj_begin[static_cast<size_t>(v) + 1];
  for (int32_t i = 0; i < field.num_variables; ++i)
    field.adj_begin[static_cast<size_t>(i) + 1] += field.adj_begin[static_cast<size_t>(i)];
  field.adj_factor.assign(field.adj_begin.back(), 0);
  std::vector<int64_t> cursor(field.adj_begin.begin(), field.adj_begin.end() - 1);
  for (size_t k = 0; k < field.factors.size(); ++k)
    for (int32_t v : field.factors[k].scope)
      field.adj_factor[static_cast<size_t>(cursor[static_cast<size_t>(v)]++)] =
          static_cast<int32_t>(k);

  field.validated = true;
}

inline void require_validated(const DiscreteField& field) {
  if (!field.validated) throw ValidationError("field must be validated first");
}

}  // namespace proxmf

#endif  // PROXMF_FIELD_HPP
