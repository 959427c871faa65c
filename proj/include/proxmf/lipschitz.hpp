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
// A Lipschitz constant of grad E for pairwise fields, estimated matrix-free.
// The expected energy of a unary+pairwise field is quadratic in the mean
// parameters, so its Hessian is a constant symmetric matrix whose spectral
// norm bounds the gradient's variation. Power iteration on that operator uses
// the norm-growth estimate, which converges in magnitude even when the
// spectrum is symmetric about zero (bipartite structures).
#ifndef PROXMF_LIPSCHITZ_HPP
#define PROXMF_LIPSCHITZ_HPP

#include <cmath>
#include <span>
#include <vector>

#include "proxmf/pairwise_view.hpp"
#include "proxmf/rng.hpp"

namespace proxmf {

struct SpectralEstimate {
  double value = 0.0;      // estimated spectral norm, >= 0
  int iterations_used = 0;
  double residual = 0.0;   // |last estimate change|; exceeds tol on non-convergence
};

namespace detail {

inline PairwiseView pairwise_or_throw(const DiscreteField& field, const char* who) {
  auto view = PairwiseView::build(field);
  if (!view)
    throw ValidationError(std::string(who) +
                          ": a factor of arity >= 3 is present; the energy Hessian is constant "
                          "only for unary+pairwise fields, supply d manually");
  return std::move(*view);
}

inline double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace detail

/// y_{i,l} = -sum_{pairwise factors (i,j)} sum_m phi_ij(l, m) x_{j,m}. Unary
/// factors contribute nothing; fields with higher-order factors are rejected.
inline std::vector<double> hessian_matvec(const DiscreteField& field, std::span<const double> x,
                                          int threads = 1) {
  require_validated(field);
  const PairwiseView view = detail::pairwise_or_throw(field, "hessian_matvec");
  if (static_cast<int64_t>(x.size()) != field.state_dim())
    throw ValidationError("hessian_matvec: input shape mismatch");
  std::vector<double> y(x.size());
  view.coupling_apply(x, y, threads);
  return y;
}

/// Spectral norm of the potential matrix by power iteration from a seeded
/// random start. Terminates when consecutive estimates differ by at most
/// tol * max(1, estimate); otherwise returns the last estimate with its
/// residual. An overestimate of the constant is safe (smaller steps), so no
/// deflation is attempted near degenerate leading eigenpairs.
inline SpectralEstimate spectral_norm(const DiscreteField& field, int max_iters = 1000,
                                      double tol = 1e-8, uint64_t seed = 0, int threads = 1) {
  require_validated(field);
  if (max_iters < 1) throw ValidationError("spectral_norm: max_iters must be >= 1");
  const PairwiseView view = detail::pairwise_or_throw(field, "spectral_norm");
  const size_t dim = static_cast<size_t>(field.state_dim());
  if (dim == 0) return {0.0, 0, 0.0};

  detail::Rng rng(seed);
  std::vector<double> x(dim);
  std::vector<double> y(dim);
  double nx = 0.0;
  for (int attempt = 0; attempt < 4 && nx == 0.0; ++attempt) {
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    nx = detail::norm2(x);
  }
  if (nx == 0.0) return {0.0, 0, 0.0};
  for (double& v : x) v /= nx;

  SpectralEstimate est;
  double prev = 0.0;
  for (int k = 1; k <= max_iters; ++k) {
    view.coupling_apply(x, y, threads);
    const double ny = detail::norm2(y);
    est.iterations_used = k;
    if (ny == 0.0) {
      // x landed in the kernel; for the zero operator this is the answer
      est.value = 0.0;
      est.residual = 0.0;
      return est;
    }
    est.value = ny;
    est.residual = std::abs(ny - prev);
    for (size_t e = 0; e < dim; ++e) x[e] = y[e] / ny;
    if (k >= 2 && est.residual <= tol * std::max(1.0, est.value)) return est;
    prev = ny;
  }
  return est;
}

/// d = margin * L; eta = 1/(1+d) is exposed alongside. margin must exceed 1 so
/// the damped scheme stays inside the guaranteed-descent regime.
inline double suggest_damping(const SpectralEstimate& estimate, double margin = 1.05) {
  if (!(margin > 1.0)) throw ValidationError("suggest_damping: margin must exceed 1");
  return margin * estimate.value;
}

inline double eta_from_damping(double d) { return 1.0 / (1.0 + d); }

}  // namespace proxmf

#endif  // PROXMF_LIPSCHITZ_HPP
