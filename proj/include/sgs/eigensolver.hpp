// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "sgs/subspace.hpp"

namespace sgs {

struct EigResult {
  double value = 0.0;
  Eigen::VectorXcd vector;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  bool degenerate = false;
  double second = 0.0;  ///< next eigenvalue when known (dense path)
};

struct LanczosOptions {
  double tol = 1e-10;
  int max_iter = 2000;        ///< total Lanczos steps over all restarts
  int krylov_size = 80;       ///< steps per restart cycle
  std::uint64_t seed = 7;
  std::size_t memory_budget = std::size_t{1} << 30;  ///< bytes for stored vectors
  const Eigen::VectorXcd* start = nullptr;           ///< optional start vector
};

using MatVec = std::function<void(const cplx*, cplx*)>;

/// Restarted Lanczos with full reorthogonalization; residual <= tol*(1+|lambda|).
EigResult lanczos_lowest(std::size_t dim, const MatVec& op, const LanczosOptions& opt = {});
EigResult lanczos_lowest(const ProjectedMatrix& m, const LanczosOptions& opt = {});
EigResult lanczos_lowest(const ProjectedMatrix& m, double tol, int max_iter, std::uint64_t seed);

/// Full Hermitian diagonalization, dim <= 4096.
EigResult dense_lowest(const Eigen::MatrixXcd& m);

/// Convenience: lowest eigenpair of H_B; dense path for small bases.
EigResult diagonalize_projected(const ProjectedMatrix& m, double tol = 1e-10,
                                std::uint64_t seed = 7);

}  // namespace sgs
