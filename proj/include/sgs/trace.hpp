// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

namespace sgs {

enum class RunStatus { Converged, Stalled, MaxIters, BudgetExceeded, Breakdown };

std::string to_string(RunStatus s);

struct TraceRow {
  int iter = 0;
  std::size_t subspace_dim = 0;
  double energy = 0.0;
  double wall_ms = 0.0;
  std::size_t new_configs = 0;
  double flops = 0.0;
};

struct SolverTrace {
  std::string variant;
  std::vector<TraceRow> rows;
  RunStatus status = RunStatus::MaxIters;
  double flops = 0.0;  ///< cumulative multiply-add count

  /// Columns: variant,iter,subspace_dim,energy,wall_ms,status,flops
  std::string to_csv(bool header = true) const;
};

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

}  // namespace sgs
