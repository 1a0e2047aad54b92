// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#include "sgs/trace.hpp"

#include <cstdio>

namespace sgs {

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::Stalled: return "stalled";
    case RunStatus::MaxIters: return "max_iters";
    case RunStatus::BudgetExceeded: return "budget_exceeded";
    case RunStatus::Breakdown: return "breakdown";
  }
  return "?";
}

std::string SolverTrace::to_csv(bool header) const {
  std::string out;
  if (header) out = "variant,iter,subspace_dim,energy,wall_ms,status,flops\n";
  char buf[256];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    // Only the last row carries the terminal status.
    const std::string st = i + 1 == rows.size() ? to_string(status) : "running";
    std::snprintf(buf, sizeof(buf), "%s,%d,%zu,%.17g,%.3f,%s,%.6g\n", variant.c_str(), r.iter,
                  r.subspace_dim, r.energy, r.wall_ms, st.c_str(), r.flops);
    out += buf;
  }
  return out;
}

}  // namespace sgs
