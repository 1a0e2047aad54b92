// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sgs/eigensolver.hpp"
#include "sgs/hamiltonian.hpp"
#include "sgs/pauli.hpp"
#include "sgs/trace.hpp"

namespace sgs {

inline constexpr int kMaxStatevectorQubits = 24;

/// multiplier * pi / sum|alpha|.
double default_dt(const PauliSum& h, double multiplier = 25.0);

/// out = H v on the full 2^n space.
void apply_statevector(const CompiledSum& h, const Eigen::VectorXcd& v, Eigen::VectorXcd& out);

/// e^{-iHt} v by Chebyshev propagation over the interval [-||H||_1, ||H||_1].
Eigen::VectorXcd evolve_exact(const PauliSum& h, const Eigen::VectorXcd& v, double t,
                              double tol = 1e-12);

/// Product-formula propagation for `steps` steps of size dt each.
/// order 1: prod_k exp(-i a_k P_k dt) in canonical term order.
/// order 2: T1(dt/2) [T1(-dt/2)]^dagger, i.e. a forward sweep after a reversed one.
Eigen::VectorXcd evolve_trotter(const PauliSum& h, const Eigen::VectorXcd& v, double dt,
                                int order, int steps = 1);

enum class Evolution { Exact, Trotter1, Trotter2 };
std::string to_string(Evolution e);

struct SkqdParams {
  int krylov_dim = 16;                       ///< d, includes the initial state
  std::size_t shots = 10000;                 ///< M when no schedule is given
  std::vector<std::size_t> shot_schedule;    ///< optional per-state override
  double dt = 0.0;                           ///< 0: default_dt(h, 25)
  Evolution evolution = Evolution::Exact;
  int trotter_steps_per_dt = 1;
  std::uint64_t seed = 1;
  double bitflip_prob = 0.0;                 ///< optional readout noise
  bool filter = true;
  std::size_t budget = 10'000'000;

  std::size_t shots_for(int k) const;
  void validate() const;
};

struct ShotRecord {
  int n_qubits = 0;
  std::uint64_t seed = 0;
  /// histograms[k]: configuration -> count for Krylov state k.
  std::vector<std::map<u64, std::uint64_t>> histograms;

  std::string to_json() const;
  static ShotRecord from_json(const std::string& text);
};

/// `shots` draws from |v_x|^2 via inverse CDF.
std::map<u64, std::uint64_t> sample_statevector(const Eigen::VectorXcd& v, std::size_t shots,
                                                std::uint64_t seed, int n_qubits = 0,
                                                double bitflip_prob = 0.0);

struct SkqdResult {
  EigResult eig;
  SolverTrace trace;  ///< iter = Krylov dimension
  ShotRecord shots;
  std::vector<u64> basis;
  std::string warning;
};

SkqdResult run_skqd(const PauliSum& h, const Configuration& x0, const SkqdParams& p);

/// Cumulative count of certificate support configurations seen by Krylov index.
std::vector<std::size_t> support_coverage(const ShotRecord& shots,
                                          const GroundStateCertificate& cert);

}  // namespace sgs
