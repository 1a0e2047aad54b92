// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "sgs/eigensolver.hpp"
#include "sgs/pauli.hpp"
#include "sgs/trace.hpp"

namespace sgs {

struct MatrixFreeResult {
  EigResult eig;
  SolverTrace trace;
  std::vector<u64> basis;  ///< final diagonalization basis, sorted
  std::vector<SparseVector> krylov;  ///< Arnoldi vectors when requested
};

struct DiagRankParams {
  std::size_t working_cap = 1024;     ///< D
  std::size_t reservoir_cap = 16384;  ///< R
  int iters = 50;                     ///< T
  bool diagnostics = false;           ///< diagonalize B every iteration
  std::size_t budget = 10'000'000;

  void validate() const;
};

MatrixFreeResult run_diag_ranking(const PauliSum& h, const Configuration& x0,
                                  const DiagRankParams& p);

struct TruncArnoldiParams {
  std::size_t new_config_cap = 1024;  ///< M
  int iters = 200;                    ///< T
  int diag_every = 0;                 ///< 0: diagonalize only at the end
  std::size_t budget = 10'000'000;
  /// Stop early once the periodic diagonalization reaches this energy.
  double target_energy = -std::numeric_limits<double>::infinity();
  bool keep_vectors = false;

  void validate() const;
};

MatrixFreeResult run_truncated_arnoldi(const PauliSum& h, const Configuration& x0,
                                       const TruncArnoldiParams& p);

enum class TpmMode { Expectation, DiagonalizeSupport };

struct TpmParams {
  std::size_t k = 64;  ///< sparsity cutoff
  int iters = 100;     ///< L
  double shift = std::numeric_limits<double>::quiet_NaN();  ///< NaN: sum|alpha| + 1
  TpmMode mode = TpmMode::Expectation;
  bool track_both = true;  ///< record both estimates at every iteration
};

struct TpmResult {
  double energy = 0.0;
  SolverTrace trace;
  std::vector<double> expectation;  ///< per iteration, shift - <phi|A|phi>
  std::vector<double> support;      ///< per iteration, lowest eigenvalue on supp(phi)
  std::vector<u64> final_support;
  SparseVector phi;
  double shift = 0.0;
};

TpmResult run_tpm(const PauliSum& h, const SparseVector& x0, const TpmParams& p);

struct TpmTheoryConstants {
  double gamma = 0, delta = 0, chi = 0, chi_a = 0, epsilon = 0, lambda1 = 0;
  double k_star = 0, l_star = 0;
  double k = 0;  ///< cutoff used for rho (defaults to k_star)
  double rho = 0;
  double eta = 0;            ///< gamma / (8 rho)
  double xi_fixed = 0;       ///< fixed point of f
  double xi_fixed_bound = 0; ///< 2 rho / gamma
  std::vector<double> xi;    ///< xi_0 .. xi_t
};

/// Constants of the truncated power method guarantee.
TpmTheoryConstants tpm_theory(double gamma, double delta, double chi, double chi_a,
                              double epsilon, double lambda1, double k = 0.0,
                              std::size_t xi_steps = 0);

/// Max nonzeros per column of H (distinct X-masks).
std::size_t column_sparsity(const PauliSum& h);

}  // namespace sgs
