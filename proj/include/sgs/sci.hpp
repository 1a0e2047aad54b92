// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "sgs/eigensolver.hpp"
#include "sgs/pauli.hpp"
#include "sgs/trace.hpp"

namespace sgs {

enum class SciVariant { CIPSI, HCI, ASCI, TrimCI };
enum class TrimFilter { Cipsi, Hci };

std::string to_string(SciVariant v);

inline constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

struct TrimParams {
  double expansion = 0.0;  ///< F; > 1 enables the dynamic threshold search
  std::size_t n_s = 1;     ///< N_S subsets
  std::size_t n_k = 64;    ///< N_K kept per subset
  std::uint64_t seed = 1;
  TrimFilter filter = TrimFilter::Cipsi;
};

struct SciParams {
  SciVariant variant = SciVariant::CIPSI;
  double epsilon = 1e-6;
  std::size_t d_cap = kUnbounded;     ///< D (ASCI)
  std::size_t core_cap = kUnbounded;  ///< C
  int max_iters = 100;                ///< T
  TrimParams trim;
  std::size_t budget = 10'000'000;    ///< hard cap on |B|
  double eig_tol = 1e-10;

  void validate() const;
};

/// Amplitude map over the current core.
using AmpMap = std::unordered_map<u64, cplx, U64Hash>;

/// Per-candidate quantities derived from one sweep of H over the core.
struct CandidateScores {
  std::vector<u64> configs;       ///< sorted by bit value
  std::vector<cplx> numerator;    ///< <x|H|psi>
  std::vector<double> hci_max;    ///< max_i |<x|H|x_i> c_i|
  std::vector<double> diagonal;   ///< <x|H|x>
};

/// Candidates A = neighbors of the core (outside it) with their scores.
CandidateScores score_candidates(const CompiledSum& h, const std::vector<u64>& core,
                                 const AmpMap& psi);

/// |<x|H|psi> / (E_x - E0)|, +inf when the denominator is below 1e-12.
double perturbative_magnitude(cplx numerator, double e_x, double e0);

/// Kept set = core plus passing candidates, sorted by bit value.
std::vector<u64> select_cipsi(const std::vector<u64>& core, const CandidateScores& cand,
                              double e0, double eps);
std::vector<u64> select_hci(const std::vector<u64>& core, const CandidateScores& cand,
                            double eps);
/// Top D over |c| (core) and |c~| (candidates); ties by bit value ascending.
std::vector<u64> select_asci(const std::vector<u64>& core, const AmpMap& psi,
                             const CandidateScores& cand, double e0, std::size_t d);

struct TrimOutcome {
  std::vector<u64> kept;
  double epsilon_used = 0.0;
  std::size_t filtered = 0;  ///< |A~|
  bool short_subset = false;
};

TrimOutcome select_trimci(const CompiledSum& h, const std::vector<u64>& core,
                          const CandidateScores& cand, double e0, double eps,
                          const TrimParams& tp, std::uint64_t stream);

struct SciResult {
  EigResult eig;
  SolverTrace trace;
  std::vector<u64> basis;
};

SciResult run_sci(const PauliSum& h, const Configuration& x0, const SciParams& p,
                  const std::vector<u64>* initial = nullptr);

/// Lowest eigenpair of H restricted to `basis` (dense for small sets).
EigResult diagonalize_on(const CompiledSum& h, const std::vector<u64>& basis, double tol,
                         double* flops = nullptr);

}  // namespace sgs
