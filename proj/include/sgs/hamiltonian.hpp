// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sgs/lattice.hpp"
#include "sgs/pauli.hpp"

namespace sgs {

/// Defaults are solved to full precision from three conditions: (-c, b) is a
/// normalized eigenvector of the leading 2x2 block, and the ground energy is 0.
/// To 8 digits they read a = 0.90694271, b = -0.78820544, c = -0.61541221.
/// The 8-digit values leave partial-ground-state tails of order 1e-10.
struct CoreBlockParams {
  double a = 0.90694271124435821;
  double b = -0.78820543801610915;
  double c = -0.61541220940263568;

  /// The 8-digit roundings.
  static CoreBlockParams rounded() { return {0.90694271, -0.78820544, -0.61541221}; }
};

/// The 8x8 banded core block. `eta` replaces the (6,7)/(7,6) coupling.
Eigen::MatrixXd build_core_block(const CoreBlockParams& p = {}, double eta = 1.0);

/// Lowest eigenvector of each leading i x i block (i = 1..dim), largest-magnitude entry positive.
std::vector<Eigen::VectorXd> partial_ground_states(const Eigen::MatrixXd& m);

/// Ascending spectrum of the core block for each eta.
std::vector<Eigen::VectorXd> level_crossing_sweep(const CoreBlockParams& p,
                                                  const std::vector<double>& etas);

/// Normalized ground vector of the core block with the sign convention above.
Eigen::VectorXd core_ground_state(const CoreBlockParams& p = {});

struct ConstructionParams {
  double m1 = 0.1;
  double m2 = 0.01;
  double j1 = 1.0;
  CouplingMode mode = CouplingMode::Main;
  std::uint64_t mask_seed = 0;
  std::optional<u64> mask;  ///< explicit obfuscation mask overrides the seed
  /// Adds vacuum_offset * (I - N_S0) per main patch; lifts the patch vacuum
  /// off the ground level without adding Pauli strings.
  double vacuum_offset = 0.05;
  /// Coefficient of (I - Z) on padding qubits; negative means "use m2".
  double padding_pin = -1.0;
  /// false drops H_int, leaving the bare patch Hamiltonians.
  bool coupling = true;
  CoreBlockParams core;

  void validate() const;
};

struct GroundStateCertificate {
  double energy = 0.0;
  std::vector<Configuration> support;
  std::vector<double> amplitudes;
  Configuration initial_config;
  int patch_support_size = 8;
  int n_patch = 1;

  /// Squared overlap of the initial configuration with the ground state.
  double initial_overlap_sq() const;
  SparseVector as_vector() const;
};

struct PatchBuild {
  PauliSum h;
  GroundStateCertificate cert;
};

/// 4-qubit warmup patch on qubits {coupling, core0, core1, core2}:
/// (I + m1 X_c) H_S0 + m2 (I - Z_c).
PatchBuild build_warmup_patch(const std::vector<int>& qubits, const CoreBlockParams& p, double m1,
                              double m2, int n_total);

/// 16-qubit main patch along `path`; even positions carry S0, odd positions S1.
PatchBuild build_main_patch(const std::vector<int>& path, const CoreBlockParams& p, double m1,
                            double m2, int n_total, double vacuum_offset = 0.05);

/// Two-qubit coupling matrices, index bit 0 = first (control) qubit.
Eigen::MatrixXcd warmup_interaction();
Eigen::MatrixXcd main_interaction(double j1);

struct Instance {
  PauliSum h;
  GroundStateCertificate cert;
  u64 mask = 0;
  LayoutGraph layout;
  PatchEmbedding embedding;
  ConstructionParams params;
  std::uint64_t seed = 0;
};

Instance assemble_global(const LayoutGraph& g, const PatchEmbedding& emb,
                         const ConstructionParams& params);

struct CertificateReport {
  bool pass = false;
  double residual = 0.0;   ///< ||(H - E)|Psi>||
  double tolerance = 0.0;  ///< 1e-7 * sum |alpha|
  double norm = 0.0;
};

CertificateReport verify_certificate(const PauliSum& h, const GroundStateCertificate& cert,
                                     double rel_tol = 1e-7);

/// Convenience generators used by the CLI and tests.
Instance generate_heavy_hex_instance(int rows, int cols, int n_patch,
                                     const ConstructionParams& params, std::uint64_t seed);
Instance generate_path16_instance(const ConstructionParams& params, std::uint64_t seed);
/// Warmup instance: two 4-qubit patches inside a 3x4 grid (12 qubits).
Instance generate_warmup_instance(const ConstructionParams& params, std::uint64_t seed);

}  // namespace sgs
