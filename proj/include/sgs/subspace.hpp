// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sgs/pauli.hpp"

namespace sgs {

enum class AddressMode { Sorted, Hashed };

/// Ordered, addressable configuration set.
class ConfigurationBasis {
 public:
  ConfigurationBasis() = default;
  ConfigurationBasis(int n_qubits, std::vector<u64> members, AddressMode mode = AddressMode::Hashed);
  static ConfigurationBasis from_configs(const std::vector<Configuration>& cs,
                                         AddressMode mode = AddressMode::Hashed);

  int n_qubits() const noexcept { return n_; }
  std::size_t size() const noexcept { return members_.size(); }
  const std::vector<u64>& members() const noexcept { return members_; }
  u64 operator[](std::size_t i) const { return members_[i]; }
  AddressMode mode() const noexcept { return mode_; }

  /// Index of x, or -1.
  std::ptrdiff_t address(u64 x) const;
  bool contains(u64 x) const { return address(x) >= 0; }

  std::string to_text() const;
  static ConfigurationBasis from_text(const std::string& text, AddressMode mode = AddressMode::Hashed);

 private:
  int n_ = 0;
  AddressMode mode_ = AddressMode::Hashed;
  std::vector<u64> members_;
  std::vector<std::pair<u64, std::uint32_t>> sorted_;  // Sorted mode
  std::unordered_map<u64, std::uint32_t, U64Hash> hash_;  // Hashed mode
};

/// H_B in compressed sparse row form.
struct ProjectedMatrix {
  std::size_t dim = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> cols;
  std::vector<cplx> vals;

  std::size_t nnz() const { return vals.size(); }
  cplx at(std::size_t r, std::size_t c) const;
  void multiply(const cplx* x, cplx* y) const;  ///< y = H_B x
  Eigen::MatrixXcd dense() const;
  double hermiticity_error() const;
  std::string to_coo() const;
};

ProjectedMatrix project_fast(const PauliSum& h, const ConfigurationBasis& b);
ProjectedMatrix project_fast(const CompiledSum& h, const ConfigurationBasis& b);
ProjectedMatrix project_naive(const PauliSum& h, const ConfigurationBasis& b);

/// Configurations outside `seed` reached by one application of H with a
/// nonzero net matrix element. Result sorted by bit value.
std::vector<u64> connected_configurations(const CompiledSum& h, const std::vector<u64>& seed,
                                          double floor = kCoeffFloor);
std::vector<Configuration> connected_configurations(const PauliSum& h,
                                                    const std::vector<Configuration>& seed);

/// Keeps x iff <y|H|x> != 0 for some other pool member y. Single pass.
std::vector<u64> connectivity_filter(const CompiledSum& h, const std::vector<u64>& pool,
                                     double floor = kCoeffFloor);
std::vector<Configuration> connectivity_filter(const PauliSum& h,
                                               const std::vector<Configuration>& pool);

}  // namespace sgs
