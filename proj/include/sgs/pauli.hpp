// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace sgs {

using u64 = std::uint64_t;
using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 64;
inline constexpr double kCoeffFloor = 1e-14;  ///< canonical drop threshold

/// Mask with the low n bits set.
constexpr u64 low_mask(int n) noexcept {
  return n >= 64 ? ~u64{0} : ((u64{1} << n) - 1);
}

class WidthError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void check_width(int n);

/// Computational basis state |x>, qubit i stored in bit i.
struct Configuration {
  u64 bits = 0;
  int n_qubits = 0;

  Configuration() = default;
  Configuration(u64 b, int n);

  bool bit(int q) const noexcept { return (bits >> q) & 1u; }
  std::string to_hex() const;
  static Configuration from_hex(const std::string& s, int n);

  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend auto operator<=>(const Configuration& a, const Configuration& b) {
    if (a.n_qubits != b.n_qubits) return a.n_qubits <=> b.n_qubits;
    return a.bits <=> b.bits;
  }
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const noexcept;
};

/// splitmix64 finalizer, used for hashing and seed splitting.
inline u64 mix64(u64 x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct U64Hash {
  std::size_t operator()(u64 x) const noexcept { return mix64(x); }
};

/// Pauli string as (x_mask, z_mask); Y on a qubit sets both bits.
/// Operator convention: P = i^{#Y} X^{x_mask} Z^{z_mask}, i.e. Y = iXZ.
struct PauliString {
  u64 x_mask = 0;
  u64 z_mask = 0;
  int n_qubits = 0;

  PauliString() = default;
  PauliString(u64 x, u64 z, int n);

  int weight() const noexcept;
  int num_y() const noexcept;
  std::string label() const;  ///< qubit 0 leftmost
  static PauliString from_label(const std::string& label);
  /// Single-site helper, e.g. single(n, {{3,'X'},{5,'Z'}}).
  static PauliString from_sites(int n, const std::vector<std::pair<int, char>>& sites);

  friend bool operator==(const PauliString&, const PauliString&) = default;
};

/// P|x> = phase |y>.
std::pair<cplx, Configuration> apply_pauli_to_config(const PauliString& p,
                                                     const Configuration& x);

/// Raw-bit variant used in hot loops; width checks are the caller's job.
inline double z_sign(u64 z_mask, u64 x) noexcept {
  return (__builtin_popcountll(z_mask & x) & 1) ? -1.0 : 1.0;
}
cplx i_power(int k) noexcept;

struct PauliTerm {
  cplx coeff;
  PauliString str;
};

/// H = sum_k alpha_k T_k with unique strings.
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(int n_qubits);
  PauliSum(int n_qubits, std::vector<PauliTerm> terms);

  int n_qubits() const noexcept { return n_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  const std::vector<PauliTerm>& terms() const noexcept { return terms_; }

  /// Accumulate a term (merging happens on canonicalize()).
  void add(cplx coeff, const PauliString& p);
  void add(const PauliSum& other, cplx scale = 1.0);
  /// Merge duplicates, drop |coeff| < floor, sort by (x_mask, z_mask).
  void canonicalize(double floor = kCoeffFloor);

  bool is_hermitian(double tol = 1e-12) const;
  double one_norm() const;  ///< sum |alpha_k|
  cplx identity_coeff() const;

  std::string to_text() const;
  static PauliSum from_text(const std::string& text);
  std::string to_json() const;
  static PauliSum from_json(const std::string& text);

 private:
  int n_ = 0;
  std::vector<PauliTerm> terms_;
};

/// Terms grouped by x_mask with the i^{#Y} factor folded into the coefficient.
/// <x ^ x_mask| H |x> = sum_j c_j (-1)^{popcount(z_j & x)} over the group.
struct CompiledSum {
  struct Group {
    u64 x_mask = 0;
    std::vector<u64> z;
    std::vector<cplx> c;
    cplx amplitude(u64 x) const noexcept {
      cplx s = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j) s += c[j] * z_sign(z[j], x);
      return s;
    }
  };
  int n_qubits = 0;
  std::vector<Group> groups;  ///< diagonal group (x_mask == 0) first when present
  std::size_t n_terms = 0;

  explicit CompiledSum(const PauliSum& h);
  const Group* find(u64 x_mask) const;
  cplx diagonal(u64 x) const;

 private:
  std::unordered_map<u64, std::size_t, U64Hash> index_;
};

cplx matrix_element(const PauliSum& h, const Configuration& x, const Configuration& y);

class SparseVector {
 public:
  using Map = std::unordered_map<u64, cplx, U64Hash>;

  SparseVector() = default;
  explicit SparseVector(int n) : n_(n) { check_width(n); }

  int n_qubits() const noexcept { return n_; }
  std::size_t size() const noexcept { return entries_.size(); }
  Map& entries() noexcept { return entries_; }
  const Map& entries() const noexcept { return entries_; }

  cplx get(u64 x) const;
  void set(u64 x, cplx a) { entries_[x] = a; }
  void add(u64 x, cplx a) { entries_[x] += a; }
  double norm() const;
  void scale(cplx s);
  void prune(double floor = 0.0);  ///< drops |amp| <= floor
  cplx dot(const SparseVector& other) const;  ///< <this|other>
  void axpy(cplx a, const SparseVector& other);  ///< this += a*other
  /// Keep the k largest magnitudes; ties broken by bit value ascending.
  void truncate_top(std::size_t k);
  /// Entries sorted by bit value.
  std::vector<std::pair<u64, cplx>> sorted() const;

 private:
  int n_ = 0;
  Map entries_;
};

SparseVector apply_sum_to_vector(const PauliSum& h, const SparseVector& v);
SparseVector apply_compiled(const CompiledSum& h, const SparseVector& v);

PauliSum conjugate_by_x_layer(const PauliSum& h, u64 mask);

/// Pauli expansion of a dense 2^k block acting on `qubits`.
/// Matrix index bit j holds the value of qubits[j].
PauliSum decompose_dense_block(const Eigen::MatrixXcd& m, const std::vector<int>& qubits,
                               int n, int max_k = 4, double herm_tol = 1e-12);

/// Dense 2^n matrix of a PauliSum, library-side helper for small n.
Eigen::MatrixXcd to_dense(const PauliSum& h);

}  // namespace sgs
