// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#include "sgs/subspace.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace sgs {

ConfigurationBasis::ConfigurationBasis(int n_qubits, std::vector<u64> members, AddressMode mode)
    : n_(n_qubits), mode_(mode), members_(std::move(members)) {
  check_width(n_qubits);
  const u64 over = ~low_mask(n_qubits);
  if (members_.size() > UINT32_MAX) throw std::length_error("basis too large");
  if (mode_ == AddressMode::Sorted) {
    sorted_.reserve(members_.size());
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (members_[i] & over) throw WidthError("basis member wider than n_qubits");
      sorted_.push_back({members_[i], static_cast<std::uint32_t>(i)});
    }
    std::sort(sorted_.begin(), sorted_.end());
    for (std::size_t i = 1; i < sorted_.size(); ++i)
      if (sorted_[i].first == sorted_[i - 1].first) throw std::invalid_argument("duplicate basis member");
  } else {
    hash_.reserve(members_.size());
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (members_[i] & over) throw WidthError("basis member wider than n_qubits");
      if (!hash_.emplace(members_[i], static_cast<std::uint32_t>(i)).second)
        throw std::invalid_argument("duplicate basis member");
    }
  }
}

ConfigurationBasis ConfigurationBasis::from_configs(const std::vector<Configuration>& cs,
                                                    AddressMode mode) {
  if (cs.empty()) return ConfigurationBasis(0, {}, mode);
  std::vector<u64> m;
  m.reserve(cs.size());
  for (const auto& c : cs) {
    if (c.n_qubits != cs.front().n_qubits) throw WidthError("mixed widths in basis");
    m.push_back(c.bits);
  }
  return ConfigurationBasis(cs.front().n_qubits, std::move(m), mode);
}

std::ptrdiff_t ConfigurationBasis::address(u64 x) const {
  if (mode_ == AddressMode::Sorted) {
    auto it = std::lower_bound(sorted_.begin(), sorted_.end(), std::pair<u64, std::uint32_t>{x, 0});
    return (it != sorted_.end() && it->first == x) ? static_cast<std::ptrdiff_t>(it->second) : -1;
  }
  auto it = hash_.find(x);
  return it == hash_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

std::string ConfigurationBasis::to_text() const {
  std::string out = "n_qubits " + std::to_string(n_) + "\n";
  for (u64 x : members_) out += Configuration(x, n_).to_hex() + "\n";
  return out;
}

ConfigurationBasis ConfigurationBasis::from_text(const std::string& text, AddressMode mode) {
  std::istringstream in(text);
  std::string tag;
  int n = 0;
  if (!(in >> tag >> n) || tag != "n_qubits") throw std::invalid_argument("basis header missing");
  std::vector<u64> m;
  std::string tok;
  while (in >> tok) m.push_back(Configuration::from_hex(tok, n).bits);
  return ConfigurationBasis(n, std::move(m), mode);
}

// ---------------------------------------------------------- ProjectedMatrix

cplx ProjectedMatrix::at(std::size_t r, std::size_t c) const {
  for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
    if (cols[k] == c) return vals[k];
  return 0.0;
}

void ProjectedMatrix::multiply(const cplx* x, cplx* y) const {
  for (std::size_t r = 0; r < dim; ++r) {
    cplx s = 0.0;
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += vals[k] * x[cols[k]];
    y[r] = s;
  }
}

Eigen::MatrixXcd ProjectedMatrix::dense() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(Eigen::Index(dim), Eigen::Index(dim));
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) m(Eigen::Index(r), cols[k]) = vals[k];
  return m;
}

double ProjectedMatrix::hermiticity_error() const {
  double e = 0.0;
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
      e = std::max(e, std::abs(vals[k] - std::conj(at(cols[k], r))));
  return e;
}

std::string ProjectedMatrix::to_coo() const {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
      out << r << ' ' << cols[k] << ' ' << vals[k].real() << ' ' << vals[k].imag() << '\n';
  return out.str();
}

// --------------------------------------------------------------- projection

ProjectedMatrix project_fast(const CompiledSum& h, const ConfigurationBasis& b) {
  if (b.size() > 0 && h.n_qubits != b.n_qubits()) throw WidthError("projection width mismatch");
  // For member x (column) and each x_mask group, y = x ^ x_mask. Row r=addr(y)
  // gets <y|H|x>. Built column-wise, then transposed into CSR rows.
  const std::size_t dim = b.size();
  std::vector<std::size_t> counts(dim + 1, 0);
  std::vector<std::uint32_t> trow, tcol;
  std::vector<cplx> tval;
  trow.reserve(dim * 8);
  tcol.reserve(dim * 8);
  tval.reserve(dim * 8);
  for (std::size_t c = 0; c < dim; ++c) {
    const u64 x = b[c];
    for (const auto& g : h.groups) {
      const std::ptrdiff_t r = b.address(x ^ g.x_mask);
      if (r < 0) continue;
      const cplx v = g.amplitude(x);
      if (std::abs(v) < kCoeffFloor) continue;
      trow.push_back(static_cast<std::uint32_t>(r));
      tcol.push_back(static_cast<std::uint32_t>(c));
      tval.push_back(v);
      ++counts[r + 1];
    }
  }
  ProjectedMatrix m;
  m.dim = dim;
  m.row_ptr.assign(dim + 1, 0);
  for (std::size_t r = 0; r < dim; ++r) m.row_ptr[r + 1] = m.row_ptr[r] + counts[r + 1];
  m.cols.resize(tval.size());
  m.vals.resize(tval.size());
  std::vector<std::size_t> fill(m.row_ptr.begin(), m.row_ptr.end() - 1);
  for (std::size_t k = 0; k < tval.size(); ++k) {
    const std::size_t pos = fill[trow[k]]++;
    m.cols[pos] = tcol[k];
    m.vals[pos] = tval[k];
  }
  // Columns were visited in order, so each row is already column-sorted.
  return m;
}

ProjectedMatrix project_fast(const PauliSum& h, const ConfigurationBasis& b) {
  return project_fast(CompiledSum(h), b);
}

ProjectedMatrix project_naive(const PauliSum& h, const ConfigurationBasis& b) {
  if (b.size() > 0 && h.n_qubits() != b.n_qubits()) throw WidthError("projection width mismatch");
  ProjectedMatrix m;
  m.dim = b.size();
  m.row_ptr.assign(m.dim + 1, 0);
  const int n = h.n_qubits();
  for (std::size_t r = 0; r < m.dim; ++r) {
    for (std::size_t c = 0; c < m.dim; ++c) {
      const cplx v = matrix_element(h, Configuration(b[r], n), Configuration(b[c], n));
      if (std::abs(v) < kCoeffFloor) continue;
      m.cols.push_back(static_cast<std::uint32_t>(c));
      m.vals.push_back(v);
    }
    m.row_ptr[r + 1] = m.vals.size();
  }
  return m;
}

std::vector<u64> connected_configurations(const CompiledSum& h, const std::vector<u64>& seed,
                                          double floor) {
  std::unordered_set<u64, U64Hash> in(seed.begin(), seed.end());
  std::unordered_set<u64, U64Hash> out;
  for (u64 x : seed) {
    for (const auto& g : h.groups) {
      if (g.x_mask == 0) continue;
      const u64 y = x ^ g.x_mask;
      if (in.count(y)) continue;
      if (std::abs(g.amplitude(x)) < floor) continue;
      out.insert(y);
    }
  }
  std::vector<u64> v(out.begin(), out.end());
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<Configuration> connected_configurations(const PauliSum& h,
                                                    const std::vector<Configuration>& seed) {
  std::vector<u64> s;
  for (const auto& c : seed) {
    if (c.n_qubits != h.n_qubits()) throw WidthError("seed width mismatch");
    s.push_back(c.bits);
  }
  std::vector<Configuration> out;
  for (u64 y : connected_configurations(CompiledSum(h), s)) out.emplace_back(y, h.n_qubits());
  return out;
}

std::vector<u64> connectivity_filter(const CompiledSum& h, const std::vector<u64>& pool,
                                     double floor) {
  std::unordered_set<u64, U64Hash> in(pool.begin(), pool.end());
  std::vector<u64> keep;
  for (u64 x : pool) {
    for (const auto& g : h.groups) {
      if (g.x_mask == 0 || !in.count(x ^ g.x_mask)) continue;
      if (std::abs(g.amplitude(x)) >= floor) {
        keep.push_back(x);
        break;
      }
    }
  }
  return keep;
}

std::vector<Configuration> connectivity_filter(const PauliSum& h,
                                               const std::vector<Configuration>& pool) {
  std::vector<u64> p;
  for (const auto& c : pool) {
    if (c.n_qubits != h.n_qubits()) throw WidthError("pool width mismatch");
    p.push_back(c.bits);
  }
  std::vector<Configuration> out;
  for (u64 y : connectivity_filter(CompiledSum(h), p)) out.emplace_back(y, h.n_qubits());
  return out;
}

}  // namespace sgs
