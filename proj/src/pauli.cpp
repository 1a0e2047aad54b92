// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#include "sgs/pauli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace sgs {

void check_width(int n) {
  if (n < 0 || n > kMaxQubits) throw WidthError("qubit count outside [0, 64]");
}

Configuration::Configuration(u64 b, int n) : bits(b), n_qubits(n) {
  check_width(n);
  if (b & ~low_mask(n)) throw WidthError("configuration has bits beyond n_qubits");
}

std::string Configuration::to_hex() const {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof(buf), bits, 16);
  return "0x" + std::string(buf, r.ptr);
}

Configuration Configuration::from_hex(const std::string& s, int n) {
  std::string_view v(s);
  if (v.starts_with("0x") || v.starts_with("0X")) v.remove_prefix(2);
  u64 b = 0;
  auto r = std::from_chars(v.data(), v.data() + v.size(), b, 16);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw std::invalid_argument("bad hex configuration: " + s);
  return Configuration(b, n);
}

std::size_t ConfigurationHash::operator()(const Configuration& c) const noexcept {
  return mix64(c.bits ^ (u64(c.n_qubits) << 58));
}

PauliString::PauliString(u64 x, u64 z, int n) : x_mask(x), z_mask(z), n_qubits(n) {
  check_width(n);
  if ((x | z) & ~low_mask(n)) throw WidthError("pauli string has sites beyond n_qubits");
}

int PauliString::weight() const noexcept { return __builtin_popcountll(x_mask | z_mask); }
int PauliString::num_y() const noexcept { return __builtin_popcountll(x_mask & z_mask); }

std::string PauliString::label() const {
  std::string s(n_qubits, 'I');
  for (int q = 0; q < n_qubits; ++q) {
    bool xb = (x_mask >> q) & 1u, zb = (z_mask >> q) & 1u;
    s[q] = xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
  }
  return s;
}

PauliString PauliString::from_label(const std::string& label) {
  const int n = static_cast<int>(label.size());
  check_width(n);
  u64 x = 0, z = 0;
  for (int q = 0; q < n; ++q) {
    switch (label[q]) {
      case 'I': break;
      case 'X': x |= u64{1} << q; break;
      case 'Y': x |= u64{1} << q; z |= u64{1} << q; break;
      case 'Z': z |= u64{1} << q; break;
      default: throw std::invalid_argument("bad pauli label: " + label);
    }
  }
  return PauliString(x, z, n);
}

PauliString PauliString::from_sites(int n, const std::vector<std::pair<int, char>>& sites) {
  std::string s(n, 'I');
  for (auto [q, p] : sites) {
    if (q < 0 || q >= n) throw WidthError("site index out of range");
    s[q] = p;
  }
  return from_label(s);
}

cplx i_power(int k) noexcept {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

std::pair<cplx, Configuration> apply_pauli_to_config(const PauliString& p,
                                                     const Configuration& x) {
  if (p.n_qubits != x.n_qubits) throw WidthError("pauli/config width mismatch");
  cplx ph = i_power(p.num_y()) * z_sign(p.z_mask, x.bits);
  return {ph, Configuration(x.bits ^ p.x_mask, x.n_qubits)};
}

// ---------------------------------------------------------------- PauliSum

PauliSum::PauliSum(int n_qubits) : n_(n_qubits) { check_width(n_qubits); }

PauliSum::PauliSum(int n_qubits, std::vector<PauliTerm> terms)
    : n_(n_qubits), terms_(std::move(terms)) {
  check_width(n_qubits);
  for (const auto& t : terms_)
    if (t.str.n_qubits != n_) throw WidthError("term width mismatch");
  canonicalize();
}

void PauliSum::add(cplx coeff, const PauliString& p) {
  if (p.n_qubits != n_) throw WidthError("term width mismatch");
  terms_.push_back({coeff, p});
}

void PauliSum::add(const PauliSum& other, cplx scale) {
  if (other.n_ != n_) throw WidthError("sum width mismatch");
  for (const auto& t : other.terms_) terms_.push_back({t.coeff * scale, t.str});
}

void PauliSum::canonicalize(double floor) {
  std::sort(terms_.begin(), terms_.end(), [](const PauliTerm& a, const PauliTerm& b) {
    return a.str.x_mask != b.str.x_mask ? a.str.x_mask < b.str.x_mask
                                        : a.str.z_mask < b.str.z_mask;
  });
  std::vector<PauliTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!out.empty() && out.back().str == t.str)
      out.back().coeff += t.coeff;
    else
      out.push_back(t);
  }
  std::erase_if(out, [floor](const PauliTerm& t) { return std::abs(t.coeff) < floor; });
  terms_ = std::move(out);
}

bool PauliSum::is_hermitian(double tol) const {
  // Each Pauli string is Hermitian and the strings are distinct, so the
  // conjugate of alpha*P is alpha^* P: it is present iff alpha is real.
  return std::all_of(terms_.begin(), terms_.end(),
                     [tol](const PauliTerm& t) { return std::abs(t.coeff.imag()) <= tol; });
}

double PauliSum::one_norm() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

cplx PauliSum::identity_coeff() const {
  cplx s = 0.0;
  for (const auto& t : terms_)
    if (t.str.x_mask == 0 && t.str.z_mask == 0) s += t.coeff;
  return s;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw std::invalid_argument("bad number: " + std::string(s));
  return v;
}

}  // namespace

std::string PauliSum::to_text() const {
  std::string out;
  for (const auto& t : terms_) {
    out += fmt_double(t.coeff.real());
    out += ' ';
    out += fmt_double(t.coeff.imag());
    out += ' ';
    out += t.str.label();
    out += '\n';
  }
  return out;
}

PauliSum PauliSum::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string re, im, label;
  std::vector<PauliTerm> terms;
  int n = -1;
  while (in >> re >> im >> label) {
    auto p = PauliString::from_label(label);
    if (n < 0) n = p.n_qubits;
    if (p.n_qubits != n) throw WidthError("inconsistent label widths");
    terms.push_back({cplx(parse_double(re), parse_double(im)), p});
  }
  if (n < 0) throw std::invalid_argument("empty pauli text");
  return PauliSum(n, std::move(terms));
}

std::string PauliSum::to_json() const {
  nlohmann::ordered_json j;
  j["n_qubits"] = n_;
  j["terms"] = nlohmann::ordered_json::array();
  for (const auto& t : terms_)
    j["terms"].push_back({{"coeff", {t.coeff.real(), t.coeff.imag()}}, {"label", t.str.label()}});
  return j.dump(1);
}

PauliSum PauliSum::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  const int n = j.at("n_qubits").get<int>();
  std::vector<PauliTerm> terms;
  for (const auto& t : j.at("terms")) {
    auto p = PauliString::from_label(t.at("label").get<std::string>());
    if (p.n_qubits != n) throw WidthError("label width differs from n_qubits");
    terms.push_back({cplx(t.at("coeff")[0].get<double>(), t.at("coeff")[1].get<double>()), p});
  }
  return PauliSum(n, std::move(terms));
}

// ------------------------------------------------------------- CompiledSum

CompiledSum::CompiledSum(const PauliSum& h) : n_qubits(h.n_qubits()), n_terms(h.size()) {
  for (const auto& t : h.terms()) {
    auto [it, fresh] = index_.try_emplace(t.str.x_mask, groups.size());
    if (fresh) groups.push_back(Group{t.str.x_mask, {}, {}});
    auto& g = groups[it->second];
    g.z.push_back(t.str.z_mask);
    g.c.push_back(t.coeff * i_power(t.str.num_y()));
  }
}

const CompiledSum::Group* CompiledSum::find(u64 x_mask) const {
  auto it = index_.find(x_mask);
  return it == index_.end() ? nullptr : &groups[it->second];
}

cplx CompiledSum::diagonal(u64 x) const {
  const Group* g = find(0);
  return g ? g->amplitude(x) : cplx(0.0);
}

cplx matrix_element(const PauliSum& h, const Configuration& x, const Configuration& y) {
  if (x.n_qubits != h.n_qubits() || y.n_qubits != h.n_qubits())
    throw WidthError("matrix_element width mismatch");
  // <x|T|y> is nonzero only when x = y ^ x_mask.
  const u64 flip = x.bits ^ y.bits;
  cplx s = 0.0;
  for (const auto& t : h.terms()) {
    if (t.str.x_mask != flip) continue;
    s += t.coeff * i_power(t.str.num_y()) * z_sign(t.str.z_mask, y.bits);
  }
  return s;
}

// ------------------------------------------------------------ SparseVector

cplx SparseVector::get(u64 x) const {
  auto it = entries_.find(x);
  return it == entries_.end() ? cplx(0.0) : it->second;
}

double SparseVector::norm() const {
  double s = 0.0;
  for (const auto& [k, a] : entries_) s += std::norm(a);
  return std::sqrt(s);
}

void SparseVector::scale(cplx s) {
  for (auto& [k, a] : entries_) a *= s;
}

void SparseVector::prune(double floor) {
  std::erase_if(entries_, [floor](const auto& kv) { return std::abs(kv.second) <= floor; });
}

cplx SparseVector::dot(const SparseVector& other) const {
  const Map& small = size() <= other.size() ? entries_ : other.entries_;
  const Map& big = size() <= other.size() ? other.entries_ : entries_;
  const bool conj_small = (&small == &entries_);
  cplx s = 0.0;
  for (const auto& [k, a] : small) {
    auto it = big.find(k);
    if (it == big.end()) continue;
    s += conj_small ? std::conj(a) * it->second : std::conj(it->second) * a;
  }
  return s;
}

void SparseVector::axpy(cplx a, const SparseVector& other) {
  for (const auto& [k, v] : other.entries_) entries_[k] += a * v;
}

void SparseVector::truncate_top(std::size_t k) {
  if (entries_.size() <= k) return;
  std::vector<std::pair<u64, double>> mags;
  mags.reserve(entries_.size());
  for (const auto& [x, a] : entries_) mags.emplace_back(x, std::abs(a));
  auto cmp = [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  };
  std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(k), mags.end(), cmp);
  Map kept;
  kept.reserve(k);
  for (std::size_t i = 0; i < k; ++i) kept.emplace(mags[i].first, entries_[mags[i].first]);
  entries_ = std::move(kept);
}

std::vector<std::pair<u64, cplx>> SparseVector::sorted() const {
  std::vector<std::pair<u64, cplx>> out(entries_.begin(), entries_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

SparseVector apply_compiled(const CompiledSum& h, const SparseVector& v) {
  if (h.n_qubits != v.n_qubits()) throw WidthError("apply width mismatch");
  SparseVector out(v.n_qubits());
  auto& e = out.entries();
  e.reserve(v.size() * std::min<std::size_t>(h.groups.size(), 64));
  for (const auto& [x, a] : v.entries()) {
    for (const auto& g : h.groups) {
      cplx amp = g.amplitude(x);
      if (amp != 0.0) e[x ^ g.x_mask] += amp * a;
    }
  }
  out.prune(0.0);
  return out;
}

SparseVector apply_sum_to_vector(const PauliSum& h, const SparseVector& v) {
  return apply_compiled(CompiledSum(h), v);
}

PauliSum conjugate_by_x_layer(const PauliSum& h, u64 mask) {
  if (mask & ~low_mask(h.n_qubits())) throw WidthError("mask wider than n_qubits");
  std::vector<PauliTerm> out;
  out.reserve(h.size());
  for (const auto& t : h.terms()) out.push_back({t.coeff * z_sign(t.str.z_mask, mask), t.str});
  return PauliSum(h.n_qubits(), std::move(out));
}

PauliSum decompose_dense_block(const Eigen::MatrixXcd& m, const std::vector<int>& qubits, int n,
                               int max_k, double herm_tol) {
  const int k = static_cast<int>(qubits.size());
  if (k > max_k) throw std::invalid_argument("block wider than the configured cap");
  const Eigen::Index dim = Eigen::Index{1} << k;
  if (m.rows() != dim || m.cols() != dim) throw std::invalid_argument("block is not 2^k square");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
    throw std::invalid_argument("block is not Hermitian");
  for (int q : qubits)
    if (q < 0 || q >= n) throw WidthError("block qubit out of range");

  PauliSum out(n);
  // alpha_P = Tr(P M) / 2^k, with Tr(P M) = sum_y P[y][y^xl] M[y^xl][y].
  for (u64 xl = 0; xl < u64(dim); ++xl) {
    for (u64 zl = 0; zl < u64(dim); ++zl) {
      cplx tr = 0.0;
      const cplx iy = i_power(__builtin_popcountll(xl & zl));
      for (u64 y = 0; y < u64(dim); ++y) {
        const u64 src = y ^ xl;  // P|src> lands on |y>
        tr += iy * z_sign(zl, src) * m(Eigen::Index(src), Eigen::Index(y));
      }
      cplx coeff = tr / double(dim);
      if (std::abs(coeff) < kCoeffFloor) continue;
      u64 gx = 0, gz = 0;
      for (int j = 0; j < k; ++j) {
        if ((xl >> j) & 1u) gx |= u64{1} << qubits[j];
        if ((zl >> j) & 1u) gz |= u64{1} << qubits[j];
      }
      out.add(coeff, PauliString(gx, gz, n));
    }
  }
  out.canonicalize();
  return out;
}

Eigen::MatrixXcd to_dense(const PauliSum& h) {
  const int n = h.n_qubits();
  if (n > 14) throw WidthError("dense matrix too large");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : h.terms()) {
    const cplx iy = t.coeff * i_power(t.str.num_y());
    for (u64 x = 0; x < u64(dim); ++x)
      m(Eigen::Index(x ^ t.str.x_mask), Eigen::Index(x)) += iy * z_sign(t.str.z_mask, x);
  }
  return m;
}

}  // namespace sgs
