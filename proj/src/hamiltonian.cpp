// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#include "sgs/hamiltonian.hpp"

#include <cmath>

#include "sgs/rng.hpp"

namespace sgs {

Eigen::MatrixXd build_core_block(const CoreBlockParams& p, double eta) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(8, 8);
  const double diag[8] = {p.a + 0.5, p.a, p.a + 2, p.a + 2, p.a + 1, p.a + 1, p.a + 1, p.a};
  for (int i = 0; i < 8; ++i) h(i, i) = diag[i];
  auto sym = [&h](int i, int j, double v) { h(i, j) = h(j, i) = v; };
  sym(0, 1, 1.0);
  sym(0, 2, p.b);
  sym(1, 2, p.c);
  for (int i = 2; i < 6; ++i) sym(i, i + 1, 1.0);
  sym(6, 7, eta);
  return h;
}

namespace {

void fix_sign(Eigen::VectorXd& v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (v(k) < 0) v = -v;
}

}  // namespace

std::vector<Eigen::VectorXd> partial_ground_states(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
  std::vector<Eigen::VectorXd> out;
  for (Eigen::Index i = 1; i <= m.rows(); ++i) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.topLeftCorner(i, i));
    Eigen::VectorXd v = es.eigenvectors().col(0);
    fix_sign(v);
    out.push_back(v);
  }
  return out;
}

std::vector<Eigen::VectorXd> level_crossing_sweep(const CoreBlockParams& p,
                                                  const std::vector<double>& etas) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(etas.size());
  for (double eta : etas) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_core_block(p, eta),
                                                      Eigen::EigenvaluesOnly);
    out.push_back(es.eigenvalues());
  }
  return out;
}

Eigen::VectorXd core_ground_state(const CoreBlockParams& p) {
  return partial_ground_states(build_core_block(p)).back();
}

void ConstructionParams::validate() const {
  if (!(std::abs(m1) <= 1.0)) throw std::invalid_argument("|m1| must be <= 1");
  if (!(m2 >= 0.0)) throw std::invalid_argument("m2 must be >= 0");
  if (!(j1 >= 0.0)) throw std::invalid_argument("j1 must be >= 0");
  if (!(vacuum_offset >= 0.0)) throw std::invalid_argument("vacuum offset must be >= 0");
}

double GroundStateCertificate::initial_overlap_sq() const {
  for (std::size_t i = 0; i < support.size(); ++i)
    if (support[i] == initial_config) return amplitudes[i] * amplitudes[i];
  return 0.0;
}

SparseVector GroundStateCertificate::as_vector() const {
  SparseVector v(initial_config.n_qubits);
  for (std::size_t i = 0; i < support.size(); ++i) v.set(support[i].bits, amplitudes[i]);
  return v;
}

namespace {

PauliString site(int n, int q, char p) { return PauliString::from_sites(n, {{q, p}}); }

/// Product of two Pauli strings: returns (phase, string) with P1 P2 = phase * P.
std::pair<cplx, PauliString> multiply(const PauliString& a, const PauliString& b) {
  // With P = i^{y} X^x Z^z: Z^{za} X^{xb} = (-1)^{|za & xb|} X^{xb} Z^{za}.
  const u64 x = a.x_mask ^ b.x_mask, z = a.z_mask ^ b.z_mask;
  int k = a.num_y() + b.num_y() - __builtin_popcountll(x & z);
  cplx ph = i_power(((k % 4) + 4) % 4) * z_sign(a.z_mask, b.x_mask);
  return {ph, PauliString(x, z, a.n_qubits)};
}

PauliSum multiply(const PauliSum& a, const PauliSum& b) {
  PauliSum out(a.n_qubits());
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) {
      auto [ph, s] = multiply(ta.str, tb.str);
      out.add(ta.coeff * tb.coeff * ph, s);
    }
  out.canonicalize();
  return out;
}

}  // namespace

PatchBuild build_warmup_patch(const std::vector<int>& qubits, const CoreBlockParams& p, double m1,
                              double m2, int n_total) {
  if (qubits.size() != 4) throw std::invalid_argument("warmup patch needs 4 qubits");
  if (!(std::abs(m1) <= 1.0) || m2 < 0) throw std::invalid_argument("warmup parameter out of range");
  const int c = qubits[0];
  const std::vector<int> core{qubits[1], qubits[2], qubits[3]};

  PauliSum hs0 = decompose_dense_block(build_core_block(p).cast<cplx>(), core, n_total);
  PauliSum coupling(n_total);
  coupling.add(1.0, PauliString(0, 0, n_total));
  coupling.add(m1, site(n_total, c, 'X'));
  coupling.canonicalize();
  PauliSum h = multiply(coupling, hs0);
  h.add(m2, PauliString(0, 0, n_total));
  h.add(-m2, site(n_total, c, 'Z'));
  h.canonicalize();

  PatchBuild out{std::move(h), {}};
  const Eigen::VectorXd psi = core_ground_state(p);
  for (u64 i = 0; i < 8; ++i) {
    u64 bits = 0;
    for (int j = 0; j < 3; ++j)
      if ((i >> j) & 1u) bits |= u64{1} << core[j];
    out.cert.support.emplace_back(bits, n_total);
    out.cert.amplitudes.push_back(psi(Eigen::Index(i)));
  }
  out.cert.initial_config = Configuration(0, n_total);
  return out;
}

PatchBuild build_main_patch(const std::vector<int>& path, const CoreBlockParams& p, double m1,
                            double m2, int n_total, double vacuum_offset) {
  if (path.size() != 16) throw std::invalid_argument("main patch needs a 16-qubit path");
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] < 0 || path[i] >= n_total) throw std::invalid_argument("path qubit out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (path[i] == path[j]) throw std::invalid_argument("path repeats a qubit");
  }
  if (!(std::abs(m1) <= 1.0) || m2 < 0) throw std::invalid_argument("patch parameter out of range");

  // Single-excitation block over path positions: S0 = even, S1 = odd.
  const Eigen::MatrixXd hs0 = build_core_block(p);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(16, 16);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      k(2 * i, 2 * j) += hs0(i, j);
      k(2 * i + 1, 2 * j + 1) += hs0(i, j);
      k(2 * i, 2 * j + 1) += m1 * hs0(i, j);
      k(2 * j + 1, 2 * i) += m1 * hs0(i, j);
    }
  for (int i = 0; i < 8; ++i) k(2 * i + 1, 2 * i + 1) += 2.0 * m2;

  PauliSum h(n_total);
  const PauliString id(0, 0, n_total);
  for (int a = 0; a < 16; ++a) {
    for (int b = a + 1; b < 16; ++b) {
      const double w = k(a, b);
      if (w == 0.0) continue;
      // w (|a><b| + |b><a|) on single excitations = (w/2)(XX + YY)
      h.add(w / 2, PauliString::from_sites(n_total, {{path[a], 'X'}, {path[b], 'X'}}));
      h.add(w / 2, PauliString::from_sites(n_total, {{path[a], 'Y'}, {path[b], 'Y'}}));
    }
    // d n_a = (d/2)(I - Z_a)
    h.add(k(a, a) / 2, id);
    h.add(-k(a, a) / 2, site(n_total, path[a], 'Z'));
  }
  if (vacuum_offset != 0.0) {
    // E_vac (I - sum_{S0} n) = E_vac I - (E_vac/2) sum (I - Z)
    h.add(vacuum_offset, id);
    for (int i = 0; i < 8; ++i) {
      h.add(-vacuum_offset / 2, id);
      h.add(vacuum_offset / 2, site(n_total, path[2 * i], 'Z'));
    }
  }
  h.canonicalize();

  PatchBuild out{std::move(h), {}};
  const Eigen::VectorXd psi = core_ground_state(p);
  for (int i = 0; i < 8; ++i) {
    out.cert.support.emplace_back(u64{1} << path[2 * i], n_total);
    out.cert.amplitudes.push_back(psi(i));
  }
  out.cert.initial_config = Configuration(u64{1} << path[0], n_total);
  return out;
}

Eigen::MatrixXcd warmup_interaction() {
  const cplx i1(1, 1), i2(1, -1);
  Eigen::MatrixXcd m(4, 4);
  m << 0, 0, 0, 0,
       0, 2.02, i1, i1,
       0, i2, 2.02, i1,
       0, i2, i2, 2.02;
  return m;
}

Eigen::MatrixXcd main_interaction(double j1) {
  Eigen::MatrixXcd m(4, 4);
  m << 0, 0, 0, 0,
       0, 1.01, 0, 1,
       0, 0, 0, 0,
       0, 1, 0, 1.01;
  return j1 * m;
}

Instance assemble_global(const LayoutGraph& g, const PatchEmbedding& emb,
                         const ConstructionParams& params) {
  params.validate();
  const int n = g.n_qubits();
  const bool main = params.mode == CouplingMode::Main;
  const int len = main ? 16 : 4;
  for (const auto& p : emb.paths)
    if (static_cast<int>(p.size()) != len) throw std::invalid_argument("path length does not match mode");
  const std::string why = validate_embedding(g, emb, len, emb.skips);
  if (!why.empty()) throw std::invalid_argument("invalid embedding: " + why);

  PauliSum h(n);
  std::vector<GroundStateCertificate> patch_certs;
  for (const auto& path : emb.paths) {
    PatchBuild pb = main ? build_main_patch(path, params.core, params.m1, params.m2, n,
                                            params.vacuum_offset)
                         : build_warmup_patch(path, params.core, params.m1, params.m2, n);
    h.add(pb.h);
    patch_certs.push_back(std::move(pb.cert));
  }

  std::vector<DirectedEdge> edges;
  if (params.coupling) edges = classify_edges(g, emb, params.mode);
  const Eigen::MatrixXcd hint = main ? main_interaction(params.j1) : params.j1 * warmup_interaction();
  for (const auto& e : edges) h.add(decompose_dense_block(hint, {e.control, e.target}, n));

  // Pin padding qubits that nothing else holds at |0>.
  const double pin = params.padding_pin < 0 ? params.m2 : params.padding_pin;
  std::vector<char> touched(n, 0);
  if (!main)
    for (const auto& e : edges) touched[e.control] = touched[e.target] = 1;
  if (pin > 0)
    for (int q : emb.padding)
      if (!touched[q]) {
        h.add(pin, PauliString(0, 0, n));
        h.add(-pin, site(n, q, 'Z'));
      }
  h.canonicalize();

  Instance inst;
  inst.params = params;
  inst.layout = g;
  inst.embedding = emb;
  if (params.mask) {
    inst.mask = *params.mask & low_mask(n);
  } else {
    Rng rng(params.mask_seed);
    for (int q = 0; q < n; ++q)
      if (rng.next() >> 63) inst.mask |= u64{1} << q;
  }
  inst.h = conjugate_by_x_layer(h, inst.mask);

  // Product certificate over patches.
  auto& cert = inst.cert;
  cert.energy = 0.0;
  cert.n_patch = static_cast<int>(emb.paths.size());
  cert.patch_support_size = 8;
  std::vector<std::pair<u64, double>> acc{{0, 1.0}};
  u64 init = 0;
  for (const auto& pc : patch_certs) {
    std::vector<std::pair<u64, double>> next;
    next.reserve(acc.size() * pc.support.size());
    for (const auto& [bits, amp] : acc)
      for (std::size_t i = 0; i < pc.support.size(); ++i)
        next.push_back({bits | pc.support[i].bits, amp * pc.amplitudes[i]});
    acc = std::move(next);
    init |= pc.initial_config.bits;
  }
  std::sort(acc.begin(), acc.end(), [&](const auto& a, const auto& b) {
    return (a.first ^ inst.mask) < (b.first ^ inst.mask);
  });
  for (const auto& [bits, amp] : acc) {
    cert.support.emplace_back(bits ^ inst.mask, n);
    cert.amplitudes.push_back(amp);
  }
  cert.initial_config = Configuration(init ^ inst.mask, n);
  return inst;
}

CertificateReport verify_certificate(const PauliSum& h, const GroundStateCertificate& cert,
                                     double rel_tol) {
  CertificateReport r;
  SparseVector psi = cert.as_vector();
  if (psi.n_qubits() != h.n_qubits()) return r;
  r.norm = psi.norm();
  SparseVector hpsi = apply_sum_to_vector(h, psi);
  hpsi.axpy(-cert.energy, psi);
  r.residual = hpsi.norm();
  r.tolerance = rel_tol * h.one_norm();
  r.pass = r.residual <= r.tolerance && std::abs(r.norm - 1.0) <= 1e-9;
  return r;
}

Instance generate_heavy_hex_instance(int rows, int cols, int n_patch,
                                     const ConstructionParams& params, std::uint64_t seed) {
  LayoutGraph g = build_heavy_hex(rows, cols);
  EmbedOptions opt;
  opt.seed = seed;
  PatchEmbedding emb = embed_patches(g, n_patch, params.mode == CouplingMode::Main ? 16 : 4, opt);
  ConstructionParams p = params;
  if (!p.mask) p.mask_seed = Rng::split(seed, 0x6d61736b);
  Instance inst = assemble_global(g, emb, p);
  inst.seed = seed;
  return inst;
}

Instance generate_path16_instance(const ConstructionParams& params, std::uint64_t seed) {
  LayoutGraph g = build_path(16);
  PatchEmbedding emb;
  emb.paths.push_back({});
  for (int i = 0; i < 16; ++i) emb.paths[0].push_back(i);
  ConstructionParams p = params;
  p.mode = CouplingMode::Main;
  if (!p.mask) p.mask_seed = Rng::split(seed, 0x6d61736b);
  Instance inst = assemble_global(g, emb, p);
  inst.seed = seed;
  return inst;
}

Instance generate_warmup_instance(const ConstructionParams& params, std::uint64_t seed) {
  // 0  1  2  3
  // 4  5  6  7
  // 8  9 10 11
  LayoutGraph g = build_grid(3, 4);
  PatchEmbedding emb;
  emb.paths = {{5, 4, 0, 1}, {6, 7, 3, 2}};
  emb.padding = {8, 9, 10, 11};
  ConstructionParams p = params;
  p.mode = CouplingMode::Warmup;
  if (!p.mask) p.mask_seed = Rng::split(seed, 0x6d61736b);
  Instance inst = assemble_global(g, emb, p);
  inst.seed = seed;
  return inst;
}

}  // namespace sgs
