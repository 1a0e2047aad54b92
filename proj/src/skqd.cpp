// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#include "sgs/skqd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <json.hpp>

#include "sgs/rng.hpp"
#include "sgs/sci.hpp"
#include "sgs/subspace.hpp"

namespace sgs {

namespace {

void check_statevector(int n, Eigen::Index size) {
  if (n > kMaxStatevectorQubits)
    throw std::length_error("statevector budget exceeded: n > " +
                            std::to_string(kMaxStatevectorQubits));
  if (size != Eigen::Index(1) << n) throw WidthError("statevector length does not match 2^n");
}

// exp(-i a P theta) v in place, P Hermitian with real a.
void apply_pauli_rotation(const PauliString& p, double angle, Eigen::VectorXcd& v) {
  const cplx c = std::cos(angle), s = cplx(0.0, -std::sin(angle));
  const cplx base = i_power(p.num_y());
  const u64 dim = u64(v.size());
  if (p.x_mask == 0) {
    for (u64 x = 0; x < dim; ++x) v[Eigen::Index(x)] *= c + s * z_sign(p.z_mask, x);
    return;
  }
  // Pair x with y = x ^ x_mask; visit each pair once via the lower index.
  for (u64 x = 0; x < dim; ++x) {
    const u64 y = x ^ p.x_mask;
    if (y < x) continue;
    const cplx px = base * z_sign(p.z_mask, x);  // <y|P|x>
    const cplx py = base * z_sign(p.z_mask, y);  // <x|P|y>
    const cplx vx = v[Eigen::Index(x)], vy = v[Eigen::Index(y)];
    v[Eigen::Index(x)] = c * vx + s * py * vy;
    v[Eigen::Index(y)] = c * vy + s * px * vx;
  }
}

void trotter1(const PauliSum& h, double dt, bool reversed, Eigen::VectorXcd& v) {
  const auto& t = h.terms();
  if (!reversed) {
    for (const auto& term : t) apply_pauli_rotation(term.str, term.coeff.real() * dt, v);
  } else {
    for (auto it = t.rbegin(); it != t.rend(); ++it)
      apply_pauli_rotation(it->str, it->coeff.real() * dt, v);
  }
}

}  // namespace

double default_dt(const PauliSum& h, double multiplier) {
  if (h.empty()) throw std::invalid_argument("empty Hamiltonian");
  if (!(multiplier > 0)) throw std::invalid_argument("dt multiplier must be > 0");
  return multiplier * std::numbers::pi / h.one_norm();
}

void apply_statevector(const CompiledSum& h, const Eigen::VectorXcd& v, Eigen::VectorXcd& out) {
  check_statevector(h.n_qubits, v.size());
  out.setZero(v.size());
  const u64 dim = u64(v.size());
  for (const auto& g : h.groups)
    for (u64 x = 0; x < dim; ++x) {
      const cplx a = v[Eigen::Index(x)];
      if (a == 0.0) continue;
      out[Eigen::Index(x ^ g.x_mask)] += g.amplitude(x) * a;
    }
}

Eigen::VectorXcd evolve_exact(const PauliSum& h, const Eigen::VectorXcd& v, double t, double tol) {
  check_statevector(h.n_qubits(), v.size());
  if (t == 0.0 || h.empty()) return v;
  if (!h.is_hermitian()) throw std::invalid_argument("evolution needs a Hermitian PauliSum");
  // Spectrum lies in [c - r, c + r] with c the identity coefficient.
  const double c = h.identity_coeff().real();
  const double r = h.one_norm() - std::abs(c);
  const cplx global = std::exp(cplx(0.0, -c * t));
  if (r == 0.0) return global * v;

  PauliSum shifted(h.n_qubits());
  for (const auto& term : h.terms())
    if (term.str.x_mask != 0 || term.str.z_mask != 0) shifted.add(term.coeff / r, term.str);
  shifted.canonicalize();
  const CompiledSum hs(shifted);

  // e^{-i r t Ht} = J_0(rt) + 2 sum_k (-i)^k J_k(rt) T_k(Ht)
  const double x = r * t;
  const double ax = std::abs(x);
  const double sgn = x < 0 ? -1.0 : 1.0;  // J_k(-x) = (-1)^k J_k(x)
  Eigen::VectorXcd w_prev = v, w_cur(v.size()), w_next(v.size());
  apply_statevector(hs, w_prev, w_cur);
  Eigen::VectorXcd out = std::cyl_bessel_j(0.0, ax) * w_prev;
  cplx mi = cplx(0.0, -1.0) * sgn;
  out += 2.0 * mi * std::cyl_bessel_j(1.0, ax) * w_cur;
  int small = 0;
  for (int k = 2;; ++k) {
    apply_statevector(hs, w_cur, w_next);
    w_next = 2.0 * w_next - w_prev;
    mi *= cplx(0.0, -1.0) * sgn;
    const double jk = std::cyl_bessel_j(double(k), ax);
    out += 2.0 * mi * jk * w_next;
    std::swap(w_prev, w_cur);
    std::swap(w_cur, w_next);
    if (k > ax && std::abs(jk) < tol * 1e-2) {
      if (++small >= 3) break;
    } else {
      small = 0;
    }
    if (k > 100000) throw std::runtime_error("Chebyshev expansion did not converge");
  }
  return global * out;
}

Eigen::VectorXcd evolve_trotter(const PauliSum& h, const Eigen::VectorXcd& v, double dt, int order,
                                int steps) {
  check_statevector(h.n_qubits(), v.size());
  if (order != 1 && order != 2) throw std::invalid_argument("Trotter order must be 1 or 2");
  if (steps < 1) throw std::invalid_argument("Trotter steps must be >= 1");
  if (!h.is_hermitian()) throw std::invalid_argument("evolution needs a Hermitian PauliSum");
  Eigen::VectorXcd out = v;
  for (int s = 0; s < steps; ++s) {
    if (order == 1) {
      trotter1(h, dt, false, out);
    } else {
      // [T1(-dt/2)]^dagger applies the rotations in reverse with +dt/2 angles.
      trotter1(h, dt / 2, true, out);
      trotter1(h, dt / 2, false, out);
    }
  }
  return out;
}

std::string to_string(Evolution e) {
  switch (e) {
    case Evolution::Exact: return "exact";
    case Evolution::Trotter1: return "trotter1";
    case Evolution::Trotter2: return "trotter2";
  }
  return "?";
}

std::size_t SkqdParams::shots_for(int k) const {
  if (!shot_schedule.empty()) return shot_schedule.at(std::size_t(k));
  return shots;
}

void SkqdParams::validate() const {
  if (krylov_dim < 1) throw std::invalid_argument("krylov_dim must be >= 1");
  if (shot_schedule.empty() && shots < 1) throw std::invalid_argument("shots must be >= 1");
  if (!shot_schedule.empty()) {
    if (shot_schedule.size() < std::size_t(krylov_dim))
      throw std::invalid_argument("shot schedule shorter than krylov_dim");
    for (auto s : shot_schedule)
      if (s < 1) throw std::invalid_argument("every scheduled shot count must be >= 1");
  }
  if (dt < 0) throw std::invalid_argument("dt must be > 0");
  if (trotter_steps_per_dt < 1) throw std::invalid_argument("trotter steps must be >= 1");
  if (bitflip_prob < 0 || bitflip_prob > 1) throw std::invalid_argument("bitflip_prob must lie in [0,1]");
}

std::map<u64, std::uint64_t> sample_statevector(const Eigen::VectorXcd& v, std::size_t shots,
                                                std::uint64_t seed, int n_qubits,
                                                double bitflip_prob) {
  std::vector<double> cdf(std::size_t(v.size()));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    acc += std::norm(v[i]);
    cdf[std::size_t(i)] = acc;
  }
  std::map<u64, std::uint64_t> hist;
  if (acc <= 0.0) return hist;
  Rng rng(seed);
  Rng noise(Rng::split(seed, 0x6e6f697365));
  for (std::size_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    u64 x = u64(std::min<std::ptrdiff_t>(it - cdf.begin(), std::ptrdiff_t(cdf.size()) - 1));
    if (bitflip_prob > 0)
      for (int q = 0; q < n_qubits; ++q)
        if (noise.uniform() < bitflip_prob) x ^= u64{1} << q;
    ++hist[x];
  }
  return hist;
}

std::string ShotRecord::to_json() const {
  nlohmann::json j;
  j["n_qubits"] = n_qubits;
  j["seed"] = seed;
  j["states"] = nlohmann::json::array();
  for (std::size_t k = 0; k < histograms.size(); ++k) {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [x, c] : histograms[k]) counts[Configuration(x, n_qubits).to_hex()] = c;
    j["states"].push_back({{"k", k}, {"seed", Rng::split(seed, k)}, {"counts", counts}});
  }
  return j.dump(1);
}

ShotRecord ShotRecord::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ShotRecord r;
  r.n_qubits = j.at("n_qubits").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& st : j.at("states")) {
    std::map<u64, std::uint64_t> h;
    for (auto it = st.at("counts").begin(); it != st.at("counts").end(); ++it)
      h[Configuration::from_hex(it.key(), r.n_qubits).bits] = it.value().get<std::uint64_t>();
    r.histograms.push_back(std::move(h));
  }
  return r;
}

SkqdResult run_skqd(const PauliSum& h, const Configuration& x0, const SkqdParams& p) {
  p.validate();
  const int n = h.n_qubits();
  if (x0.n_qubits != n) throw WidthError("initial configuration width mismatch");
  if (n > kMaxStatevectorQubits)
    throw std::length_error("statevector budget exceeded: n > " +
                            std::to_string(kMaxStatevectorQubits));
  const CompiledSum ch(h);
  const double dt = p.dt > 0 ? p.dt : default_dt(h);

  SkqdResult res;
  res.trace.variant = "skqd_" + to_string(p.evolution);
  res.shots.n_qubits = n;
  res.shots.seed = p.seed;
  Stopwatch clock;

  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(Eigen::Index(1) << n);
  phi[Eigen::Index(x0.bits)] = 1.0;
  std::set<u64> pool{x0.bits};
  res.trace.status = RunStatus::MaxIters;

  for (int k = 0; k < p.krylov_dim; ++k) {
    if (k > 0) {
      switch (p.evolution) {
        case Evolution::Exact: phi = evolve_exact(h, phi, dt); break;
        case Evolution::Trotter1:
          phi = evolve_trotter(h, phi, dt / p.trotter_steps_per_dt, 1, p.trotter_steps_per_dt);
          break;
        case Evolution::Trotter2:
          phi = evolve_trotter(h, phi, dt / p.trotter_steps_per_dt, 2, p.trotter_steps_per_dt);
          break;
      }
    }
    auto hist = sample_statevector(phi, p.shots_for(k), Rng::split(p.seed, std::uint64_t(k)), n,
                                   p.bitflip_prob);
    std::size_t added = 0;
    for (const auto& [x, c] : hist) added += pool.insert(x).second;
    res.shots.histograms.push_back(std::move(hist));

    std::vector<u64> raw(pool.begin(), pool.end());
    std::vector<u64> b = p.filter ? connectivity_filter(ch, raw) : raw;
    std::sort(b.begin(), b.end());
    if (b.size() > p.budget) {
      res.trace.status = RunStatus::BudgetExceeded;
      res.trace.rows.push_back({k + 1, b.size(), std::numeric_limits<double>::quiet_NaN(),
                                clock.ms(), added, res.trace.flops});
      break;
    }
    if (b.empty()) {
      res.warning = "connectivity filter removed every configuration; reporting <x0|H|x0>";
      res.eig = EigResult{};
      res.eig.value = ch.diagonal(x0.bits).real();
      res.eig.vector = Eigen::VectorXcd::Ones(1);
      res.eig.converged = true;
      res.basis = {x0.bits};
    } else {
      res.warning.clear();
      res.eig = diagonalize_on(ch, b, 1e-10, &res.trace.flops);
      res.basis = b;
    }
    res.trace.rows.push_back({k + 1, b.size(), res.eig.value, clock.ms(), added, res.trace.flops});
  }
  return res;
}

std::vector<std::size_t> support_coverage(const ShotRecord& shots,
                                          const GroundStateCertificate& cert) {
  for (const auto& c : cert.support)
    if (c.n_qubits != shots.n_qubits) throw WidthError("certificate width mismatch");
  std::set<u64> support;
  for (const auto& c : cert.support) support.insert(c.bits);
  std::set<u64> seen;
  std::vector<std::size_t> curve;
  for (const auto& h : shots.histograms) {
    for (const auto& [x, c] : h)
      if (c > 0 && support.count(x)) seen.insert(x);
    curve.push_back(seen.size());
  }
  return curve;
}

}  // namespace sgs
