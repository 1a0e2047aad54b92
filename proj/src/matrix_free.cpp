// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#include "sgs/matrix_free.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "sgs/sci.hpp"
#include "sgs/subspace.hpp"

namespace sgs {

// ---------------------------------------------------------- diagonal ranking

void DiagRankParams::validate() const {
  if (working_cap < 1 || reservoir_cap < working_cap)
    throw std::invalid_argument("diagonal ranking needs R >= D >= 1");
  if (iters < 0) throw std::invalid_argument("iters must be >= 0");
}

MatrixFreeResult run_diag_ranking(const PauliSum& h, const Configuration& x0,
                                  const DiagRankParams& p) {
  p.validate();
  if (x0.n_qubits != h.n_qubits()) throw WidthError("initial configuration width mismatch");
  const CompiledSum ch(h);
  MatrixFreeResult res;
  res.trace.variant = "diag_ranking";
  Stopwatch clock;

  struct Entry {
    u64 x;
    double e;
  };
  auto by_energy = [](const Entry& a, const Entry& b) {
    return a.e != b.e ? a.e < b.e : a.x < b.x;
  };
  std::vector<Entry> reservoir{{x0.bits, ch.diagonal(x0.bits).real()}};
  std::unordered_set<u64, U64Hash> in_res{x0.bits};
  std::vector<u64> working{x0.bits};

  res.trace.status = RunStatus::MaxIters;
  for (int mu = 0; mu < p.iters; ++mu) {
    // (1) neighbors of the working set, (2)-(3) merge with energies
    std::vector<u64> a = connected_configurations(ch, working);
    res.trace.flops += double(working.size()) * double(ch.n_terms);
    std::size_t added = 0;
    for (u64 y : a) {
      if (!in_res.insert(y).second) continue;
      reservoir.push_back({y, ch.diagonal(y).real()});
      ++added;
    }
    res.trace.flops += double(added) * double(ch.groups.empty() ? 0 : ch.groups[0].z.size());
    // (4)-(6) rank, take working set, trim reservoir
    std::sort(reservoir.begin(), reservoir.end(), by_energy);
    std::vector<u64> next;
    for (std::size_t i = 0; i < std::min(p.working_cap, reservoir.size()); ++i)
      next.push_back(reservoir[i].x);
    if (reservoir.size() > p.reservoir_cap) {
      for (std::size_t i = p.reservoir_cap; i < reservoir.size(); ++i) in_res.erase(reservoir[i].x);
      reservoir.resize(p.reservoir_cap);
    }
    std::sort(next.begin(), next.end());
    std::vector<u64> prev = working;
    std::sort(prev.begin(), prev.end());
    const bool fixed = next == prev && added == 0;
    working = std::move(next);

    double e = std::numeric_limits<double>::quiet_NaN();
    if (p.diagnostics) e = diagonalize_on(ch, working, 1e-10, &res.trace.flops).value;
    res.trace.rows.push_back({mu, working.size(), e, clock.ms(), added, res.trace.flops});
    if (working.size() > p.budget) {
      res.trace.status = RunStatus::BudgetExceeded;
      break;
    }
    if (fixed) {
      res.trace.status = RunStatus::Stalled;
      break;
    }
  }
  std::sort(working.begin(), working.end());
  res.eig = diagonalize_on(ch, working, 1e-10, &res.trace.flops);
  res.trace.rows.push_back({p.iters, working.size(), res.eig.value, clock.ms(), 0, res.trace.flops});
  res.basis = std::move(working);
  return res;
}

// ---------------------------------------------------------- truncated Arnoldi

void TruncArnoldiParams::validate() const {
  if (new_config_cap < 1) throw std::invalid_argument("M must be >= 1");
  if (iters < 0) throw std::invalid_argument("iters must be >= 0");
}

MatrixFreeResult run_truncated_arnoldi(const PauliSum& h, const Configuration& x0,
                                       const TruncArnoldiParams& p) {
  p.validate();
  if (x0.n_qubits != h.n_qubits()) throw WidthError("initial configuration width mismatch");
  const CompiledSum ch(h);
  MatrixFreeResult res;
  res.trace.variant = "trunc_arnoldi";
  Stopwatch clock;

  std::vector<SparseVector> v;
  v.emplace_back(h.n_qubits());
  v.back().set(x0.bits, 1.0);
  std::unordered_set<u64, U64Hash> support{x0.bits};
  res.trace.status = RunStatus::MaxIters;

  auto union_basis = [&support] {
    std::vector<u64> b(support.begin(), support.end());
    std::sort(b.begin(), b.end());
    return b;
  };

  for (int i = 0; i < p.iters; ++i) {
    SparseVector u = apply_compiled(ch, v.back());  // expand
    res.trace.flops += double(v.back().size()) * double(ch.n_terms);
    // Modified Gram-Schmidt against every stored vector, applied twice.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : v) {
        const cplx c = q.dot(u);
        res.trace.flops += double(std::min(q.size(), u.size()));
        if (c != 0.0) {
          u.axpy(-c, q);
          res.trace.flops += double(q.size());
        }
      }
    u.truncate_top(p.new_config_cap);
    const double nrm = u.norm();
    if (nrm <= 1e-12) {
      res.trace.status = RunStatus::Breakdown;
      break;
    }
    u.scale(1.0 / nrm);
    u.prune(0.0);
    std::size_t added = 0;
    for (const auto& [x, a] : u.entries()) added += support.insert(x).second;
    v.push_back(std::move(u));

    double e = std::numeric_limits<double>::quiet_NaN();
    if (p.diag_every > 0 && (i + 1) % p.diag_every == 0)
      e = diagonalize_on(ch, union_basis(), 1e-10, &res.trace.flops).value;
    res.trace.rows.push_back({i + 1, support.size(), e, clock.ms(), added, res.trace.flops});
    if (support.size() > p.budget) {
      res.trace.status = RunStatus::BudgetExceeded;
      break;
    }
    if (!std::isnan(e) && e <= p.target_energy) {
      res.trace.status = RunStatus::Converged;
      break;
    }
  }
  res.basis = union_basis();
  if (p.keep_vectors) res.krylov = v;
  res.eig = diagonalize_on(ch, res.basis, 1e-10, &res.trace.flops);
  res.trace.rows.push_back({static_cast<int>(v.size()) - 1, res.basis.size(), res.eig.value,
                            clock.ms(), 0, res.trace.flops});
  return res;
}

// ---------------------------------------------------------- truncated power method

std::size_t column_sparsity(const PauliSum& h) { return CompiledSum(h).groups.size(); }

TpmResult run_tpm(const PauliSum& h, const SparseVector& x0, const TpmParams& p) {
  if (x0.n_qubits() != h.n_qubits()) throw WidthError("initial vector width mismatch");
  if (p.k < 1) throw std::invalid_argument("k must be >= 1");
  const CompiledSum ch(h);
  TpmResult res;
  res.shift = std::isnan(p.shift) ? h.one_norm() + 1.0 : p.shift;
  if (res.shift <= h.one_norm())
    throw std::invalid_argument("shift does not make shift*I - H positive definite");
  res.trace.variant = p.mode == TpmMode::Expectation ? "tpm_expectation" : "tpm_support";
  Stopwatch clock;

  SparseVector phi = x0;
  phi.prune(0.0);
  const double n0 = phi.norm();
  if (n0 == 0.0) throw std::invalid_argument("initial vector is zero");
  phi.scale(1.0 / n0);

  auto expectation = [&](const SparseVector& f, SparseVector* hf) {
    SparseVector t = apply_compiled(ch, f);
    res.trace.flops += double(f.size()) * double(ch.n_terms);
    const double e = f.dot(t).real();
    if (hf) *hf = std::move(t);
    return e;
  };
  auto support_energy = [&](const SparseVector& f) {
    std::vector<u64> b;
    for (const auto& [x, a] : f.entries()) b.push_back(x);
    std::sort(b.begin(), b.end());
    return diagonalize_on(ch, b, 1e-10, &res.trace.flops).value;
  };

  SparseVector hphi(h.n_qubits());
  double e_exp = expectation(phi, &hphi);
  for (int t = 1; t <= p.iters; ++t) {
    // theta = A phi = shift*phi - H phi
    SparseVector theta = phi;
    theta.scale(res.shift);
    theta.axpy(-1.0, hphi);
    theta.prune(0.0);
    theta.truncate_top(p.k);
    const double nrm = theta.norm();
    if (nrm == 0.0) break;
    theta.scale(1.0 / nrm);
    phi = std::move(theta);
    e_exp = expectation(phi, &hphi);
    const bool want_support = p.track_both || p.mode == TpmMode::DiagonalizeSupport;
    const double e_sup = want_support ? support_energy(phi) : std::numeric_limits<double>::quiet_NaN();
    res.expectation.push_back(e_exp);
    res.support.push_back(e_sup);
    const double e_rep = p.mode == TpmMode::Expectation ? e_exp : e_sup;
    res.trace.rows.push_back({t, phi.size(), e_rep, clock.ms(), 0, res.trace.flops});
  }
  res.energy = p.mode == TpmMode::Expectation ? e_exp : support_energy(phi);
  for (const auto& [x, a] : phi.entries()) res.final_support.push_back(x);
  std::sort(res.final_support.begin(), res.final_support.end());
  res.phi = std::move(phi);
  res.trace.status = RunStatus::MaxIters;
  return res;
}

TpmTheoryConstants tpm_theory(double gamma, double delta, double chi, double chi_a,
                              double epsilon, double lambda1, double k, std::size_t xi_steps) {
  if (!(gamma > 0 && gamma <= 1)) throw std::invalid_argument("gamma must lie in (0, 1]");
  if (!(delta > 0 && delta <= 1)) throw std::invalid_argument("delta must lie in (0, 1]");
  if (!(chi >= 1)) throw std::invalid_argument("chi must be >= 1");
  if (!(epsilon > 0) || !(lambda1 > 0)) throw std::invalid_argument("epsilon, lambda1 must be > 0");
  TpmTheoryConstants c;
  c.gamma = gamma;
  c.delta = delta;
  c.chi = chi;
  c.chi_a = chi_a;
  c.epsilon = epsilon;
  c.lambda1 = lambda1;
  c.k_star = chi / (gamma * gamma) * std::max(64.0 / delta, 9.0 * lambda1 / epsilon);
  c.l_star = std::log(c.k_star * gamma * gamma / (delta * chi)) / gamma;
  c.k = k > 0 ? k : c.k_star;
  c.rho = std::sqrt(chi / c.k);
  c.eta = gamma / (8.0 * c.rho);
  c.xi_fixed_bound = 2.0 * c.rho / gamma;
  // Smaller root of rho(1-g) x^2 - g x + rho = 0.
  const double qa = c.rho * (1.0 - gamma), disc = gamma * gamma - 4.0 * c.rho * qa;
  c.xi_fixed = qa == 0.0 ? c.rho / gamma
                         : (disc >= 0 ? 2.0 * c.rho / (gamma + std::sqrt(disc))
                                      : std::numeric_limits<double>::quiet_NaN());
  if (xi_steps > 0) {
    c.xi.reserve(xi_steps + 1);
    double x = std::sqrt(1.0 - delta) / std::sqrt(delta);
    c.xi.push_back(x);
    for (std::size_t t = 0; t < xi_steps; ++t) {
      x = ((1.0 - gamma) * x + c.rho) / (1.0 - c.rho * (1.0 - gamma) * x);
      c.xi.push_back(x);
    }
  }
  return c;
}

}  // namespace sgs
