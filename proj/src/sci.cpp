// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#include "sgs/sci.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "sgs/rng.hpp"
#include "sgs/subspace.hpp"

namespace sgs {

std::string to_string(SciVariant v) {
  switch (v) {
    case SciVariant::CIPSI: return "cipsi";
    case SciVariant::HCI: return "hci";
    case SciVariant::ASCI: return "asci";
    case SciVariant::TrimCI: return "trimci";
  }
  return "?";
}

void SciParams::validate() const {
  if (!(epsilon >= 0)) throw std::invalid_argument("epsilon must be >= 0");
  if (d_cap == 0 || core_cap == 0) throw std::invalid_argument("caps must be >= 1");
  if (variant == SciVariant::ASCI && d_cap != kUnbounded && core_cap != kUnbounded &&
      core_cap >= d_cap)
    throw std::invalid_argument("ASCI needs C < D");
  if (variant == SciVariant::TrimCI && (trim.n_s == 0 || trim.n_k == 0))
    throw std::invalid_argument("TrimCI needs N_S, N_K >= 1");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
}

EigResult diagonalize_on(const CompiledSum& h, const std::vector<u64>& basis, double tol,
                         double* flops) {
  ConfigurationBasis b(h.n_qubits, basis, AddressMode::Hashed);
  ProjectedMatrix m = project_fast(h, b);
  EigResult r = diagonalize_projected(m, tol);
  if (flops) {
    *flops += double(basis.size()) * double(h.n_terms);
    const double d = double(m.dim);
    *flops += m.dim <= 256 ? d * d * d : double(r.iterations) * double(m.nnz());
  }
  return r;
}

CandidateScores score_candidates(const CompiledSum& h, const std::vector<u64>& core,
                                 const AmpMap& psi) {
  std::unordered_set<u64, U64Hash> in(core.begin(), core.end());
  struct Acc {
    cplx num = 0.0;
    double hmax = 0.0;
  };
  std::unordered_map<u64, Acc, U64Hash> acc;
  for (u64 x : core) {
    auto it = psi.find(x);
    const cplx c = it == psi.end() ? cplx(0.0) : it->second;
    for (const auto& g : h.groups) {
      if (g.x_mask == 0) continue;
      const u64 y = x ^ g.x_mask;
      if (in.count(y)) continue;
      const cplx a = g.amplitude(x);
      if (std::abs(a) < kCoeffFloor) continue;
      Acc& e = acc[y];
      e.num += a * c;
      e.hmax = std::max(e.hmax, std::abs(a * c));
    }
  }
  CandidateScores out;
  out.configs.reserve(acc.size());
  for (const auto& [y, e] : acc) out.configs.push_back(y);
  std::sort(out.configs.begin(), out.configs.end());
  for (u64 y : out.configs) {
    const Acc& e = acc[y];
    out.numerator.push_back(e.num);
    out.hci_max.push_back(e.hmax);
    out.diagonal.push_back(h.diagonal(y).real());
  }
  return out;
}

double perturbative_magnitude(cplx numerator, double e_x, double e0) {
  // A numerator below the matrix-element floor is an exact zero up to rounding.
  if (std::abs(numerator) < kCoeffFloor) return 0.0;
  const double den = e_x - e0;
  if (std::abs(den) < 1e-12) return std::numeric_limits<double>::infinity();
  return std::abs(numerator) / std::abs(den);
}

namespace {

std::vector<u64> merged(const std::vector<u64>& core, std::vector<u64> extra) {
  extra.insert(extra.end(), core.begin(), core.end());
  std::sort(extra.begin(), extra.end());
  extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
  return extra;
}

/// Sort by magnitude descending, bit value ascending on ties.
void rank(std::vector<std::pair<u64, double>>& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
}

}  // namespace

std::vector<u64> select_cipsi(const std::vector<u64>& core, const CandidateScores& cand,
                              double e0, double eps) {
  std::vector<u64> keep;
  for (std::size_t i = 0; i < cand.configs.size(); ++i)
    if (eps == 0.0 || perturbative_magnitude(cand.numerator[i], cand.diagonal[i], e0) > eps)
      keep.push_back(cand.configs[i]);
  return merged(core, std::move(keep));
}

std::vector<u64> select_hci(const std::vector<u64>& core, const CandidateScores& cand,
                            double eps) {
  std::vector<u64> keep;
  for (std::size_t i = 0; i < cand.configs.size(); ++i)
    if (cand.hci_max[i] > eps || eps == 0.0) keep.push_back(cand.configs[i]);
  return merged(core, std::move(keep));
}

std::vector<u64> select_asci(const std::vector<u64>& core, const AmpMap& psi,
                             const CandidateScores& cand, double e0, std::size_t d) {
  std::vector<std::pair<u64, double>> pool;
  pool.reserve(core.size() + cand.configs.size());
  for (u64 x : core) {
    auto it = psi.find(x);
    pool.push_back({x, it == psi.end() ? 0.0 : std::abs(it->second)});
  }
  for (std::size_t i = 0; i < cand.configs.size(); ++i)
    pool.push_back({cand.configs[i],
                    perturbative_magnitude(cand.numerator[i], cand.diagonal[i], e0)});
  rank(pool);
  if (pool.size() > d) pool.resize(d);
  std::vector<u64> out;
  out.reserve(pool.size());
  for (const auto& p : pool) out.push_back(p.first);
  std::sort(out.begin(), out.end());
  return out;
}

TrimOutcome select_trimci(const CompiledSum& h, const std::vector<u64>& core,
                          const CandidateScores& cand, double e0, double eps,
                          const TrimParams& tp, std::uint64_t stream) {
  TrimOutcome out;
  std::vector<double> score(cand.configs.size());
  for (std::size_t i = 0; i < score.size(); ++i)
    score[i] = tp.filter == TrimFilter::Cipsi
                   ? perturbative_magnitude(cand.numerator[i], cand.diagonal[i], e0)
                   : cand.hci_max[i];
  auto count_above = [&score](double e) {
    return static_cast<std::size_t>(std::count_if(score.begin(), score.end(),
                                                  [e](double s) { return s > e; }));
  };

  double e_used = eps;
  if (tp.expansion > 1.0 && !score.empty()) {
    // Bisection in log(eps) so that |C| + |A~| ~ F |C|.
    const double target = (tp.expansion - 1.0) * double(core.size());
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double s : score)
      if (std::isfinite(s) && s > 0) {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
    if (std::isfinite(lo)) {
      double a = std::log(lo) - 1.0, b = std::log(hi) + 1.0;
      e_used = std::exp(0.5 * (a + b));
      for (int step = 0; step < 40; ++step) {
        const double mid = 0.5 * (a + b);
        e_used = std::exp(mid);
        const double c = double(count_above(e_used));
        if (std::abs(c - target) <= 0.05 * std::max(target, 1.0)) break;
        if (c > target)
          a = mid;
        else
          b = mid;
      }
    }
  }
  out.epsilon_used = e_used;

  std::vector<u64> pool(core.begin(), core.end());
  for (std::size_t i = 0; i < score.size(); ++i)
    if (score[i] > e_used || (e_used == 0.0)) pool.push_back(cand.configs[i]);
  out.filtered = pool.size() - core.size();
  std::sort(pool.begin(), pool.end());

  // Random partition into N_S near-equal subsets.
  Rng rng(Rng::split(tp.seed, stream));
  rng.shuffle(pool);
  const std::size_t ns = std::min(tp.n_s, std::max<std::size_t>(pool.size(), 1));
  std::vector<std::vector<u64>> subsets(ns);
  for (std::size_t i = 0; i < pool.size(); ++i) subsets[i % ns].push_back(pool[i]);

  for (auto& s : subsets) {
    if (s.empty()) continue;
    std::sort(s.begin(), s.end());
    if (s.size() <= tp.n_k) {
      out.short_subset = out.short_subset || s.size() < tp.n_k;
      out.kept.insert(out.kept.end(), s.begin(), s.end());
      continue;
    }
    EigResult r = diagonalize_on(h, s, 1e-10);
    std::vector<std::pair<u64, double>> amps;
    for (std::size_t i = 0; i < s.size(); ++i) amps.push_back({s[i], std::abs(r.vector(Eigen::Index(i)))});
    rank(amps);
    for (std::size_t i = 0; i < tp.n_k; ++i) out.kept.push_back(amps[i].first);
  }
  std::sort(out.kept.begin(), out.kept.end());
  return out;
}

SciResult run_sci(const PauliSum& h, const Configuration& x0, const SciParams& p,
                  const std::vector<u64>* initial) {
  p.validate();
  if (x0.n_qubits != h.n_qubits()) throw WidthError("initial configuration width mismatch");
  const CompiledSum ch(h);
  SciResult res;
  res.trace.variant = to_string(p.variant);
  std::vector<u64> b = initial ? *initial : std::vector<u64>{x0.bits};
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());

  Stopwatch clock;
  bool have_eig = false;
  for (int mu = 0; mu < p.max_iters; ++mu) {
    // (1) diagonalize
    res.eig = diagonalize_on(ch, b, p.eig_tol, &res.trace.flops);
    have_eig = true;
    const double e0 = res.eig.value;
    // (2)-(4) rank, trim to the core, zero the rest
    std::vector<std::pair<u64, double>> mags;
    for (std::size_t i = 0; i < b.size(); ++i) mags.push_back({b[i], std::abs(res.eig.vector(Eigen::Index(i)))});
    rank(mags);
    const std::size_t c_eff = std::min(p.core_cap, b.size());
    std::vector<u64> core;
    AmpMap psi;
    for (std::size_t i = 0; i < c_eff; ++i) core.push_back(mags[i].first);
    {
      std::unordered_map<u64, std::size_t, U64Hash> pos;
      for (std::size_t i = 0; i < b.size(); ++i) pos[b[i]] = i;
      for (u64 x : core) psi[x] = res.eig.vector(Eigen::Index(pos[x]));
    }
    std::sort(core.begin(), core.end());
    // (5) expansion
    CandidateScores cand = score_candidates(ch, core, psi);
    res.trace.flops += double(core.size()) * double(ch.n_terms);
    // (6) selection
    std::vector<u64> next;
    std::size_t new_count = 0;
    switch (p.variant) {
      case SciVariant::CIPSI: next = select_cipsi(core, cand, e0, p.epsilon); break;
      case SciVariant::HCI: next = select_hci(core, cand, p.epsilon); break;
      case SciVariant::ASCI:
        next = select_asci(core, psi, cand, e0, p.d_cap);
        break;
      case SciVariant::TrimCI: {
        TrimOutcome t = select_trimci(ch, core, cand, e0, p.epsilon, p.trim, std::uint64_t(mu));
        next = std::move(t.kept);
        break;
      }
    }
    {
      std::unordered_set<u64, U64Hash> old(b.begin(), b.end());
      for (u64 x : next) new_count += !old.count(x);
    }
    res.trace.rows.push_back({mu, b.size(), e0, clock.ms(), new_count, res.trace.flops});
    if (next == b) {
      res.trace.status = RunStatus::Stalled;
      res.basis = b;
      return res;
    }
    if (next.size() > p.budget) {
      res.trace.status = RunStatus::BudgetExceeded;
      res.basis = b;
      return res;
    }
    b = std::move(next);
    have_eig = false;
  }
  if (!have_eig) {
    res.eig = diagonalize_on(ch, b, p.eig_tol, &res.trace.flops);
    res.trace.rows.push_back({p.max_iters, b.size(), res.eig.value, clock.ms(), 0, res.trace.flops});
  }
  res.trace.status = RunStatus::MaxIters;
  res.basis = b;
  return res;
}

}  // namespace sgs
