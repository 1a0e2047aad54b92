// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "oracle.hpp"
#include "sgs/hamiltonian.hpp"
#include "sgs/rng.hpp"
#include "sgs/sci.hpp"

using namespace sgs;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Real symmetric 2^n matrix with a random sparsity pattern, as a PauliSum.
std::pair<PauliSum, Eigen::MatrixXd> sparse_toy(int n, double density, std::mt19937_64& rng) {
  const int d = 1 << n;
  std::uniform_real_distribution<double> u(-1, 1), p(0, 1);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    m(i, i) = 2 * u(rng);
    for (int j = i + 1; j < d; ++j)
      if (p(rng) < density) m(i, j) = m(j, i) = u(rng);
  }
  std::vector<int> q(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) q[std::size_t(i)] = i;
  return {decompose_dense_block(m.cast<cplx>(), q, n, n), m};
}

// Ground amplitudes of m restricted to `core` via the dense oracle.
AmpMap core_state(const Eigen::MatrixXd& m, const std::vector<u64>& core, double* e0) {
  Eigen::MatrixXd r(Eigen::Index(core.size()), Eigen::Index(core.size()));
  for (std::size_t i = 0; i < core.size(); ++i)
    for (std::size_t j = 0; j < core.size(); ++j)
      r(Eigen::Index(i), Eigen::Index(j)) = m(Eigen::Index(core[i]), Eigen::Index(core[j]));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
  *e0 = es.eigenvalues()[0];
  AmpMap psi;
  for (std::size_t i = 0; i < core.size(); ++i) psi[core[i]] = es.eigenvectors()(Eigen::Index(i), 0);
  return psi;
}

std::vector<u64> sorted_union(std::vector<u64> a, const std::vector<u64>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int k = 0; k < n; ++k) g.push_back(std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * k / (n - 1)));
  return g;
}

}  // namespace

TEST(Perturbative, Guards) {
  EXPECT_EQ(perturbative_magnitude(0.3, 1.0, 1.0 - 1e-13), kInf);
  EXPECT_EQ(perturbative_magnitude(0.0, 2.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(perturbative_magnitude(cplx(0, -0.5), 0.0, 2.0), 0.25);
}

TEST(SelectCipsi, MatchesHandFirstOrderOnThreeQubits) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    auto [h, m] = sparse_toy(3, 0.5, rng);
    const std::vector<u64> core{0, 3};
    double e0 = 0;
    AmpMap psi = core_state(m, core, &e0);
    auto cand = score_candidates(CompiledSum(h), core, psi);
    for (double eps : {0.0, 1e-3, 0.05, 0.2, 1.0}) {
      std::vector<u64> want = core;
      for (u64 x = 0; x < 8; ++x) {
        if (x == 0 || x == 3) continue;
        const double num = m(Eigen::Index(x), 0) * psi[0].real() + m(Eigen::Index(x), 3) * psi[3].real();
        const bool connected = m(Eigen::Index(x), 0) != 0 || m(Eigen::Index(x), 3) != 0;
        if (!connected) continue;
        const double den = m(Eigen::Index(x), Eigen::Index(x)) - e0;
        double mag = std::abs(num) < 1e-14 ? 0.0 : (std::abs(den) < 1e-12 ? kInf : std::abs(num / den));
        if (eps == 0.0 || mag > eps) want.push_back(x);
      }
      std::sort(want.begin(), want.end());
      EXPECT_EQ(select_cipsi(core, cand, e0, eps), want) << "t=" << t << " eps=" << eps;
    }
  }
}

TEST(SelectCipsi, ZeroNumeratorRejectedForAnyPositiveEpsilon) {
  // On the bare core block the leading-3 ground state has an exactly zero
  // numerator toward configuration 3.
  const CoreBlockParams p;
  const Eigen::MatrixXd m = oracle::core_block(p.a, p.b, p.c);
  PauliSum h = decompose_dense_block(m.cast<cplx>(), {0, 1, 2}, 3);
  const std::vector<u64> core{0, 1, 2};
  double e0 = 0;
  AmpMap psi = core_state(m, core, &e0);
  auto cand = score_candidates(CompiledSum(h), core, psi);
  ASSERT_EQ(cand.configs, std::vector<u64>{3});
  for (double eps : {1e-300, 1e-17, 1e-10, 1.0})
    EXPECT_EQ(select_cipsi(core, cand, e0, eps), core);
  // Zero threshold is the full connected expansion.
  EXPECT_EQ(select_cipsi(core, cand, e0, 0.0), (std::vector<u64>{0, 1, 2, 3}));
}

TEST(SelectHci, MatchesBruteForce) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 20; ++t) {
    auto [h, m] = sparse_toy(3, 0.6, rng);
    const std::vector<u64> core{1, 2, 6};
    double e0 = 0;
    AmpMap psi = core_state(m, core, &e0);
    auto cand = score_candidates(CompiledSum(h), core, psi);
    for (double eps : {1e-3, 0.05, 0.3}) {
      std::vector<u64> want = core;
      for (u64 x = 0; x < 8; ++x) {
        if (std::find(core.begin(), core.end(), x) != core.end()) continue;
        double best = 0;
        for (u64 c : core) best = std::max(best, std::abs(m(Eigen::Index(x), Eigen::Index(c)) * psi[c].real()));
        if (best > eps) want.push_back(x);
      }
      std::sort(want.begin(), want.end());
      EXPECT_EQ(select_hci(core, cand, eps), want);
    }
  }
}

TEST(SelectHci, ZeroAmplitudeCoreEntryContributesNothing) {
  auto h = PauliSum::from_text("1 0 XI\n1 0 IX\n");
  AmpMap psi{{0, 1.0}, {1, 0.0}};
  auto cand = score_candidates(CompiledSum(h), {0, 1}, psi);
  // Candidate 3 is reached only from configuration 1 (amplitude 0).
  EXPECT_EQ(select_hci({0, 1}, cand, 1e-12), (std::vector<u64>{0, 1, 2}));
}

TEST(SelectAsci, RankingRules) {
  auto h = PauliSum::from_text("0.5 0 XI\n1 0 ZZ\n");
  AmpMap psi{{0, 0.9}};
  auto cand = score_candidates(CompiledSum(h), {0}, psi);
  ASSERT_EQ(cand.configs, std::vector<u64>{1});
  // Candidate estimate |0.45 / (E_1 - e0)| with E_1 = -1, e0 = 0.8 gives 0.25.
  EXPECT_EQ(select_asci({0}, psi, cand, 0.8, 1), std::vector<u64>{0});
  EXPECT_EQ(select_asci({0}, psi, cand, 0.8, 10), (std::vector<u64>{0, 1}));
}

TEST(SelectAsci, FourQubitBruteForceRanking) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 20; ++t) {
    auto [h, m] = sparse_toy(4, 0.3, rng);
    const std::vector<u64> core{0, 5, 9};
    double e0 = 0;
    AmpMap psi = core_state(m, core, &e0);
    auto cand = score_candidates(CompiledSum(h), core, psi);
    std::vector<std::pair<double, u64>> all;
    for (u64 c : core) all.push_back({-std::abs(psi[c].real()), c});
    for (u64 x = 0; x < 16; ++x) {
      if (std::find(core.begin(), core.end(), x) != core.end()) continue;
      double num = 0;
      bool conn = false;
      for (u64 c : core) {
        num += m(Eigen::Index(x), Eigen::Index(c)) * psi[c].real();
        conn |= m(Eigen::Index(x), Eigen::Index(c)) != 0;
      }
      if (!conn) continue;
      const double den = m(Eigen::Index(x), Eigen::Index(x)) - e0;
      all.push_back({std::abs(num) < 1e-14 ? -0.0 : -(std::abs(den) < 1e-12 ? kInf : std::abs(num / den)), x});
    }
    std::sort(all.begin(), all.end());
    for (std::size_t d : {1u, 3u, 5u}) {
      std::vector<u64> want;
      for (std::size_t i = 0; i < std::min(d, all.size()); ++i) want.push_back(all[i].second);
      std::sort(want.begin(), want.end());
      EXPECT_EQ(select_asci(core, psi, cand, e0, d), want);
    }
  }
}

TEST(SelectTrimci, SingleSubsetKeepsEverything) {
  std::mt19937_64 rng(24);
  auto [h, m] = sparse_toy(4, 0.4, rng);
  const std::vector<u64> core{0, 1};
  double e0 = 0;
  AmpMap psi = core_state(m, core, &e0);
  CompiledSum c(h);
  auto cand = score_candidates(c, core, psi);
  TrimParams tp;
  tp.n_s = 1;
  tp.n_k = 16;
  auto out = select_trimci(c, core, cand, e0, 0.0, tp, 0);
  EXPECT_EQ(out.kept, sorted_union(core, cand.configs));
}

TEST(SelectTrimci, MatchesIndependentReimplementation) {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 10; ++t) {
    // Dense enough that every subset block is connected, so no amplitude ties.
    auto [h, m] = sparse_toy(6, 0.7, rng);
    const std::vector<u64> core{0, 7, 19, 40};
    double e0 = 0;
    AmpMap psi = core_state(m, core, &e0);
    CompiledSum c(h);
    auto cand = score_candidates(c, core, psi);
    TrimParams tp;
    tp.n_s = 3;
    tp.n_k = 4;
    tp.seed = 77 + std::uint64_t(t);
    const double eps = 0.15;
    auto got = select_trimci(c, core, cand, e0, eps, tp, 5);

    // Step by step: CIPSI-form filter, seeded shuffle, round-robin split,
    // dense diagonalization per subset, top N_K by magnitude.
    std::vector<u64> pool = core;
    for (u64 x = 0; x < 64; ++x) {
      if (std::find(core.begin(), core.end(), x) != core.end()) continue;
      double num = 0;
      bool conn = false;
      for (u64 cc : core) {
        num += m(Eigen::Index(x), Eigen::Index(cc)) * psi[cc].real();
        conn |= m(Eigen::Index(x), Eigen::Index(cc)) != 0;
      }
      const double den = m(Eigen::Index(x), Eigen::Index(x)) - e0;
      if (conn && std::abs(num) >= 1e-14 && std::abs(num / den) > eps) pool.push_back(x);
    }
    std::sort(pool.begin(), pool.end());
    Rng r(Rng::split(tp.seed, 5));
    r.shuffle(pool);
    std::vector<std::vector<u64>> subsets(tp.n_s);
    for (std::size_t i = 0; i < pool.size(); ++i) subsets[i % tp.n_s].push_back(pool[i]);
    std::vector<u64> want;
    for (auto& s : subsets) {
      std::sort(s.begin(), s.end());
      if (s.size() <= tp.n_k) {
        want.insert(want.end(), s.begin(), s.end());
        continue;
      }
      double es0 = 0;
      AmpMap a = core_state(m, s, &es0);
      std::vector<std::pair<double, u64>> rk;
      for (u64 x : s) rk.push_back({-std::abs(a[x].real()), x});
      std::sort(rk.begin(), rk.end());
      for (std::size_t i = 0; i < tp.n_k; ++i) want.push_back(rk[i].second);
    }
    std::sort(want.begin(), want.end());
    EXPECT_EQ(got.kept, want) << t;
    EXPECT_LE(got.kept.size(), tp.n_s * tp.n_k);
    // Determinism.
    EXPECT_EQ(select_trimci(c, core, cand, e0, eps, tp, 5).kept, got.kept);
  }
}

TEST(SelectTrimci, DynamicThresholdHitsTarget) {
  std::mt19937_64 rng(26);
  auto [h, m] = sparse_toy(7, 0.2, rng);
  std::vector<u64> core{0, 1, 2, 3, 4, 5, 6, 7};
  double e0 = 0;
  AmpMap psi = core_state(m, core, &e0);
  CompiledSum c(h);
  auto cand = score_candidates(c, core, psi);
  TrimParams tp;
  tp.expansion = 3.0;
  tp.n_s = 1;
  tp.n_k = 1000;
  auto out = select_trimci(c, core, cand, e0, 0.0, tp, 0);
  EXPECT_NEAR(double(out.filtered), 2.0 * 8, 1.0);
}

TEST(RunSci, InfiniteThresholdStopsAfterOneIteration) {
  std::mt19937_64 rng(27);
  auto h = oracle::random_sum(5, 20, rng);
  SciParams p;
  p.epsilon = kInf;
  const Configuration x0(0b01101, 5);
  auto r = run_sci(h, x0, p);
  ASSERT_EQ(r.trace.rows.size(), 1u);
  EXPECT_EQ(r.trace.status, RunStatus::Stalled);
  EXPECT_NEAR(r.eig.value, matrix_element(h, x0, x0).real(), 1e-12);
}

TEST(RunSci, AsciUnboundedReachesFullCi) {
  std::mt19937_64 rng(28);
  for (int t = 0; t < 5; ++t) {
    auto h = oracle::random_sum(6, 25, rng);
    SciParams p;
    p.variant = SciVariant::ASCI;
    p.d_cap = 64;
    p.max_iters = 20;
    auto r = run_sci(h, Configuration(0, 6), p);
    EXPECT_NEAR(r.eig.value, oracle::lowest(oracle::dense(h)), 1e-9);
  }
}

TEST(RunSci, StallOnBareCoreBlock) {
  const CoreBlockParams p;
  const Eigen::MatrixXd m = oracle::core_block(p.a, p.b, p.c);
  PauliSum h = decompose_dense_block(m.cast<cplx>(), {0, 1, 2}, 3);
  for (double eps : log_grid(1e-14, 1e-2, 20)) {
    SciParams sp;
    sp.epsilon = eps;
    auto r = run_sci(h, Configuration(0, 3), sp);
    for (u64 x : r.basis) EXPECT_LT(x, 3u) << eps;
    EXPECT_GT(r.eig.value, 0.1);
  }
}

TEST(RunSci, CipsiAndHciStallOnMainPatch) {
  ConstructionParams cp;
  cp.coupling = false;
  cp.mask = 0;
  Instance inst = generate_path16_instance(cp, 1);
  const std::set<u64> blocked{u64{1} << 6, u64{1} << 8, u64{1} << 10, u64{1} << 12, u64{1} << 14};
  for (auto v : {SciVariant::CIPSI, SciVariant::HCI})
    for (double eps : log_grid(1e-14, 1e-4, 12)) {
      SciParams sp;
      sp.variant = v;
      sp.epsilon = eps;
      auto r = run_sci(inst.h, inst.cert.initial_config, sp);
      EXPECT_GT(r.eig.value, 0.1) << to_string(v) << " " << eps;
      for (u64 x : r.basis) EXPECT_FALSE(blocked.count(x));
      EXPECT_EQ(r.trace.status, RunStatus::Stalled);
    }
}

TEST(RunSci, UncappedCipsiIsMonotoneAndVariational) {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 5; ++t) {
    auto h = oracle::random_sum(8, 30, rng);
    const double exact = oracle::lowest(oracle::dense(h));
    for (auto v : {SciVariant::CIPSI, SciVariant::HCI, SciVariant::ASCI, SciVariant::TrimCI}) {
      SciParams p;
      p.variant = v;
      p.epsilon = 1e-2;
      p.d_cap = 40;
      p.core_cap = v == SciVariant::ASCI ? 10 : kUnbounded;
      p.trim.n_s = 2;
      p.trim.n_k = 16;
      p.max_iters = 15;
      auto r = run_sci(h, Configuration(0, 8), p);
      for (std::size_t i = 0; i < r.trace.rows.size(); ++i) {
        EXPECT_GE(r.trace.rows[i].energy, exact - 1e-9);
        if (i > 0 && (v == SciVariant::CIPSI || v == SciVariant::HCI))
          EXPECT_LE(r.trace.rows[i].energy, r.trace.rows[i - 1].energy + 1e-10);
      }
    }
  }
}

TEST(RunSci, CoreCapAndBudget) {
  std::mt19937_64 rng(30);
  auto h = oracle::random_sum(8, 30, rng);
  SciParams p;
  p.epsilon = 0.0;
  p.budget = 20;
  auto r = run_sci(h, Configuration(0, 8), p);
  EXPECT_EQ(r.trace.status, RunStatus::BudgetExceeded);
  EXPECT_LE(r.basis.size(), 20u);
  p = SciParams{};
  p.epsilon = 0.0;
  p.core_cap = 3;
  p.max_iters = 4;
  r = run_sci(h, Configuration(0, 8), p);
  for (const auto& row : r.trace.rows) EXPECT_GE(row.subspace_dim, 1u);
}

TEST(RunSci, Errors) {
  auto h = PauliSum::from_text("1 0 ZZ\n");
  SciParams p;
  EXPECT_THROW(run_sci(h, Configuration(0, 3), p), std::invalid_argument);
  p.epsilon = -1;
  EXPECT_THROW(run_sci(h, Configuration(0, 2), p), std::invalid_argument);
  p = SciParams{};
  p.variant = SciVariant::ASCI;
  p.d_cap = 4;
  p.core_cap = 4;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}
