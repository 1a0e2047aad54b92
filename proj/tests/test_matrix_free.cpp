// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracle.hpp"
#include "sgs/hamiltonian.hpp"
#include "sgs/matrix_free.hpp"

using namespace sgs;

namespace {

Instance bare_patch() {
  ConstructionParams cp;
  cp.coupling = false;
  return generate_path16_instance(cp, 5);
}

Eigen::VectorXcd to_dense_vec(const SparseVector& v) {
  Eigen::VectorXcd d = Eigen::VectorXcd::Zero(Eigen::Index(1) << v.n_qubits());
  for (const auto& [x, a] : v.entries()) d[Eigen::Index(x)] = a;
  return d;
}

// Two-qubit random block on qubits {0,1}, all other qubits pinned to |0>.
PauliSum sparse_ground_toy(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::MatrixXd b(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) b(i, j) = b(j, i) = u(rng);
  PauliSum h = decompose_dense_block(b.cast<cplx>(), {0, 1}, n);
  for (int q = 2; q < n; ++q) {
    h.add(1.5, PauliString(0, 0, n));
    h.add(-1.5, PauliString::from_sites(n, {{q, 'Z'}}));
  }
  h.canonicalize();
  return h;
}

}  // namespace

TEST(DiagRanking, SingleStepByHand) {
  std::mt19937_64 rng(31);
  auto h = oracle::random_sum(6, 10, rng);
  const Configuration x0(0b001011, 6);
  const auto d = oracle::dense(h);
  // Reservoir after one step: x0 plus everything one application away.
  std::vector<std::pair<double, u64>> res{{d(0b001011, 0b001011).real(), 0b001011}};
  for (u64 y = 0; y < 64; ++y)
    if (y != x0.bits && std::abs(d(Eigen::Index(y), Eigen::Index(x0.bits))) > 1e-14)
      res.push_back({d(Eigen::Index(y), Eigen::Index(y)).real(), y});
  std::sort(res.begin(), res.end());
  DiagRankParams p;
  p.working_cap = 1;
  p.reservoir_cap = 64;
  p.iters = 1;
  auto r = run_diag_ranking(h, x0, p);
  ASSERT_EQ(r.basis.size(), 1u);
  EXPECT_EQ(r.basis[0], res[0].second);
  EXPECT_NEAR(r.eig.value, res[0].first, 1e-12);
  EXPECT_EQ(r.trace.rows[0].new_configs, res.size() - 1);
}

TEST(DiagRanking, CapsRespected) {
  std::mt19937_64 rng(32);
  auto h = oracle::random_sum(10, 40, rng);
  DiagRankParams p;
  p.working_cap = 7;
  p.reservoir_cap = 20;
  p.iters = 15;
  p.diagnostics = true;
  auto r = run_diag_ranking(h, Configuration(0, 10), p);
  const double exact = oracle::lanczos(oracle::SpinOperator(h)).energy;
  for (const auto& row : r.trace.rows) {
    EXPECT_LE(row.subspace_dim, 7u);
    EXPECT_GE(row.energy, exact - 1e-9);
  }
  EXPECT_THROW(run_diag_ranking(h, Configuration(0, 10), DiagRankParams{8, 4}),
               std::invalid_argument);
}

TEST(DiagRanking, MainPatchReachesZero) {
  Instance inst = bare_patch();
  DiagRankParams p;
  p.working_cap = 16;
  p.reservoir_cap = 64;
  p.iters = 30;
  auto r = run_diag_ranking(inst.h, inst.cert.initial_config, p);
  EXPECT_NEAR(r.eig.value, 0.0, 1e-7);
  for (const auto& c : inst.cert.support)
    EXPECT_TRUE(std::binary_search(r.basis.begin(), r.basis.end(), c.bits));
}

TEST(TruncArnoldi, NoTruncationIsTextbookArnoldi) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 3; ++t) {
    auto h = oracle::random_sum(5, 12, rng);
    const auto d = oracle::dense(h);
    TruncArnoldiParams p;
    p.new_config_cap = 32;
    p.iters = 8;
    p.keep_vectors = true;
    auto r = run_truncated_arnoldi(h, Configuration(3, 5), p);
    ASSERT_GE(r.krylov.size(), 2u);

    // Independent dense Arnoldi with modified Gram-Schmidt.
    std::vector<Eigen::VectorXcd> q{Eigen::VectorXcd::Unit(32, 3)};
    Eigen::MatrixXcd hess = Eigen::MatrixXcd::Zero(9, 9);
    for (int j = 0; j + 1 < int(r.krylov.size()); ++j) {
      Eigen::VectorXcd w = d * q.back();
      for (int i = 0; i <= j; ++i) {
        hess(i, j) = q[std::size_t(i)].dot(w);
        w -= hess(i, j) * q[std::size_t(i)];
      }
      for (int i = 0; i <= j; ++i) w -= q[std::size_t(i)].dot(w) * q[std::size_t(i)];
      hess(j + 1, j) = w.norm();
      q.push_back(w / w.norm());
    }
    ASSERT_EQ(q.size(), r.krylov.size());
    const int m = int(q.size());
    Eigen::MatrixXcd lib(m, m), ref(m, m);
    for (int i = 0; i < m; ++i) {
      EXPECT_LT((to_dense_vec(r.krylov[std::size_t(i)]) - q[std::size_t(i)]).norm(), 1e-10) << i;
      for (int j = 0; j < m; ++j) {
        lib(i, j) = to_dense_vec(r.krylov[std::size_t(i)]).dot(d * to_dense_vec(r.krylov[std::size_t(j)]));
        ref(i, j) = q[std::size_t(i)].dot(d * q[std::size_t(j)]);
      }
    }
    EXPECT_LT((lib - ref).cwiseAbs().maxCoeff(), 1e-10);
    // Hermitian input gives tridiagonal structure.
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (std::abs(i - j) > 1) EXPECT_LT(std::abs(lib(i, j)), 1e-10);
  }
}

TEST(TruncArnoldi, FullDimensionGivesExactEnergy) {
  std::mt19937_64 rng(34);
  auto h = oracle::random_sum(6, 20, rng);
  TruncArnoldiParams p;
  p.new_config_cap = 64;
  p.iters = 64;
  auto r = run_truncated_arnoldi(h, Configuration(0, 6), p);
  EXPECT_NEAR(r.eig.value, oracle::lowest(oracle::dense(h)), 1e-9);
  EXPECT_LE(r.trace.rows.back().iter, 64);
}

TEST(TruncArnoldi, MainPatchSmallCap) {
  Instance inst = bare_patch();
  TruncArnoldiParams p;
  p.new_config_cap = 2;
  p.iters = 30;
  auto r = run_truncated_arnoldi(inst.h, inst.cert.initial_config, p);
  EXPECT_NEAR(r.eig.value, 0.0, 1e-7);
  // Per-iterate supports never exceed M.
  p.keep_vectors = true;
  p.iters = 10;
  r = run_truncated_arnoldi(inst.h, inst.cert.initial_config, p);
  for (std::size_t i = 1; i < r.krylov.size(); ++i) EXPECT_LE(r.krylov[i].size(), 2u);
}

TEST(TruncArnoldi, BreakdownReported) {
  // A single diagonal term keeps the Krylov space one-dimensional.
  auto h = PauliSum::from_text("1 0 ZI\n");
  TruncArnoldiParams p;
  p.iters = 5;
  auto r = run_truncated_arnoldi(h, Configuration(1, 2), p);
  EXPECT_EQ(r.trace.status, RunStatus::Breakdown);
  EXPECT_NEAR(r.eig.value, -1.0, 1e-12);
}

TEST(Tpm, UntruncatedConvergesOnFiveQubits) {
  std::mt19937_64 rng(35);
  auto h = oracle::random_sum(5, 15, rng);
  SparseVector x0(5);
  for (u64 x = 0; x < 32; ++x) x0.set(x, 1.0);
  TpmParams p;
  p.k = 32;
  p.iters = 3000;
  p.track_both = false;
  auto r = run_tpm(h, x0, p);
  EXPECT_NEAR(r.energy, oracle::lowest(oracle::dense(h)), 1e-6);
  EXPECT_THROW(run_tpm(h, x0, TpmParams{32, 1, h.one_norm() * 0.5}), std::invalid_argument);
}

TEST(Tpm, PatchSupportBelowExpectationAndMonotone) {
  Instance inst = bare_patch();
  SparseVector x0(16);
  x0.set(inst.cert.initial_config.bits, 1.0);
  TpmParams p;
  p.k = 64;
  p.iters = 60;
  auto r = run_tpm(inst.h, x0, p);
  ASSERT_EQ(r.expectation.size(), 60u);
  for (std::size_t t = 0; t < r.expectation.size(); ++t) {
    EXPECT_LE(r.support[t], r.expectation[t] + 1e-10) << t;
    EXPECT_GE(r.support[t], -1e-9);
    if (t > 0) EXPECT_LE(r.expectation[t], r.expectation[t - 1] + 1e-12) << t;
  }
  EXPECT_LE(r.phi.size(), 64u);
}

TEST(TpmTheory, ClosedFormCases) {
  auto c = tpm_theory(1.0, 1.0, 1.0, 1.0, 9.0, 1.0);
  EXPECT_DOUBLE_EQ(c.k_star, 64.0);
  EXPECT_NEAR(c.l_star, std::log(64.0), 1e-12);
  auto f = tpm_theory(2.9e-5, 3.4e-11, 512, 64, 1e-3, 100.0);
  EXPECT_GE(f.k_star, 4.6e23);
  EXPECT_DOUBLE_EQ(f.k_star, 512 / (2.9e-5 * 2.9e-5) * (64 / 3.4e-11));
  EXPECT_THROW(tpm_theory(0.0, 0.5, 1, 1, 1, 1), std::invalid_argument);
  EXPECT_THROW(tpm_theory(0.5, 1.5, 1, 1, 1, 1), std::invalid_argument);
  EXPECT_THROW(tpm_theory(0.5, 0.5, 0.5, 1, 1, 1), std::invalid_argument);
}

TEST(TpmTheory, XiRecursionWithinBound) {
  for (double gamma : {0.05, 0.2, 0.6})
    for (double delta : {0.01, 0.3, 0.9}) {
      auto c = tpm_theory(gamma, delta, 4, 4, 0.1, 1.0, 0.0, 400);
      ASSERT_EQ(c.xi.size(), 401u);
      EXPECT_LE(c.xi_fixed, c.xi_fixed_bound + 1e-15);
      for (std::size_t t = 0; t < c.xi.size(); ++t)
        EXPECT_LE(std::abs(c.xi[t] - c.xi_fixed),
                  std::exp(-double(t) * gamma / 2) / std::sqrt(delta) + 1e-15)
            << gamma << " " << delta << " " << t;
    }
}

TEST(TpmTheory, TangentBelowXiSequence) {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 3; ++trial) {
    const int n = 6;
    PauliSum h = sparse_ground_toy(n, rng);
    Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::dense(h));
    const Eigen::VectorXcd v = es.eigenvectors().col(0);
    const double shift = h.one_norm() + 1.0;
    const double l1 = shift - es.eigenvalues()[0], l2 = shift - es.eigenvalues()[1];
    const double gamma = (l1 - l2) / l1;
    int chi = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) chi += std::abs(v[i]) > 1e-12;
    const double delta = std::norm(v[0]);
    ASSERT_GT(delta, 0.0);
    auto c = tpm_theory(gamma, delta, chi, double(column_sparsity(h)), 0.1 * l1, l1, 0.0, 40);
    // k_star exceeds 2^n, so truncating at 2^n is the same map.
    ASSERT_GE(c.k_star, 64.0);
    SparseVector x0(n);
    x0.set(0, 1.0);
    for (int t = 1; t <= 40; ++t) {
      TpmParams p;
      p.k = 64;
      p.iters = t;
      p.shift = shift;
      p.track_both = false;
      auto r = run_tpm(h, x0, p);
      const double ov = std::abs(v.dot(to_dense_vec(r.phi)));
      const double tangent = std::sqrt(std::max(0.0, 1 - ov * ov)) / ov;
      EXPECT_LE(tangent, c.xi[std::size_t(t)] + 1e-9) << trial << " t=" << t;
    }
  }
}
