// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#include "sgs/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sgs/rng.hpp"

namespace sgs {

namespace {

using Vec = Eigen::VectorXcd;

void orthogonalize(Vec& w, const std::vector<Vec>& basis) {
  // Two classical Gram-Schmidt sweeps ("twice is enough").
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& q : basis) w -= q.dot(w) * q;
}

}  // namespace

EigResult lanczos_lowest(std::size_t dim, const MatVec& op, const LanczosOptions& opt) {
  if (dim == 0) throw std::invalid_argument("lanczos on empty matrix");
  EigResult res;
  const Eigen::Index n = static_cast<Eigen::Index>(dim);
  const std::size_t cap_mem = std::max<std::size_t>(4, opt.memory_budget / (16 * dim + 1));
  const int m_cycle = static_cast<int>(std::min<std::size_t>(
      {static_cast<std::size_t>(std::max(opt.krylov_size, 2)), dim, cap_mem}));

  Vec v(n);
  if (opt.start && opt.start->size() == n && opt.start->norm() > 0) {
    v = *opt.start;
  } else {
    Rng rng(opt.seed);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(rng.normal(), rng.normal());
  }
  v.normalize();

  Vec w(n), x(n);
  int total = 0;
  while (true) {
    std::vector<Vec> V{v};
    std::vector<double> alpha, beta;
    bool invariant = false;
    for (int j = 0; j < m_cycle && total < opt.max_iter; ++j) {
      op(V[j].data(), w.data());
      ++total;
      alpha.push_back(V[j].dot(w).real());
      orthogonalize(w, V);
      const double b = w.norm();
      if (b <= 1e-13 * (1.0 + std::abs(alpha.back())) || static_cast<std::size_t>(V.size()) == dim) {
        invariant = true;
        break;
      }
      if (j + 1 == m_cycle || total >= opt.max_iter) break;
      beta.push_back(b);
      V.push_back(w / b);
    }
    const int k = static_cast<int>(alpha.size());
    // Projected matrix V^H A V: tridiagonal up to rounding; rebuild exactly.
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) t(i, i) = alpha[i];
    for (int i = 0; i + 1 < k; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const Eigen::VectorXd s = es.eigenvectors().col(0);
    x.setZero();
    for (int i = 0; i < k; ++i) x += s(i) * V[i];
    x.normalize();
    op(x.data(), w.data());
    const double theta = x.dot(w).real();
    w -= theta * x;
    res.value = theta;
    res.residual = w.norm();
    res.iterations = total;
    res.vector = x;
    res.second = k > 1 ? es.eigenvalues()(1) : theta;
    if (res.residual <= opt.tol * (1.0 + std::abs(theta))) {
      res.converged = true;
      break;
    }
    if (total >= opt.max_iter || (invariant && res.residual <= 1e-8 * (1.0 + std::abs(theta)))) break;
    v = x;
  }
  return res;
}

EigResult lanczos_lowest(const ProjectedMatrix& m, const LanczosOptions& opt) {
  if (m.dim == 1) {
    EigResult r;
    r.value = m.at(0, 0).real();
    r.vector = Eigen::VectorXcd::Ones(1);
    r.converged = true;
    r.iterations = 1;
    return r;
  }
  return lanczos_lowest(m.dim, [&m](const cplx* a, cplx* b) { m.multiply(a, b); }, opt);
}

EigResult lanczos_lowest(const ProjectedMatrix& m, double tol, int max_iter, std::uint64_t seed) {
  LanczosOptions opt;
  opt.tol = tol;
  opt.max_iter = max_iter;
  opt.seed = seed;
  return lanczos_lowest(m, opt);
}

EigResult dense_lowest(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("dense_lowest needs a square matrix");
  if (m.rows() == 0) throw std::invalid_argument("dense_lowest on empty matrix");
  if (m.rows() > 4096) throw std::invalid_argument("dense_lowest limited to dim 4096");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  EigResult r;
  const auto& ev = es.eigenvalues();
  r.value = ev(0);
  r.vector = es.eigenvectors().col(0);
  r.converged = true;
  r.iterations = 1;
  r.residual = (m * r.vector - r.value * r.vector).norm();
  if (ev.size() > 1) {
    r.second = ev(1);
    const double scale = std::max({std::abs(ev(0)), std::abs(ev(ev.size() - 1)), 1.0});
    r.degenerate = (ev(1) - ev(0)) < 1e-10 * scale;
  } else {
    r.second = r.value;
  }
  return r;
}

EigResult diagonalize_projected(const ProjectedMatrix& m, double tol, std::uint64_t seed) {
  if (m.dim == 0) throw std::invalid_argument("empty subspace");
  if (m.dim <= 256) return dense_lowest(m.dense());
  LanczosOptions opt;
  opt.tol = tol;
  opt.seed = seed;
  opt.max_iter = 20000;
  return lanczos_lowest(m, opt);
}

}  // namespace sgs
