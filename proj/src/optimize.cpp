#include "positools/optimize.hpp"

#include <cmath>

#include "positools/parallel.hpp"
#include "positools/rng.hpp"

namespace positools {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

MatrixXcd orthonormal_columns(const MatrixXcd& m) {
  Eigen::HouseholderQR<MatrixXcd> qr(m);
  return qr.householderQ() * MatrixXcd::Identity(m.rows(), m.cols());
}

double rayleigh(const MatrixXcd& M, const VectorXcd& v) {
  const double nn = v.squaredNorm();
  return (v.adjoint() * M * v)(0).real() / nn;
}

VectorXcd vec_of(const MatrixXcd& tau) {
  const int n = static_cast<int>(tau.rows());
  const int r = static_cast<int>(tau.cols());
  VectorXcd v(n * r);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < r; ++l) v(j * r + l) = tau(j, l);
  return v;
}

MatrixXcd mat_of(const VectorXcd& v, int n, int r) {
  MatrixXcd tau(n, r);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < r; ++l) tau(j, l) = v(j * r + l);
  return tau;
}

struct Local {
  double value;
  VectorXcd vec;
};

Local descend(const MatrixXcd& M, int n, int r, int k, const OptimBudget& budget, MatrixXcd X,
              MatrixXcd Y) {
  double best = rayleigh(M, vec_of(X * Y.transpose()));
  for (int it = 0; it < budget.iters; ++it) {
    // X-step: with Y orthonormal the constraint Gram matrix is the identity
    Y = orthonormal_columns(Y);
    MatrixXcd A = MatrixXcd::Zero(n * k, n * k);
    for (int j = 0; j < n; ++j)
      for (int jp = 0; jp < n; ++jp)
        for (int s = 0; s < k; ++s)
          for (int t = 0; t < k; ++t) {
            std::complex<double> acc = 0;
            for (int l = 0; l < r; ++l)
              for (int lp = 0; lp < r; ++lp)
                acc += std::conj(Y(l, s)) * M(j * r + l, jp * r + lp) * Y(lp, t);
            A(j * k + s, jp * k + t) = acc;
          }
    Eigen::SelfAdjointEigenSolver<MatrixXcd> esx(A);
    const VectorXcd x = esx.eigenvectors().col(0);
    for (int j = 0; j < n; ++j)
      for (int s = 0; s < k; ++s) X(j, s) = x(j * k + s);

    // Y-step
    X = orthonormal_columns(X);
    MatrixXcd C = MatrixXcd::Zero(r * k, r * k);
    for (int l = 0; l < r; ++l)
      for (int lp = 0; lp < r; ++lp)
        for (int s = 0; s < k; ++s)
          for (int t = 0; t < k; ++t) {
            std::complex<double> acc = 0;
            for (int j = 0; j < n; ++j)
              for (int jp = 0; jp < n; ++jp)
                acc += std::conj(X(j, s)) * M(j * r + l, jp * r + lp) * X(jp, t);
            C(l * k + s, lp * k + t) = acc;
          }
    Eigen::SelfAdjointEigenSolver<MatrixXcd> esy(C);
    const VectorXcd y = esy.eigenvectors().col(0);
    for (int l = 0; l < r; ++l)
      for (int s = 0; s < k; ++s) Y(l, s) = y(l * k + s);

    const double val = rayleigh(M, vec_of(X * Y.transpose()));
    if (best - val < budget.converge) {
      best = std::min(best, val);
      break;
    }
    best = val;
  }
  VectorXcd v = vec_of(X * Y.transpose());
  v /= v.norm();
  return {rayleigh(M, v), v};
}

// rank-revealing split of a warm-start vector into factors
std::pair<MatrixXcd, MatrixXcd> split_rank(const VectorXcd& v, int n, int r, int k) {
  const MatrixXcd tau = mat_of(v, n, r);
  Eigen::JacobiSVD<MatrixXcd> svd(tau, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const int kk = std::min<int>(k, static_cast<int>(svd.singularValues().size()));
  MatrixXcd X(n, k), Y(r, k);
  X.setZero();
  Y.setZero();
  for (int s = 0; s < kk; ++s) {
    X.col(s) = svd.matrixU().col(s) * svd.singularValues()(s);
    Y.col(s) = svd.matrixV().col(s).conjugate();
  }
  if (kk < k) {
    // pad with tiny perturbations so the factors have full width
    for (int s = kk; s < k; ++s) {
      X(s % n, s) = 1e-8;
      Y(s % r, s) = 1e-8;
    }
  }
  return {X, Y};
}

}  // namespace

RankMinResult min_rank_quadratic(const Eigen::MatrixXcd& M, int n, int r, int k,
                                 const OptimBudget& budget, std::uint64_t seed,
                                 const std::vector<Eigen::VectorXcd>& warm_starts) {
  if (k >= std::min(n, r)) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(M);
    RankMinResult res;
    res.value = es.eigenvalues()(0);
    res.minimizer = es.eigenvectors().col(0);
    return res;
  }
  const std::size_t total = static_cast<std::size_t>(budget.restarts) + warm_starts.size();
  std::vector<Local> results(total);
  parallel_for(total, [&](std::size_t i) {
    MatrixXcd X, Y;
    if (i < warm_starts.size()) {
      std::tie(X, Y) = split_rank(warm_starts[i], n, r, k);
    } else {
      Rng rng(derive_seed(seed, i));
      X = rng.gaussian_matrix(n, k);
      Y = rng.gaussian_matrix(r, k);
    }
    results[i] = descend(M, n, r, k, budget, X, Y);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < total; ++i)
    if (results[i].value < results[best].value) best = i;
  RankMinResult res;
  res.value = results[best].value;
  res.minimizer = results[best].vec;
  return res;
}

}  // namespace positools
