#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace positools {

struct OptimBudget {
  int restarts = 64;
  int iters = 200;
  double converge = 1e-11;
};

struct RankMinResult {
  double value = 0;                 // minimal Rayleigh quotient found
  Eigen::VectorXcd minimizer;       // vec(tau), |tau| = 1, basis (j,lambda) -> j*r+lambda
};

/// Minimizes <M tau, tau> / |tau|^2 over nonzero n x r matrices tau of
/// rank <= k, by alternating eigenvector updates on the two factors of
/// tau = X Y^T with random restarts. Exact (full eigensolve) when
/// k == min(n, r). Warm starts join the restart pool, so passing the
/// rank-(k-1) minimizer keeps values monotone in k.
RankMinResult min_rank_quadratic(const Eigen::MatrixXcd& M, int n, int r, int k,
                                 const OptimBudget& budget, std::uint64_t seed,
                                 const std::vector<Eigen::VectorXcd>& warm_starts = {});

}  // namespace positools
