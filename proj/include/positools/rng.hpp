#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace positools {

using Complex = std::complex<double>;

// splitmix64 mix; derives independent stream seeds from a base seed so
// parallel workers stay reproducible regardless of scheduling.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double gaussian() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

  // standard complex Gaussian, E|z|^2 = 1
  Complex complex_gaussian() {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return Complex(re, im) / std::sqrt(2.0);
  }

  Eigen::MatrixXcd gaussian_matrix(int rows, int cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = complex_gaussian();
    return m;
  }

  // Haar-ish unitary from the QR of a Gaussian matrix.
  Eigen::MatrixXcd unitary(int n) {
    Eigen::MatrixXcd g = gaussian_matrix(n, n);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
      const Complex d = r(i, i);
      const double a = std::abs(d);
      q.col(i) *= (a > 0) ? d / a : Complex(1, 0);
    }
    return q;
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace positools
