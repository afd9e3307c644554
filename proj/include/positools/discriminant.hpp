#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "positools/curvature.hpp"

namespace positools {

struct RankTooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotSquare : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ImaginaryResidue : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Mixed discriminant D(A^1,...,A^r) = (1/r!) sum_sigma det(a^{sigma(i)}_{ik}).
Complex mixed_discriminant(const std::vector<Eigen::MatrixXcd>& a);

/// Same value through the (1/r!) sum_{sigma,tau} sign-product formula;
/// kept as an internal cross-check route.
Complex mixed_discriminant_sigma_tau(const std::vector<Eigen::MatrixXcd>& a);

/// The symmetric tensor D*_V(1) in (End C^r)^{(x) r}: the signed sum
/// (1/r!) sum_{sigma,tau} (-1)^{[sigma]+[tau]} (x)_t E_{sigma(t) tau(t)}.
class MixedDiscriminantTensor {
 public:
  explicit MixedDiscriminantTensor(int r);

  int r() const { return r_; }
  /// Entry at slot pairs ((l_1,m_1),...,(l_r,m_r)).
  Complex at(const std::vector<std::pair<int, int>>& slots) const;
  const std::vector<Complex>& raw() const { return v_; }

  /// value of the contraction <D*(1), (x)_t A_t> with pairing <E_lm, A> = A(l,m).
  Complex contract(const std::vector<Eigen::MatrixXcd>& a) const;

 private:
  friend MixedDiscriminantTensor dual_tensor(int r);
  std::size_t index(const std::vector<std::pair<int, int>>& slots) const;
  int r_;
  std::vector<Complex> v_;  // dense, (r^2)^r entries
};

/// D*_V(1) for r <= 4.
MixedDiscriminantTensor dual_tensor(int r);

/// The Open Problem quantity D_W o H^{(x) r} o D*_V for square H with
/// dim V = dim W = r <= 4; asserts a real value.
double double_mixed_discriminant(const MatrixMap& h);

struct AlexandroffReport {
  int r = 0;
  int samples = 0;
  double min_value = 0;
  bool all_nonnegative = false;  // min >= -1e-12
};

/// Samples random PSD r-tuples and reports the minimal mixed discriminant.
AlexandroffReport alexandroff_check(int r, int samples, std::uint64_t seed);

}  // namespace positools
