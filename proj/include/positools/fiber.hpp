#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "positools/charclass.hpp"
#include "positools/curvature.hpp"
#include "positools/multilinear.hpp"

namespace positools {

struct UnsupportedRank : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegreeMismatchFiber : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Deterministic quadrature on P^1, uniform in Fubini-Study measure:
/// midpoint lattice in cos(theta) times a uniform phase grid. Weights sum
/// to 1 (the FS volume of P^1 in the c_1(O(1)) normalization).
struct QuadratureRule {
  std::vector<Eigen::Vector2cd> points;  // unit representatives of [a]
  std::vector<double> weights;
  int resolution = 0;

  static QuadratureRule p1(int resolution = 256);
  double total_weight() const;
};

/// Mourougane curvature of the quotient Q' = pi^*F / O(-1) at the fiber
/// point [a], written at the rotated chart center: an (r-1) x (r-1) matrix
/// of (1,1)-forms on C^{n + r - 1} with base coordinates 1..n first and the
/// vertical coordinates b_2..b_r last.
struct FiberCurvature {
  int n = 0;
  int r = 0;
  std::vector<ExteriorForm> entries;  // row-major over quotient indices (lambda, mu), 0-based

  const ExteriorForm& at(int lambda, int mu) const { return entries[lambda * (r - 1) + mu]; }
};

FiberCurvature mourougane_curvature(const CurvatureTensor& g, const Eigen::VectorXcd& a);

/// c_1(O_{P(F)}(1), induced metric) at [a]: trace of the Mourougane matrix
/// minus the pulled-back trace of the base curvature.
ExteriorForm o1_curvature(const CurvatureTensor& g, const Eigen::VectorXcd& a);

/// Demailly's flag curvature for r = 2: the forms c_1(Q_1), c_1(Q_2) at the
/// flag with V_1 spanned by v1_dir, written at the rotated chart center on
/// C^{n+1} (vertical coordinate last).
std::vector<ExteriorForm> demailly_flag_curvature(const CurvatureTensor& g,
                                                  const Eigen::VectorXcd& v1_dir);

/// Integrates the purely-vertical-saturated component of the integrand over
/// the fiber: returns the (m - f, m - f) base form.
ExteriorForm fiber_pushforward(const std::function<ExteriorForm(const Eigen::Vector2cd&)>& integrand,
                               const QuadratureRule& rule, int base_dim, int fiber_dim);

struct VerifyReport {
  ExteriorForm lhs = ExteriorForm::scalar(1, 0);
  ExteriorForm rhs = ExteriorForm::scalar(1, 0);
  double max_deviation = 0;       // entrywise, on the scaled-basis coefficients
  double relative_deviation = 0;  // against max(1, |lhs|)
};

/// Segre pushforward identity s_k(E) = pi_* [ c_1(O_{P(E*)}(1))^(k+r-1) ], r = 2.
VerifyReport verify_segre(const CurvatureTensor& g, int k, const QuadratureRule& rule);

/// Local Jacobi-Trudi: P_a(c(E,h)) = pi_* [ c_1(Q_1)^(b_1+r-1) ^ c_1(Q_2)^(b_2) ],
/// b = a^T, r = 2.
VerifyReport verify_jacobi_trudi(const CurvatureTensor& g, const Partition& a,
                                 const QuadratureRule& rule);

struct NakanoPushReport {
  double max_deviation = 0;  // relative, over all sampled fiber points
  int samples = 0;
};

/// Pointwise operator identity for the horizontal contracted top Chern form
/// of Q' along Y = P(F'), F' a coordinate subspace (bitmask over 1..r).
NakanoPushReport verify_nakano_pushforward(const CurvatureTensor& g, IndexMask fprime,
                                           const QuadratureRule& rule, int samples = 32,
                                           std::uint64_t seed = 5);

}  // namespace positools
