#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "positools/curvature.hpp"
#include "positools/multilinear.hpp"
#include "positools/rational.hpp"

namespace positools {

struct WeightExceedsDimension : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotHomogeneous : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Element of Lambda(k, r): a partition of k into non-increasing parts <= r.
class Partition {
 public:
  Partition(std::vector<int> parts, int bound);

  int weight() const { return weight_; }
  int bound() const { return bound_; }
  const std::vector<int>& parts() const { return parts_; }
  int part(int i) const { return i < static_cast<int>(parts_.size()) ? parts_[i] : 0; }

  Partition transpose() const;
  std::string str() const;

  friend bool operator<(const Partition& a, const Partition& b) { return a.parts_ < b.parts_; }
  friend bool operator==(const Partition& a, const Partition& b) { return a.parts_ == b.parts_; }

  /// All of Lambda(k, r) in a fixed deterministic order.
  static std::vector<Partition> lambda_set(int k, int r);

 private:
  std::vector<int> parts_;  // positive, non-increasing, no trailing zeros
  int weight_;
  int bound_;
};

/// Polynomial in the Chern variables c_1..c_r with exact rational
/// coefficients, keyed by exponent vectors (m_1,...,m_r).
class ChernPolynomial {
 public:
  explicit ChernPolynomial(int rank) : rank_(rank) {}

  static ChernPolynomial constant(int rank, const Rational& c);
  /// c_i as a polynomial; c_0 = 1 and c_i = 0 outside 0..rank.
  static ChernPolynomial chern_var(int rank, int i);

  int rank() const { return rank_; }
  const std::map<std::vector<int>, Rational>& terms() const { return terms_; }
  void add_term(const std::vector<int>& exps, const Rational& c);

  ChernPolynomial& operator+=(const ChernPolynomial& o);
  ChernPolynomial& operator-=(const ChernPolynomial& o);
  friend ChernPolynomial operator+(ChernPolynomial a, const ChernPolynomial& b) { return a += b; }
  friend ChernPolynomial operator-(ChernPolynomial a, const ChernPolynomial& b) { return a -= b; }
  friend ChernPolynomial operator*(const ChernPolynomial& a, const ChernPolynomial& b);
  friend ChernPolynomial operator*(const Rational& s, ChernPolynomial a);

  /// Weighted degree 2 sum(i*m_i) when homogeneous; throws NotHomogeneous.
  int homogeneous_weight() const;

  /// Substitutes Chern forms (chern[i] is the (i,i)-form c_i) under wedge.
  ExteriorForm evaluate(const std::vector<ExteriorForm>& chern, int dim) const;

 private:
  int rank_;
  std::map<std::vector<int>, Rational> terms_;
};

/// Chern forms [c_0, ..., c_min(r,n)] of a curvature tensor by the
/// form-valued Leibniz determinant of Id + t iR/2pi (entries above n vanish
/// identically and are not represented).
std::vector<ExteriorForm> chern_forms(const CurvatureTensor& R);

/// Schur polynomial P_a = det(c_{a_i - i + j}).
ChernPolynomial schur_polynomial(const Partition& a);

/// P_a(c(E,h)) as a real (k,k)-form.
ExteriorForm schur_form(const CurvatureTensor& R, const Partition& a);

/// Segre forms s_0..s_kmax; each is the all-ones Schur form and is
/// cross-checked internally against the inverse-series route.
std::vector<ExteriorForm> segre_forms(const CurvatureTensor& R, int kmax);

struct SchurDecomposition {
  std::map<Partition, Rational> coords;
  bool in_fulton_lazarsfeld_cone = false;  // all coordinates >= 0
};

/// Exact coordinates of p in the Schur basis {P_a : a in Lambda(k,r)}.
SchurDecomposition schur_basis_decompose(const ChernPolynomial& p, int k, int r);

/// Truncated polynomial n0 + n1 a + n2 a^2 in H^*(P^2) = Z[a]/(a^3).
class CohomologyElement {
 public:
  CohomologyElement() : c_{0, 0, 0} {}
  CohomologyElement(long long c0, long long c1, long long c2) : c_{c0, c1, c2} {}

  long long coeff(int deg) const { return c_.at(deg); }

  friend CohomologyElement operator+(const CohomologyElement& a, const CohomologyElement& b) {
    return {a.c_[0] + b.c_[0], a.c_[1] + b.c_[1], a.c_[2] + b.c_[2]};
  }
  friend CohomologyElement operator*(const CohomologyElement& a, const CohomologyElement& b) {
    return {a.c_[0] * b.c_[0], a.c_[0] * b.c_[1] + a.c_[1] * b.c_[0],
            a.c_[0] * b.c_[2] + a.c_[1] * b.c_[1] + a.c_[2] * b.c_[0]};
  }
  friend bool operator==(const CohomologyElement& a, const CohomologyElement& b) {
    return a.c_ == b.c_;
  }

  /// Multiplicative inverse in the truncated ring (unit constant term).
  CohomologyElement inverse() const;

 private:
  std::array<long long, 3> c_;
};

struct FultonClasses {
  CohomologyElement c1;  // (2m+4) a
  CohomologyElement c2;  // (m^2+8m+16) a^2
  CohomologyElement total;
};

/// Chern classes of Fulton's rank-2 bundle E_m on P^2 from the defining
/// short exact sequence 0 -> O(-3)^2 -> O(-1)^2 + O(m)^2 -> E_m -> 0.
FultonClasses fulton_bundle_classes(int m);

}  // namespace positools
