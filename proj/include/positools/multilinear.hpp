#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "positools/bits.hpp"

namespace positools {

using Complex = std::complex<double>;

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegreeOverflow : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegreeUnderflow : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotRealForm : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct PlaneDimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NonRealRestriction : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A (p,q)-form on C^n at a point, with sparse complex coefficients.
///
/// Coefficients are stored over the scaled monomial basis
///     beta_{I,J} := i^{pq} dz_I ^ dzbar_J,
/// I, J strictly increasing index sets encoded as bitmasks. In this basis
/// conjugation swaps (I,J) and conjugates the coefficient, so a (k,k)-form
/// is real exactly when its coefficient matrix is Hermitian, and the
/// standard simple positive forms i^{k^2} dz_I ^ dzbar_I have coefficient 1.
class ExteriorForm {
 public:
  using Key = std::pair<IndexMask, IndexMask>;

  ExteriorForm(int dim, int p, int q) : n_(dim), p_(p), q_(q) {
    if (dim < 1 || dim > 8) throw DimensionMismatch("dimension must be in 1..8");
    if (p < 0 || q < 0 || p > dim || q > dim) throw DegreeOverflow("bidegree outside 0..n");
  }

  static ExteriorForm scalar(int dim, Complex value) {
    ExteriorForm f(dim, 0, 0);
    f.add_term(0, 0, value);
    return f;
  }

  /// value * beta_{I,J}; I and J given as strictly increasing 1-based lists.
  static ExteriorForm monomial(int dim, const std::vector<int>& I, const std::vector<int>& J,
                               Complex value = Complex(1, 0)) {
    ExteriorForm f(dim, static_cast<int>(I.size()), static_cast<int>(J.size()));
    f.add_term(indices_to_mask(I, dim), indices_to_mask(J, dim), value);
    return f;
  }

  int dim() const { return n_; }
  int pdeg() const { return p_; }
  int qdeg() const { return q_; }

  const std::map<Key, Complex>& terms() const { return terms_; }

  Complex coeff(IndexMask I, IndexMask J) const {
    const auto it = terms_.find({I, J});
    return it == terms_.end() ? Complex(0, 0) : it->second;
  }

  void add_term(IndexMask I, IndexMask J, Complex value) {
    if (mask_size(I) != p_ || mask_size(J) != q_) throw DegreeOverflow("term degree mismatch");
    auto [it, inserted] = terms_.try_emplace({I, J}, value);
    if (!inserted) it->second += value;
    if (it->second == Complex(0, 0)) terms_.erase(it);
  }

  bool is_zero() const { return terms_.empty(); }
  double max_abs() const {
    double m = 0;
    for (const auto& [k, v] : terms_) m = std::max(m, std::abs(v));
    return m;
  }

  ExteriorForm conjugate() const {
    ExteriorForm out(n_, q_, p_);
    for (const auto& [k, v] : terms_) out.add_term(k.second, k.first, std::conj(v));
    return out;
  }

  bool is_real(double tol = 1e-12) const {
    if (p_ != q_) return false;
    for (const auto& [k, v] : terms_)
      if (std::abs(v - std::conj(coeff(k.second, k.first))) > tol) return false;
    return true;
  }

  ExteriorForm& operator+=(const ExteriorForm& o);
  ExteriorForm& operator-=(const ExteriorForm& o);
  ExteriorForm& operator*=(Complex s);

  friend ExteriorForm operator+(ExteriorForm a, const ExteriorForm& b) { return a += b; }
  friend ExteriorForm operator-(ExteriorForm a, const ExteriorForm& b) { return a -= b; }
  friend ExteriorForm operator*(Complex s, ExteriorForm a) { return a *= s; }
  friend ExteriorForm operator*(ExteriorForm a, Complex s) { return a *= s; }
  friend ExteriorForm operator-(ExteriorForm a) { return a *= Complex(-1, 0); }

  /// Drops terms with |coeff| <= tol (cleanup after float arithmetic).
  void prune(double tol);

 private:
  int n_, p_, q_;
  std::map<Key, Complex> terms_;
};

ExteriorForm wedge(const ExteriorForm& a, const ExteriorForm& b);
ExteriorForm wedge_pow(const ExteriorForm& a, int m);

/// Contraction against the decomposable holomorphic polyvector
/// dz-dual of the index set S; convention: for S = (s_1 < ... < s_m),
/// iota_{v_1^...^v_m} = iota_{v_m} o ... o iota_{v_1}, single contractions
/// acting on the leftmost matching slot with shuffle sign.
ExteriorForm contract(const ExteriorForm& a, IndexMask holo_set);

/// Contraction against v_1 ^ ... ^ v_k for arbitrary vectors (columns).
ExteriorForm contract(const ExteriorForm& a, const Eigen::MatrixXcd& vectors);

/// (i)^{n^2} (dz_1^...^dz_n)^(dzbar_1^...^dzbar_n); restricts to 1 on C^n.
ExteriorForm canonical_volume(int n);

/// A k-dimensional complex plane in C^n; the stored basis is orthonormal.
class ComplexPlane {
 public:
  ComplexPlane(int dim, const Eigen::MatrixXcd& basis);
  int dim() const { return n_; }
  int planedim() const { return static_cast<int>(basis_.cols()); }
  const Eigen::MatrixXcd& basis() const { return basis_; }

 private:
  int n_;
  Eigen::MatrixXcd basis_;
};

/// Hermitian operator on Lambda^k C^n attached to a real (k,k)-form; the
/// basis is increasing_subsets(n,k) in ascending mask order.
struct FormOperator {
  int dim = 0;
  int k = 0;
  Eigen::MatrixXcd matrix;
  std::vector<IndexMask> basis;
};

/// Coefficient-matrix operator of a real (k,k)-form, normalized so that
/// i dz1^dzbar1 on C^1 maps to [1].
FormOperator form_operator(const ExteriorForm& a);

enum class Positivity { PositiveDefinite, PositiveSemidefinite, Indefinite };

struct PositivityVerdict {
  Positivity kind = Positivity::Indefinite;
  double min_eigenvalue = 0;
};

PositivityVerdict is_positive(const ExteriorForm& a, double tol);

/// Scalar s with a|_L = s * dv_L; throws NonRealRestriction if the imaginary
/// residue exceeds 1e-10 (signals a non-real input form).
double restrict_to_plane(const ExteriorForm& a, const ComplexPlane& L);

struct WeakBudget {
  int starts = 512;
  int iters = 120;
};

struct WeakVerdict {
  enum class Kind { NonNegativeOnSamples, Refuted, Inconclusive } kind = Kind::Inconclusive;
  double min_value = 0;
  std::optional<ComplexPlane> witness;
};

/// Minimizes restrict_to_plane(a, L) over the Grassmannian by random-start
/// local descent. Refuted is sound (witness re-checked); NonNegativeOnSamples
/// only certifies the sampled minimum.
WeakVerdict is_weakly_positive(const ExteriorForm& a, const WeakBudget& budget, std::uint64_t seed,
                               double tol = 1e-9);

}  // namespace positools
