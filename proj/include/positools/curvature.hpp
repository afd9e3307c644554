#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "positools/optimize.hpp"

namespace positools {

using Complex = std::complex<double>;

struct SymmetryViolation : std::invalid_argument {
  explicit SymmetryViolation(double deviation)
      : std::invalid_argument("curvature coefficients violate Hermitian symmetry"),
        max_deviation(deviation) {}
  double max_deviation;
};
struct ShapeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotAdjointPreserving : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotDualNakano : std::runtime_error {
  explicit NotDualNakano(double eig)
      : std::runtime_error("curvature is not dual Nakano non-negative"), min_choi_eigenvalue(eig) {}
  double min_choi_eigenvalue;
};
struct NotNakano : std::runtime_error {
  explicit NotNakano(double eig)
      : std::runtime_error("curvature is not Nakano non-negative"), min_choi_eigenvalue(eig) {}
  double min_choi_eigenvalue;
};

/// Coefficients c[j,k,lambda,mu] of i R^E / 2pi in unitary frames, with the
/// Hermitian symmetry c[j,k,l,m] = conj(c[k,j,m,l]). Indices are 0-based.
class CurvatureTensor {
 public:
  static CurvatureTensor from_components(int n, int r, std::vector<Complex> c, double tol = 1e-12);
  static CurvatureTensor zero(int n, int r);

  int n() const { return n_; }
  int r() const { return r_; }
  Complex at(int j, int k, int l, int m) const { return c_[idx(j, k, l, m)]; }
  const std::vector<Complex>& components() const { return c_; }

  double max_abs() const;

 private:
  CurvatureTensor(int n, int r, std::vector<Complex> c) : n_(n), r_(r), c_(std::move(c)) {}
  std::size_t idx(int j, int k, int l, int m) const {
    return ((static_cast<std::size_t>(j) * n_ + k) * r_ + l) * r_ + m;
  }
  int n_, r_;
  std::vector<Complex> c_;
};

/// A linear map H : End(C^n) -> End(C^r) stored through its value tensor
/// t[j,k,l,m] = <H(E_jk) e_l, e_m>; for curvature-derived maps t = c.
class MatrixMap {
 public:
  MatrixMap(int n, int r) : n_(n), r_(r), t_(static_cast<std::size_t>(n) * n * r * r, Complex(0, 0)) {
    if (n < 1 || r < 1) throw ShapeMismatch("map dimensions must be positive");
  }

  int n() const { return n_; }
  int r() const { return r_; }
  Complex at(int j, int k, int l, int m) const { return t_[idx(j, k, l, m)]; }
  Complex& at(int j, int k, int l, int m) { return t_[idx(j, k, l, m)]; }

  /// H(X) for an n x n argument.
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& x) const;

  /// max deviation of H(A*) - H(A)* over matrix units.
  double adjoint_defect() const;
  bool preserves_adjoints(double tol = 1e-12) const { return adjoint_defect() <= tol * scale(); }
  double scale() const;

 private:
  std::size_t idx(int j, int k, int l, int m) const {
    return ((static_cast<std::size_t>(j) * n_ + k) * r_ + l) * r_ + m;
  }
  int n_, r_;
  std::vector<Complex> t_;
};

/// Hermitian matrix of P^E on C^n (x) C^r, basis (j,lambda) -> j*r+lambda;
/// entry convention <P^E(dz_j (x) e_l), dz_k (x) e_m> = c[j,k,l,m].
Eigen::MatrixXcd pe_matrix(const CurvatureTensor& R);

/// Dual Nakano companion: same with the lambda <-> mu transposition.
Eigen::MatrixXcd pestar_matrix(const CurvatureTensor& R);

MatrixMap he_map(const CurvatureTensor& R);
MatrixMap hestar_map(const CurvatureTensor& R);

/// Choi matrix of H on C^n (x) C^r: entry [(i,mu),(j,lambda)] = t[i,j,lambda,mu].
Eigen::MatrixXcd choi_matrix_of(const MatrixMap& h);

/// Kraus factors K_p (r x n) of a PSD Choi matrix: H(X) = sum K_p X K_p^*.
std::vector<Eigen::MatrixXcd> kraus_factors_of_psd_choi(const Eigen::MatrixXcd& choi, int n, int r);

enum class VerdictKind { Positive, SemiDefinite, Indefinite };

struct RankVerdict {
  VerdictKind kind = VerdictKind::SemiDefinite;
  double min_value = 0;
  bool at_budget = false;          // decided by the sampled optimizer, not exact eigenvalues
  Eigen::VectorXcd witness;        // minimizing tensor when Indefinite
};

struct PositivityReport {
  RankVerdict griffiths, nakano, dual_nakano;
  std::vector<RankVerdict> k_nakano, k_dual_nakano;  // entry k-1 holds level k
};

PositivityReport classify(const CurvatureTensor& R, double tol = 1e-9,
                          const OptimBudget& budget = {}, std::uint64_t seed = 17);

struct FactorizationResult {
  enum class Kind { DualNakano, Nakano } kind = Kind::DualNakano;
  /// Kraus factors, r x n each: H(X) = sum V X V^* (dual Nakano) or
  /// H(X) = sum W X^T W^* (Nakano).
  std::vector<Eigen::MatrixXcd> kraus;
  /// Form coefficients, one n x r matrix per column p: entry (j, lambda) is
  /// the dz_j (dual Nakano) or dzbar_j (Nakano) coefficient of the (lambda,p)
  /// entry of A resp. B.
  std::vector<Eigen::MatrixXcd> forms;
  double residual = 0;
};

FactorizationResult factor_dual_nakano(const CurvatureTensor& R, double tol = 1e-9);
FactorizationResult factor_nakano(const CurvatureTensor& R, double tol = 1e-9);

/// Curvature with R = A ^ conj(A)^T built from N random Gaussian columns
/// (dual Nakano non-negative by construction); N = 0 gives the flat tensor.
CurvatureTensor random_dual_nakano(int n, int r, int N, std::uint64_t seed);
CurvatureTensor random_nakano(int n, int r, int N, std::uint64_t seed);

/// Generic tensor with the Hermitian symmetry and no positivity built in.
CurvatureTensor random_hermitian(int n, int r, std::uint64_t seed);

/// Rebuilds the tensor from factorization data (used for residuals/tests).
CurvatureTensor curvature_from_forms(int n, int r, const std::vector<Eigen::MatrixXcd>& forms,
                                     FactorizationResult::Kind kind);

/// H(X) = sum_p V_p X V_p^* + sum_p W_p X^T W_p^*, factors r x n.
MatrixMap build_decomposable(const std::vector<Eigen::MatrixXcd>& v_parts,
                             const std::vector<Eigen::MatrixXcd>& w_parts, int n, int r);

struct DecomposableWitness {
  bool found = false;
  std::vector<Eigen::MatrixXcd> v_parts, w_parts;
  double residual = 0;
};

/// Alternating projection onto the CP + co-CP Choi cones. A Witness is
/// certified by reconstruction residual <= 1e-8; NotFound is inconclusive.
DecomposableWitness decomposable_heuristic(const MatrixMap& h, int max_iters = 4000);

/// Curvature of (E^*, h^{E^*}): c*[j,k,l,m] = -c[j,k,m,l].
CurvatureTensor dual_curvature(const CurvatureTensor& R);

/// Frame change by unitaries U (base) and V (bundle); columns are the new
/// frame vectors in the old coordinates.
CurvatureTensor conjugate_frames(const CurvatureTensor& R, const Eigen::MatrixXcd& u_base,
                                 const Eigen::MatrixXcd& v_bundle);

/// Second-order metric jet h(f_l, f_m)(z) = delta_lm + sum d[j,k,l,m] z_j zbar_k.
class MetricJet {
 public:
  MetricJet(int n, int r, std::vector<Complex> d);
  int n() const { return n_; }
  int r() const { return r_; }
  Complex at(int j, int k, int l, int m) const { return d_[idx(j, k, l, m)]; }

  /// Gram matrix h(f_l, f_m) at the point z.
  Eigen::MatrixXcd metric_at(const Eigen::VectorXcd& z) const;

 private:
  std::size_t idx(int j, int k, int l, int m) const {
    return ((static_cast<std::size_t>(j) * n_ + k) * r_ + l) * r_ + m;
  }
  int n_, r_;
  std::vector<Complex> d_;
};

/// Jet whose Chern curvature at 0 realizes H (sign convention d = -2pi t,
/// pinned by the roundtrip test with curvature_of_jet).
MetricJet metric_jet(const MatrixMap& h);
CurvatureTensor curvature_of_jet(const MetricJet& jet);

/// Convenience: tensor with <H(dz_j (x) dz_k^*) e_l, e_m> = c[j,k,l,m].
CurvatureTensor curvature_from_map(const MatrixMap& h);

}  // namespace positools
