#include "positools/curvature.hpp"

#include <cmath>
#include <numbers>

#include "positools/rng.hpp"

namespace positools {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

MatrixXcd psd_project(const MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es((m + m.adjoint()) / 2.0);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

// partial transpose on the C^n factor, basis (j, lambda) -> j*r + lambda
MatrixXcd partial_transpose_v(const MatrixXcd& m, int n, int r) {
  MatrixXcd out(n * r, n * r);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) out(i * r + a, j * r + b) = m(j * r + a, i * r + b);
  return out;
}

RankVerdict verdict_from(double value, double tol, bool at_budget, VectorXcd witness) {
  RankVerdict v;
  v.min_value = value;
  v.at_budget = at_budget;
  if (value > tol)
    v.kind = VerdictKind::Positive;
  else if (value >= -tol)
    v.kind = VerdictKind::SemiDefinite;
  else {
    v.kind = VerdictKind::Indefinite;
    v.witness = std::move(witness);
  }
  return v;
}

}  // namespace

CurvatureTensor CurvatureTensor::from_components(int n, int r, std::vector<Complex> c, double tol) {
  if (n < 1 || r < 1 || n > 8) throw ShapeMismatch("curvature dimensions out of range");
  if (c.size() != static_cast<std::size_t>(n) * n * r * r)
    throw ShapeMismatch("coefficient array has wrong shape");
  CurvatureTensor t(n, r, std::move(c));
  double dev = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < r; ++l)
        for (int m = 0; m < r; ++m)
          dev = std::max(dev, std::abs(t.at(j, k, l, m) - std::conj(t.at(k, j, m, l))));
  if (dev > tol * std::max(1.0, t.max_abs())) throw SymmetryViolation(dev);
  return t;
}

CurvatureTensor CurvatureTensor::zero(int n, int r) {
  return from_components(n, r, std::vector<Complex>(static_cast<std::size_t>(n) * n * r * r));
}

double CurvatureTensor::max_abs() const {
  double m = 0;
  for (const Complex& v : c_) m = std::max(m, std::abs(v));
  return m;
}

MatrixXcd MatrixMap::apply(const MatrixXcd& x) const {
  if (x.rows() != n_ || x.cols() != n_) throw ShapeMismatch("map argument has wrong shape");
  MatrixXcd y = MatrixXcd::Zero(r_, r_);
  // <H(E_jk) e_l, e_m> = t[j,k,l,m] means H(E_jk)(m,l) = t[j,k,l,m]
  for (int j = 0; j < n_; ++j)
    for (int k = 0; k < n_; ++k) {
      const Complex xjk = x(j, k);
      if (xjk == Complex(0, 0)) continue;
      for (int l = 0; l < r_; ++l)
        for (int m = 0; m < r_; ++m) y(m, l) += xjk * at(j, k, l, m);
    }
  return y;
}

double MatrixMap::scale() const {
  double m = 1e-300;
  for (const Complex& v : t_) m = std::max(m, std::abs(v));
  return std::max(m, 1.0);
}

double MatrixMap::adjoint_defect() const {
  double dev = 0;
  for (int j = 0; j < n_; ++j)
    for (int k = 0; k < n_; ++k)
      for (int l = 0; l < r_; ++l)
        for (int m = 0; m < r_; ++m)
          dev = std::max(dev, std::abs(at(k, j, m, l) - std::conj(at(j, k, l, m))));
  return dev;
}

MatrixXcd pe_matrix(const CurvatureTensor& R) {
  const int n = R.n(), r = R.r();
  MatrixXcd m(n * r, n * r);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < r; ++l)
        for (int mu = 0; mu < r; ++mu) m(k * r + mu, j * r + l) = R.at(j, k, l, mu);
  return m;
}

MatrixXcd pestar_matrix(const CurvatureTensor& R) {
  const int n = R.n(), r = R.r();
  MatrixXcd m(n * r, n * r);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < r; ++l)
        for (int mu = 0; mu < r; ++mu) m(k * r + mu, j * r + l) = R.at(j, k, mu, l);
  return m;
}

MatrixMap he_map(const CurvatureTensor& R) {
  MatrixMap h(R.n(), R.r());
  for (int j = 0; j < R.n(); ++j)
    for (int k = 0; k < R.n(); ++k)
      for (int l = 0; l < R.r(); ++l)
        for (int m = 0; m < R.r(); ++m) h.at(j, k, l, m) = R.at(j, k, l, m);
  return h;
}

MatrixMap hestar_map(const CurvatureTensor& R) {
  MatrixMap h(R.n(), R.r());
  for (int j = 0; j < R.n(); ++j)
    for (int k = 0; k < R.n(); ++k)
      for (int l = 0; l < R.r(); ++l)
        for (int m = 0; m < R.r(); ++m) h.at(j, k, l, m) = R.at(j, k, m, l);
  return h;
}

MatrixXcd choi_matrix_of(const MatrixMap& h) {
  const int n = h.n(), r = h.r();
  MatrixXcd m(n * r, n * r);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < r; ++l)
        for (int mu = 0; mu < r; ++mu) m(i * r + mu, j * r + l) = h.at(i, j, l, mu);
  return m;
}

PositivityReport classify(const CurvatureTensor& R, double tol, const OptimBudget& budget,
                          std::uint64_t seed) {
  const int n = R.n(), r = R.r();
  const int kmax = std::min(n, r);
  const MatrixXcd pe = pe_matrix(R);
  const MatrixXcd pestar = pestar_matrix(R);

  PositivityReport report;
  report.k_nakano.resize(kmax);
  report.k_dual_nakano.resize(kmax);

  const auto run_levels = [&](const MatrixXcd& m, std::vector<RankVerdict>& out, std::uint64_t salt) {
    std::vector<VectorXcd> warm;
    for (int k = 1; k <= kmax; ++k) {
      const bool exact = (k == kmax);
      const RankMinResult res = min_rank_quadratic(
          m, n, r, k, budget, derive_seed(seed, salt + static_cast<std::uint64_t>(k)), warm);
      out[k - 1] = verdict_from(res.value, tol, !exact, res.minimizer);
      warm = {res.minimizer};
    }
  };
  run_levels(pe, report.k_nakano, 1000);
  run_levels(pestar, report.k_dual_nakano, 2000);

  report.nakano = report.k_nakano[kmax - 1];
  report.dual_nakano = report.k_dual_nakano[kmax - 1];
  report.griffiths = report.k_nakano[0];
  return report;
}

namespace {

FactorizationResult factor_common(const CurvatureTensor& R, FactorizationResult::Kind kind,
                                  double tol) {
  const int n = R.n(), r = R.r();
  const bool dual = kind == FactorizationResult::Kind::DualNakano;
  // dual Nakano: Choi(H^E) = pestar^T; Nakano: Choi(H^{E*}) = pe^T
  const MatrixXcd choi = dual ? MatrixXcd(pestar_matrix(R).transpose())
                              : MatrixXcd(pe_matrix(R).transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es((choi + choi.adjoint()) / 2.0);
  const double scale = std::max(1.0, R.max_abs());
  const double mineig = es.eigenvalues()(0);
  if (mineig < -tol * scale) {
    if (dual) throw NotDualNakano(mineig);
    throw NotNakano(mineig);
  }

  FactorizationResult out;
  out.kind = kind;
  for (int p = n * r - 1; p >= 0; --p) {
    const double theta = std::max(0.0, es.eigenvalues()(p));
    if (theta <= 1e-14 * scale) continue;
    const VectorXcd g = es.eigenvectors().col(p) * std::sqrt(theta);
    // form column: coefficients l[j,lambda]; Kraus factor r x n
    MatrixXcd l(n, r);
    MatrixXcd kraus(r, n);
    for (int j = 0; j < n; ++j)
      for (int lam = 0; lam < r; ++lam) {
        if (dual) {
          // a_{lam p} = sum_j l(j,lam) dz_j with l = Choi eigenvector;
          // Kraus K = A^* satisfies H(X) = sum K X K^*
          l(j, lam) = g(j * r + lam);
          kraus(lam, j) = g(j * r + lam);
        } else {
          // b_{lam p} = sum_j l(j,lam) dzbar_j with l = eigvec of pe = conj(choi eigvec)
          l(j, lam) = std::conj(g(j * r + lam));
          kraus(lam, j) = std::conj(g(j * r + lam));
        }
      }
    out.forms.push_back(std::move(l));
    out.kraus.push_back(std::move(kraus));
  }

  const CurvatureTensor rebuilt = curvature_from_forms(n, r, out.forms, kind);
  double dev = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int lam = 0; lam < r; ++lam)
        for (int mu = 0; mu < r; ++mu)
          dev = std::max(dev, std::abs(rebuilt.at(j, k, lam, mu) - R.at(j, k, lam, mu)));
  out.residual = dev;
  return out;
}

}  // namespace

FactorizationResult factor_dual_nakano(const CurvatureTensor& R, double tol) {
  return factor_common(R, FactorizationResult::Kind::DualNakano, tol);
}

FactorizationResult factor_nakano(const CurvatureTensor& R, double tol) {
  return factor_common(R, FactorizationResult::Kind::Nakano, tol);
}

CurvatureTensor curvature_from_forms(int n, int r, const std::vector<MatrixXcd>& forms,
                                     FactorizationResult::Kind kind) {
  std::vector<Complex> c(static_cast<std::size_t>(n) * n * r * r, Complex(0, 0));
  const auto idx = [&](int j, int k, int l, int m) {
    return ((static_cast<std::size_t>(j) * n + k) * r + l) * r + m;
  };
  for (const MatrixXcd& l : forms) {
    if (l.rows() != n || l.cols() != r) throw ShapeMismatch("form column has wrong shape");
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int lam = 0; lam < r; ++lam)
          for (int mu = 0; mu < r; ++mu) {
            if (kind == FactorizationResult::Kind::DualNakano)
              c[idx(j, k, lam, mu)] += l(j, mu) * std::conj(l(k, lam));
            else
              c[idx(j, k, lam, mu)] += std::conj(l(j, lam)) * l(k, mu);
          }
  }
  return CurvatureTensor::from_components(n, r, std::move(c), 1e-10);
}

CurvatureTensor random_dual_nakano(int n, int r, int N, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<MatrixXcd> forms;
  for (int p = 0; p < N; ++p) forms.push_back(rng.gaussian_matrix(n, r) / std::sqrt(std::max(1, N)));
  return curvature_from_forms(n, r, forms, FactorizationResult::Kind::DualNakano);
}

CurvatureTensor random_nakano(int n, int r, int N, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<MatrixXcd> forms;
  for (int p = 0; p < N; ++p) forms.push_back(rng.gaussian_matrix(n, r) / std::sqrt(std::max(1, N)));
  return curvature_from_forms(n, r, forms, FactorizationResult::Kind::Nakano);
}

CurvatureTensor random_hermitian(int n, int r, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Complex> c(static_cast<std::size_t>(n) * n * r * r, Complex(0, 0));
  const auto idx = [&](int j, int k, int l, int m) {
    return ((static_cast<std::size_t>(j) * n + k) * r + l) * r + m;
  };
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < r; ++l)
        for (int m = 0; m < r; ++m)
          if (idx(j, k, l, m) <= idx(k, j, m, l)) {
            Complex v = rng.complex_gaussian();
            if (j == k && l == m) v = Complex(v.real(), 0);
            c[idx(j, k, l, m)] = v;
            c[idx(k, j, m, l)] = std::conj(v);
          }
  return CurvatureTensor::from_components(n, r, std::move(c));
}

MatrixMap build_decomposable(const std::vector<MatrixXcd>& v_parts,
                             const std::vector<MatrixXcd>& w_parts, int n, int r) {
  MatrixMap h(n, r);
  for (const MatrixXcd& v : v_parts)
    if (v.rows() != r || v.cols() != n) throw ShapeMismatch("V factor must be r x n");
  for (const MatrixXcd& w : w_parts)
    if (w.rows() != r || w.cols() != n) throw ShapeMismatch("W factor must be r x n");
  // t[j,k,l,m]:  sum_p V(m,j) conj(V(l,k)) + sum_p W(m,k) conj(W(l,j))
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < r; ++l)
        for (int m = 0; m < r; ++m) {
          Complex acc(0, 0);
          for (const MatrixXcd& v : v_parts) acc += v(m, j) * std::conj(v(l, k));
          for (const MatrixXcd& w : w_parts) acc += w(m, k) * std::conj(w(l, j));
          h.at(j, k, l, m) = acc;
        }
  return h;
}

std::vector<MatrixXcd> kraus_factors_of_psd_choi(const MatrixXcd& choi, int n, int r) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es((choi + choi.adjoint()) / 2.0);
  std::vector<MatrixXcd> kraus;
  for (int p = n * r - 1; p >= 0; --p) {
    const double theta = es.eigenvalues()(p);
    if (theta <= 1e-13 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff())) continue;
    const VectorXcd g = es.eigenvectors().col(p) * std::sqrt(theta);
    MatrixXcd k(r, n);
    for (int i = 0; i < n; ++i)
      for (int mu = 0; mu < r; ++mu) k(mu, i) = g(i * r + mu);
    kraus.push_back(std::move(k));
  }
  return kraus;
}

DecomposableWitness decomposable_heuristic(const MatrixMap& h, int max_iters) {
  if (!h.preserves_adjoints(1e-10)) throw NotAdjointPreserving("heuristic needs H(A*) = H(A)*");
  const int n = h.n(), r = h.r();
  const MatrixXcd target = choi_matrix_of(h);
  const double scale = std::max(1.0, target.cwiseAbs().maxCoeff());
  // Douglas-Rachford on S1 = PSD cone, S2 = {X : (M - X)^{T_V} PSD}
  const auto proj2 = [&](const MatrixXcd& m) {
    return MatrixXcd(target - partial_transpose_v(psd_project(partial_transpose_v(target - m, n, r)), n, r));
  };
  MatrixXcd y = target / 2.0;
  MatrixXcd x = y;
  DecomposableWitness out;
  for (int it = 0; it < max_iters; ++it) {
    x = psd_project(y);
    const MatrixXcd b = proj2(2.0 * x - y);
    y += b - x;
    if ((b - x).cwiseAbs().maxCoeff() < 1e-13 * scale) break;
  }
  x = psd_project(x);
  const MatrixXcd cocp = psd_project(partial_transpose_v(target - x, n, r));
  std::vector<MatrixXcd> v_parts = kraus_factors_of_psd_choi(x, n, r);
  std::vector<MatrixXcd> w_parts;
  // co-CP part: Choi = PT(choi of CP map with factors W); recover W from PT
  for (MatrixXcd& k : kraus_factors_of_psd_choi(cocp, n, r)) w_parts.push_back(std::move(k));
  const MatrixMap rebuilt = build_decomposable(v_parts, w_parts, n, r);
  double dev = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < r; ++l)
        for (int m = 0; m < r; ++m) dev = std::max(dev, std::abs(rebuilt.at(j, k, l, m) - h.at(j, k, l, m)));
  out.residual = dev;
  if (dev <= 1e-8 * scale) {
    out.found = true;
    out.v_parts = std::move(v_parts);
    out.w_parts = std::move(w_parts);
  }
  return out;
}

CurvatureTensor dual_curvature(const CurvatureTensor& R) {
  const int n = R.n(), r = R.r();
  std::vector<Complex> c(static_cast<std::size_t>(n) * n * r * r);
  std::size_t pos = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < r; ++l)
        for (int m = 0; m < r; ++m) c[pos++] = -R.at(j, k, m, l);
  return CurvatureTensor::from_components(n, r, std::move(c));
}

CurvatureTensor conjugate_frames(const CurvatureTensor& R, const MatrixXcd& u_base,
                                 const MatrixXcd& v_bundle) {
  const int n = R.n(), r = R.r();
  if (u_base.rows() != n || u_base.cols() != n || v_bundle.rows() != r || v_bundle.cols() != r)
    throw ShapeMismatch("frame unitaries have wrong shape");
  std::vector<Complex> c(static_cast<std::size_t>(n) * n * r * r, Complex(0, 0));
  std::size_t pos = 0;
  for (int jp = 0; jp < n; ++jp)
    for (int kp = 0; kp < n; ++kp)
      for (int lp = 0; lp < r; ++lp)
        for (int mp = 0; mp < r; ++mp) {
          Complex acc(0, 0);
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              for (int l = 0; l < r; ++l)
                for (int m = 0; m < r; ++m)
                  acc += u_base(j, jp) * std::conj(u_base(k, kp)) * v_bundle(l, lp) *
                         std::conj(v_bundle(m, mp)) * R.at(j, k, l, m);
          c[pos++] = acc;
        }
  return CurvatureTensor::from_components(n, r, std::move(c), 1e-9);
}

MetricJet::MetricJet(int n, int r, std::vector<Complex> d) : n_(n), r_(r), d_(std::move(d)) {
  if (d_.size() != static_cast<std::size_t>(n) * n * r * r) throw ShapeMismatch("jet array shape");
  double dev = 0, scale = 1.0;
  for (const Complex& v : d_) scale = std::max(scale, std::abs(v));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < r; ++l)
        for (int m = 0; m < r; ++m)
          dev = std::max(dev, std::abs(at(j, k, l, m) - std::conj(at(k, j, m, l))));
  if (dev > 1e-12 * scale) throw NotAdjointPreserving("jet coefficients are not Hermitian");
}

MatrixXcd MetricJet::metric_at(const VectorXcd& z) const {
  if (z.size() != n_) throw ShapeMismatch("jet evaluated at point of wrong dimension");
  MatrixXcd h = MatrixXcd::Identity(r_, r_);
  for (int l = 0; l < r_; ++l)
    for (int m = 0; m < r_; ++m) {
      Complex acc(0, 0);
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) acc += at(j, k, l, m) * z(j) * std::conj(z(k));
      h(l, m) += acc;
    }
  return h;
}

MetricJet metric_jet(const MatrixMap& h) {
  if (!h.preserves_adjoints(1e-10)) throw NotAdjointPreserving("metric jet needs H(A*) = H(A)*");
  const int n = h.n(), r = h.r();
  std::vector<Complex> d(static_cast<std::size_t>(n) * n * r * r);
  std::size_t pos = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < r; ++l)
        for (int m = 0; m < r; ++m) d[pos++] = -kTwoPi * h.at(j, k, l, m);
  return MetricJet(n, r, std::move(d));
}

CurvatureTensor curvature_of_jet(const MetricJet& jet) {
  const int n = jet.n(), r = jet.r();
  std::vector<Complex> c(static_cast<std::size_t>(n) * n * r * r);
  std::size_t pos = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < r; ++l)
        for (int m = 0; m < r; ++m) c[pos++] = -jet.at(j, k, l, m) / kTwoPi;
  return CurvatureTensor::from_components(n, r, std::move(c));
}

CurvatureTensor curvature_from_map(const MatrixMap& h) {
  return curvature_of_jet(metric_jet(h));
}

}  // namespace positools
