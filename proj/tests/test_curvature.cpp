#include <doctest.h>

#include <Eigen/Dense>
#include <numbers>

#include "positools/curvature.hpp"
#include "positools/rng.hpp"

using namespace positools;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

CurvatureTensor random_hermitian_tensor(Rng& rng, int n, int r) {
  std::vector<Complex> c(static_cast<std::size_t>(n) * n * r * r);
  const auto idx = [&](int j, int k, int l, int m) {
    return ((static_cast<std::size_t>(j) * n + k) * r + l) * r + m;
  };
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < r; ++l)
        for (int m = 0; m < r; ++m) {
          if (idx(j, k, l, m) <= idx(k, j, m, l)) {
            Complex v = rng.complex_gaussian();
            if (j == k && l == m) v = Complex(v.real(), 0);
            c[idx(j, k, l, m)] = v;
            c[idx(k, j, m, l)] = std::conj(v);
          }
        }
  return CurvatureTensor::from_components(n, r, std::move(c));
}

MatrixMap random_adjoint_preserving_map(Rng& rng, int n, int r) {
  const CurvatureTensor t = random_hermitian_tensor(rng, n, r);
  return he_map(t);
}

// tr(X) I - p X  (k-positive, not (k+1)-positive, for p strictly between
// 1/(k+1) and 1/k; Choi = I - p |Omega><Omega| gives exact rank-k minima 1 - p k)
MatrixMap scaled_reduction_family(int n, double p) {
  MatrixMap h(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m)
          h.at(j, k, l, m) = (j == k && l == m ? 1.0 : 0.0) - p * (j == m && k == l ? 1.0 : 0.0);
  return h;
}

// Wirtinger finite-difference curvature of a metric jet: independent of the
// analytic route inside curvature_of_jet.
Complex fd_curvature_entry(const MetricJet& jet, int j, int k, int lam, int nu) {
  const int n = jet.n();
  const double h = 1e-5;
  const auto theta_j = [&](const VectorXcd& z) -> MatrixXcd {
    // dH/dz_j at z by complex central differences, then times H^{-1}
    VectorXcd zp = z, zm = z, zip = z, zim = z;
    zp(j) += h;
    zm(j) -= h;
    zip(j) += Complex(0, h);
    zim(j) -= Complex(0, h);
    const MatrixXcd dx = (jet.metric_at(zp) - jet.metric_at(zm)) / (2 * h);
    const MatrixXcd dy = (jet.metric_at(zip) - jet.metric_at(zim)) / (2 * h);
    const MatrixXcd dH = (dx - Complex(0, 1) * dy) / 2.0;
    return dH * jet.metric_at(z).inverse();
  };
  VectorXcd z0 = VectorXcd::Zero(n);
  VectorXcd zp = z0, zm = z0, zip = z0, zim = z0;
  zp(k) += h;
  zm(k) -= h;
  zip(k) += Complex(0, h);
  zim(k) -= Complex(0, h);
  const MatrixXcd dx = (theta_j(zp) - theta_j(zm)) / (2 * h);
  const MatrixXcd dy = (theta_j(zip) - theta_j(zim)) / (2 * h);
  const MatrixXcd dbar = (dx + Complex(0, 1) * dy) / 2.0;
  // R^nu_lam (dz_j ^ dzbar_k coefficient) = -dbar_k (dH/dz_j H^{-1})_{lam,nu}
  return -dbar(lam, nu) / (2.0 * std::numbers::pi);
}

}  // namespace

TEST_CASE("from_components: validation anchors") {
  CHECK(CurvatureTensor::zero(2, 2).max_abs() == 0);
  CHECK(CurvatureTensor::from_components(1, 1, {Complex(1, 0)}).at(0, 0, 0, 0) == Complex(1, 0));
  // c[1,2,1,1] = 1 with c[2,1,1,1] = 0 violates the symmetry relation
  std::vector<Complex> c(2 * 2 * 1 * 1, Complex(0, 0));
  c[0 * 2 + 1] = Complex(1, 0);
  CHECK_THROWS_AS(CurvatureTensor::from_components(2, 1, std::move(c)), SymmetryViolation);
}

TEST_CASE("pe_matrix: anchors and single-column Gram oracle") {
  CHECK(pe_matrix(CurvatureTensor::from_components(1, 1, {Complex(1, 0)}))(0, 0) == Complex(1, 0));
  CHECK(pe_matrix(CurvatureTensor::zero(2, 3)).cwiseAbs().maxCoeff() == 0);

  // single Kraus column: brute-force expansion oracle
  Rng rng(3);
  const int n = 2, r = 2;
  const MatrixXcd l = rng.gaussian_matrix(n, r);
  const CurvatureTensor R = curvature_from_forms(n, r, {l}, FactorizationResult::Kind::DualNakano);
  const MatrixXcd pe = pe_matrix(R);
  MatrixXcd expected(n * r, n * r);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int lam = 0; lam < r; ++lam)
        for (int mu = 0; mu < r; ++mu)
          expected(k * r + mu, j * r + lam) = l(j, mu) * std::conj(l(k, lam));
  CHECK((pe - expected).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((pe - pe.adjoint()).cwiseAbs().maxCoeff() < 1e-14);

  // pestar is the lambda<->mu transposition of pe
  const MatrixXcd ps = pestar_matrix(R);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int lam = 0; lam < r; ++lam)
        for (int mu = 0; mu < r; ++mu)
          CHECK(ps(k * r + mu, j * r + lam) == R.at(j, k, mu, lam));
}

TEST_CASE("he_map: defining relation and adjoint preservation") {
  Rng rng(5);
  const CurvatureTensor R = random_hermitian_tensor(rng, 3, 2);
  const MatrixMap h = he_map(R);
  CHECK(h.preserves_adjoints());
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      MatrixXcd e = MatrixXcd::Zero(3, 3);
      e(j, k) = 1;
      const MatrixXcd y = h.apply(e);
      for (int l = 0; l < 2; ++l)
        for (int m = 0; m < 2; ++m) CHECK(std::abs(y(m, l) - R.at(j, k, l, m)) < 1e-14);
    }
  // identity anchor: n=r=1, c=1 gives H(x) = x
  const MatrixMap h1 = he_map(CurvatureTensor::from_components(1, 1, {Complex(1, 0)}));
  MatrixXcd one(1, 1);
  one(0, 0) = Complex(2, 3);
  CHECK(h1.apply(one)(0, 0) == Complex(2, 3));
  // flat gives the zero map
  const MatrixMap h0 = he_map(CurvatureTensor::zero(2, 2));
  CHECK(h0.apply(MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("choi bridge: pestar equals Choi(he)^T and pe equals Choi(hestar)^T") {
  Rng rng(7);
  const CurvatureTensor R = random_hermitian_tensor(rng, 3, 2);
  const MatrixXcd choi_he = choi_matrix_of(he_map(R));
  CHECK((pestar_matrix(R) - choi_he.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  const MatrixXcd choi_hestar = choi_matrix_of(hestar_map(R));
  CHECK((pe_matrix(R) - choi_hestar.transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("classify: trivial anchors") {
  const auto rep = classify(CurvatureTensor::from_components(1, 1, {Complex(1, 0)}));
  CHECK(rep.griffiths.kind == VerdictKind::Positive);
  CHECK(rep.nakano.kind == VerdictKind::Positive);
  CHECK(rep.dual_nakano.kind == VerdictKind::Positive);
}

TEST_CASE("classify: random dual-Nakano tensors are at least semidefinite") {
  for (int trial = 0; trial < 5; ++trial) {
    const CurvatureTensor R = random_dual_nakano(2, 2, 4, 100 + trial);
    const auto rep = classify(R);
    CHECK(rep.dual_nakano.kind != VerdictKind::Indefinite);
    // eigenvalue cross-check
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(pestar_matrix(R), Eigen::EigenvaluesOnly);
    CHECK(rep.dual_nakano.min_value == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-10));
    // dual Nakano implies Griffiths
    CHECK(rep.griffiths.min_value >= -1e-9);
  }
}

TEST_CASE("classify: k-positive family has exact frozen rank-k minima") {
  // p strictly between 1/(k+1) and 1/k: k-positive, not (k+1)-positive
  const int n = 3, k = 1;
  const double p = (2.0 * k + 1) / (2.0 * k * (k + 1));
  const MatrixMap h = scaled_reduction_family(n, p);
  const CurvatureTensor R = curvature_from_map(h);
  OptimBudget budget;
  budget.restarts = 48;
  const auto rep = classify(R, 1e-9, budget);
  // dual Nakano levels mirror k-positivity of H^E = H
  CHECK(rep.k_dual_nakano[0].kind == VerdictKind::Positive);
  CHECK(rep.k_dual_nakano[0].min_value == doctest::Approx(1.0 - p * 1).epsilon(1e-7));
  CHECK(rep.k_dual_nakano[1].kind == VerdictKind::Indefinite);
  CHECK(rep.k_dual_nakano[1].min_value == doctest::Approx(1.0 - p * 2).epsilon(1e-7));
  CHECK(rep.k_dual_nakano[2].min_value == doctest::Approx(1.0 - p * 3).epsilon(1e-10));
  // transposed family lands in the Nakano column
  const CurvatureTensor Rt = curvature_from_map(hestar_map(R));
  const auto rept = classify(Rt, 1e-9, budget);
  CHECK(rept.k_nakano[0].kind == VerdictKind::Positive);
  CHECK(rept.k_nakano[1].kind == VerdictKind::Indefinite);
}

TEST_CASE("classify: k-verdict minima are monotone non-increasing in k") {
  Rng rng(11);
  for (int trial = 0; trial < 4; ++trial) {
    const CurvatureTensor R = random_hermitian_tensor(rng, 3, 3);
    OptimBudget budget;
    budget.restarts = 24;
    const auto rep = classify(R, 1e-9, budget, 55 + trial);
    for (std::size_t i = 1; i < rep.k_nakano.size(); ++i) {
      CHECK(rep.k_nakano[i].min_value <= rep.k_nakano[i - 1].min_value + 1e-12);
      CHECK(rep.k_dual_nakano[i].min_value <= rep.k_dual_nakano[i - 1].min_value + 1e-12);
    }
    // indefinite witnesses certify their verdicts
    const MatrixXcd pe = pe_matrix(R);
    for (const auto& v : rep.k_nakano)
      if (v.kind == VerdictKind::Indefinite) {
        const double val = (v.witness.adjoint() * pe * v.witness)(0).real();
        CHECK(val < 0);
      }
  }
}

TEST_CASE("classify: unitary frame covariance of verdicts") {
  Rng rng(13);
  const CurvatureTensor R = random_dual_nakano(2, 2, 2, 77);
  const CurvatureTensor Rc = conjugate_frames(R, rng.unitary(2), rng.unitary(2));
  const auto a = classify(R);
  const auto b = classify(Rc);
  CHECK(a.nakano.min_value == doctest::Approx(b.nakano.min_value).epsilon(1e-8));
  CHECK(a.dual_nakano.min_value == doctest::Approx(b.dual_nakano.min_value).epsilon(1e-8));
  CHECK(std::abs(a.griffiths.min_value - b.griffiths.min_value) < 1e-6);
}

TEST_CASE("factor_dual_nakano: anchors") {
  // flat -> zero factorization
  const auto flat = factor_dual_nakano(CurvatureTensor::zero(2, 2));
  CHECK(flat.forms.empty());
  CHECK(flat.residual == 0);

  // known single-column construction: product is recovered within 1e-10
  Rng rng(17);
  const MatrixXcd l0 = rng.gaussian_matrix(3, 2);
  const CurvatureTensor R = curvature_from_forms(3, 2, {l0}, FactorizationResult::Kind::DualNakano);
  const auto fac = factor_dual_nakano(R);
  CHECK(fac.residual <= 1e-10);
  CHECK(static_cast<int>(fac.forms.size()) <= 3 * 2);

  // Kraus factors reproduce he_map: t[j,k,l,m] = sum_p K[m,j] conj(K[l,k])
  const MatrixMap h = he_map(R);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k)
      for (int lam = 0; lam < 2; ++lam)
        for (int mu = 0; mu < 2; ++mu) {
          Complex acc(0, 0);
          for (const MatrixXcd& kr : fac.kraus) acc += kr(mu, j) * std::conj(kr(lam, k));
          CHECK(std::abs(acc - h.at(j, k, lam, mu)) < 1e-10);
        }
}

TEST_CASE("factor_dual_nakano: rejects Nakano-but-not-dual-Nakano input") {
  const CurvatureTensor R = random_nakano(2, 2, 2, 31);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(pestar_matrix(R), Eigen::EigenvaluesOnly);
  REQUIRE(es.eigenvalues()(0) < -1e-6);  // generic Nakano tensor is not dual Nakano
  CHECK_THROWS_AS(factor_dual_nakano(R), NotDualNakano);
}

TEST_CASE("factor_nakano: mirrors via the transposed Choi matrix") {
  Rng rng(19);
  const MatrixXcd m0 = rng.gaussian_matrix(3, 2);
  const CurvatureTensor R = curvature_from_forms(3, 2, {m0}, FactorizationResult::Kind::Nakano);
  const auto fac = factor_nakano(R);
  CHECK(fac.residual <= 1e-10);
  // Kraus reproduce he_map through H(X) = sum W X^T W^*
  const MatrixMap h = he_map(R);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k)
      for (int lam = 0; lam < 2; ++lam)
        for (int mu = 0; mu < 2; ++mu) {
          Complex acc(0, 0);
          for (const MatrixXcd& w : fac.kraus) acc += w(mu, k) * std::conj(w(lam, j));
          CHECK(std::abs(acc - h.at(j, k, lam, mu)) < 1e-10);
        }

  const CurvatureTensor Rd = random_dual_nakano(2, 2, 2, 33);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(pe_matrix(Rd), Eigen::EigenvaluesOnly);
  REQUIRE(es.eigenvalues()(0) < -1e-6);
  CHECK_THROWS_AS(factor_nakano(Rd), NotNakano);
}

TEST_CASE("random generators: determinism and flat edge") {
  CHECK(random_dual_nakano(2, 2, 0, 1).max_abs() == 0);
  const CurvatureTensor a = random_dual_nakano(3, 2, 4, 42);
  const CurvatureTensor b = random_dual_nakano(3, 2, 4, 42);
  for (std::size_t i = 0; i < a.components().size(); ++i)
    CHECK(a.components()[i] == b.components()[i]);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(pestar_matrix(a), Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues()(0) >= -1e-12);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> esn(pe_matrix(random_nakano(3, 2, 4, 43)),
                                               Eigen::EigenvaluesOnly);
  CHECK(esn.eigenvalues()(0) >= -1e-12);
}

TEST_CASE("build_decomposable: anchors and per-part Choi certificates") {
  const int n = 2, r = 2;
  const MatrixXcd id = MatrixXcd::Identity(r, n);
  const MatrixMap hid = build_decomposable({id}, {}, n, r);
  MatrixXcd x(2, 2);
  x << Complex(1, 1), Complex(0, 2), Complex(3, 0), Complex(-1, 4);
  CHECK((hid.apply(x) - x).cwiseAbs().maxCoeff() < 1e-15);
  const MatrixMap ht = build_decomposable({}, {id}, n, r);
  CHECK((ht.apply(x) - x.transpose()).cwiseAbs().maxCoeff() < 1e-15);

  Rng rng(23);
  const MatrixMap hcp = build_decomposable({rng.gaussian_matrix(r, n), rng.gaussian_matrix(r, n)},
                                           {}, n, r);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> e1(choi_matrix_of(hcp), Eigen::EigenvaluesOnly);
  CHECK(e1.eigenvalues()(0) >= -1e-12);
  const MatrixMap hco = build_decomposable({}, {rng.gaussian_matrix(r, n)}, n, r);
  // co-CP part: partial transpose of the Choi matrix is PSD
  const MatrixXcd choi = choi_matrix_of(hco);
  MatrixXcd pt(n * r, n * r);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) pt(i * r + a, j * r + b) = choi(j * r + a, i * r + b);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> e2(pt, Eigen::EigenvaluesOnly);
  CHECK(e2.eigenvalues()(0) >= -1e-12);
  CHECK(hcp.preserves_adjoints());
  CHECK(hco.preserves_adjoints());

  CHECK_THROWS_AS(build_decomposable({MatrixXcd::Identity(3, 2)}, {}, 2, 2), ShapeMismatch);
}

TEST_CASE("decomposable_heuristic: identity and transpose produce witnesses") {
  const int n = 2, r = 2;
  const MatrixXcd id = MatrixXcd::Identity(r, n);
  const auto wid = decomposable_heuristic(build_decomposable({id}, {}, n, r));
  CHECK(wid.found);
  CHECK(wid.residual <= 1e-8);
  const auto wt = decomposable_heuristic(build_decomposable({}, {id}, n, r));
  CHECK(wt.found);
  // random decomposable maps are recovered
  Rng rng(29);
  const MatrixMap h = build_decomposable({rng.gaussian_matrix(r, n)}, {rng.gaussian_matrix(r, n)},
                                         n, r);
  const auto w = decomposable_heuristic(h);
  CHECK(w.found);
  CHECK(w.residual <= 1e-8 * h.scale());
}

TEST_CASE("dual_curvature: anchors, involution, verdict swap") {
  const CurvatureTensor one = CurvatureTensor::from_components(1, 1, {Complex(1, 0)});
  CHECK(dual_curvature(one).at(0, 0, 0, 0) == Complex(-1, 0));

  Rng rng(31);
  const CurvatureTensor R = random_hermitian_tensor(rng, 2, 3);
  const CurvatureTensor RR = dual_curvature(dual_curvature(R));
  for (std::size_t i = 0; i < R.components().size(); ++i)
    CHECK(R.components()[i] == RR.components()[i]);

  // Nakano non-negative tensor has dual-Nakano non-positive dual
  const CurvatureTensor Rn = random_nakano(2, 2, 3, 59);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(pestar_matrix(dual_curvature(Rn)),
                                              Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().maxCoeff() <= 1e-12);

  // he_map(dual R) = -transpose o he_map(R)
  const MatrixMap h = he_map(R);
  const MatrixMap hd = he_map(dual_curvature(R));
  MatrixXcd x = rng.gaussian_matrix(2, 2);
  CHECK((hd.apply(x) + h.apply(x).transpose()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("metric_jet: anchors and the differentiation oracle") {
  // H = 0 -> flat curvature
  const MatrixMap zero = he_map(CurvatureTensor::zero(2, 2));
  CHECK(curvature_of_jet(metric_jet(zero)).max_abs() == 0);

  // H = id pattern via the finite-difference oracle
  const int n = 2, r = 2;
  MatrixMap hid(n, r);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < r; ++l)
        for (int m = 0; m < r; ++m)
          hid.at(j, k, l, m) = (j == l && k == m) ? 1.0 : 0.0;  // <E_jk e_l, e_m> = d_jl d_km
  const MetricJet jet = metric_jet(hid);
  const CurvatureTensor R = curvature_of_jet(jet);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < r; ++l)
        for (int m = 0; m < r; ++m)
          CHECK(std::abs(R.at(j, k, l, m) - fd_curvature_entry(jet, j, k, l, m)) < 1e-8);
}

TEST_CASE("metric_jet: roundtrip reproduces the map exactly on random inputs") {
  Rng rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 3;
    const int r = 1 + (trial / 3) % 3;
    const MatrixMap h = random_adjoint_preserving_map(rng, n, r);
    const CurvatureTensor R = curvature_from_map(h);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < r; ++l)
          for (int m = 0; m < r; ++m)
            CHECK(std::abs(R.at(j, k, l, m) - h.at(j, k, l, m)) < 1e-14);
  }
  // the jet differentiation oracle validates the sign convention on a random case
  const MatrixMap h = random_adjoint_preserving_map(rng, 2, 2);
  const MetricJet jet = metric_jet(h);
  const CurvatureTensor R = curvature_of_jet(jet);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      CHECK(std::abs(R.at(j, k, 0, 1) - fd_curvature_entry(jet, j, k, 0, 1)) < 1e-7);
}

TEST_CASE("metric_jet rejects non-adjoint-preserving maps") {
  MatrixMap bad(2, 2);
  bad.at(0, 1, 0, 0) = Complex(1, 0);  // missing the conjugate partner
  CHECK_THROWS_AS(metric_jet(bad), NotAdjointPreserving);
}
