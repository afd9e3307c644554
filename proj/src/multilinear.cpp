#include "positools/multilinear.hpp"

#include <algorithm>
#include <cmath>

#include "positools/parallel.hpp"
#include "positools/rng.hpp"

namespace positools {

namespace {

inline Complex ipow(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd& b) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(b);
  const int n = static_cast<int>(b.rows());
  const int k = static_cast<int>(b.cols());
  Eigen::MatrixXcd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (int i = 0; i < k; ++i)
    if (std::abs(r(i, i)) < 1e-12 * (1.0 + b.norm()))
      throw PlaneDimensionMismatch("plane basis is not linearly independent");
  return qr.householderQ() * Eigen::MatrixXcd::Identity(n, k);
}

double subset_det(const Eigen::MatrixXcd& B, IndexMask rows, Complex* out) {
  const int k = static_cast<int>(B.cols());
  Eigen::MatrixXcd sub(k, k);
  int r = 0;
  IndexMask m = rows;
  while (m) {
    const int bit = std::countr_zero(m);
    sub.row(r++) = B.row(bit);
    m &= m - 1;
  }
  *out = (k == 0) ? Complex(1, 0) : sub.determinant();
  return 0;
}

}  // namespace

ExteriorForm& ExteriorForm::operator+=(const ExteriorForm& o) {
  if (o.n_ != n_) throw DimensionMismatch("form dimensions differ");
  if (o.p_ != p_ || o.q_ != q_) throw DegreeOverflow("cannot add forms of different bidegree");
  for (const auto& [k, v] : o.terms_) add_term(k.first, k.second, v);
  return *this;
}

ExteriorForm& ExteriorForm::operator-=(const ExteriorForm& o) {
  if (o.n_ != n_) throw DimensionMismatch("form dimensions differ");
  if (o.p_ != p_ || o.q_ != q_) throw DegreeOverflow("cannot subtract forms of different bidegree");
  for (const auto& [k, v] : o.terms_) add_term(k.first, k.second, -v);
  return *this;
}

ExteriorForm& ExteriorForm::operator*=(Complex s) {
  if (s == Complex(0, 0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= s;
  return *this;
}

void ExteriorForm::prune(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= tol)
      it = terms_.erase(it);
    else
      ++it;
  }
}

ExteriorForm wedge(const ExteriorForm& a, const ExteriorForm& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("wedge of forms on different C^n");
  const int n = a.dim();
  const int p = a.pdeg() + b.pdeg();
  const int q = a.qdeg() + b.qdeg();
  if (p > n || q > n) throw DegreeOverflow("wedge degree exceeds dimension");
  ExteriorForm out(n, p, q);
  // basis rescaling: beta^a_{I1 J1} ^ beta^b_{I2 J2}
  //   = i^{p2 q1 - p1 q2} * sgn(I1,I2) * sgn(J1,J2) * beta_{I1|I2, J1|J2}
  const Complex base = ipow(b.pdeg() * a.qdeg() - a.pdeg() * b.qdeg());
  for (const auto& [ka, va] : a.terms()) {
    for (const auto& [kb, vb] : b.terms()) {
      if ((ka.first & kb.first) || (ka.second & kb.second)) continue;
      const int sgn = merge_sign(ka.first, kb.first) * merge_sign(ka.second, kb.second);
      out.add_term(ka.first | kb.first, ka.second | kb.second, va * vb * base * double(sgn));
    }
  }
  return out;
}

ExteriorForm wedge_pow(const ExteriorForm& a, int m) {
  if (m < 0) throw DegreeUnderflow("negative wedge power");
  ExteriorForm out = ExteriorForm::scalar(a.dim(), 1);
  for (int i = 0; i < m; ++i) out = wedge(out, a);
  return out;
}

ExteriorForm contract(const ExteriorForm& a, IndexMask holo_set) {
  const int m = mask_size(holo_set);
  if (m > a.pdeg()) throw DegreeUnderflow("contraction order exceeds holomorphic degree");
  ExteriorForm cur = a;
  IndexMask rest = holo_set;
  while (rest) {
    const int bit = std::countr_zero(rest);
    rest &= rest - 1;
    ExteriorForm next(cur.dim(), cur.pdeg() - 1, cur.qdeg());
    const Complex scale = ipow(cur.qdeg());  // basis factor i^{q} per step
    const IndexMask s = IndexMask{1} << bit;
    for (const auto& [k, v] : cur.terms()) {
      if (!(k.first & s)) continue;
      const int pos = std::popcount(k.first & (s - 1));
      const double sgn = (pos & 1) ? -1.0 : 1.0;
      next.add_term(k.first ^ s, k.second, v * scale * sgn);
    }
    cur = std::move(next);
  }
  return cur;
}

ExteriorForm contract(const ExteriorForm& a, const Eigen::MatrixXcd& vectors) {
  const int k = static_cast<int>(vectors.cols());
  const int n = a.dim();
  if (static_cast<int>(vectors.rows()) != n) throw DimensionMismatch("polyvector lives in wrong C^n");
  if (k > a.pdeg()) throw DegreeUnderflow("contraction order exceeds holomorphic degree");
  // expand v_1 ^ ... ^ v_k = sum_S det(V[S,:]) dz-dual_S
  ExteriorForm out(n, a.pdeg() - k, a.qdeg());
  for (IndexMask S : increasing_subsets(n, k)) {
    Complex det;
    subset_det(vectors, S, &det);
    if (det == Complex(0, 0)) continue;
    out += det * contract(a, S);
  }
  return out;
}

ExteriorForm canonical_volume(int n) {
  ExteriorForm f(n, n, n);
  f.add_term(full_mask(n), full_mask(n), Complex(1, 0));
  return f;
}

ComplexPlane::ComplexPlane(int dim, const Eigen::MatrixXcd& basis) : n_(dim) {
  if (static_cast<int>(basis.rows()) != dim || basis.cols() < 1 || basis.cols() > dim)
    throw PlaneDimensionMismatch("plane basis must be n x k with 1 <= k <= n");
  basis_ = orthonormalize(basis);
}

FormOperator form_operator(const ExteriorForm& a) {
  if (a.pdeg() != a.qdeg()) throw NotRealForm("form operator needs a (k,k)-form");
  if (!a.is_real()) throw NotRealForm("form operator needs a real form");
  const int n = a.dim();
  const int k = a.pdeg();
  FormOperator op;
  op.dim = n;
  op.k = k;
  op.basis = increasing_subsets(n, k);
  const int d = static_cast<int>(op.basis.size());
  op.matrix = Eigen::MatrixXcd::Zero(d, d);
  std::map<IndexMask, int> pos;
  for (int i = 0; i < d; ++i) pos[op.basis[i]] = i;
  for (const auto& [key, v] : a.terms()) op.matrix(pos[key.first], pos[key.second]) = v;
  return op;
}

PositivityVerdict is_positive(const ExteriorForm& a, double tol) {
  const FormOperator op = form_operator(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.matrix, Eigen::EigenvaluesOnly);
  const double mn = op.matrix.rows() == 0 ? 0.0 : es.eigenvalues().minCoeff();
  PositivityVerdict v;
  v.min_eigenvalue = mn;
  if (mn > tol)
    v.kind = Positivity::PositiveDefinite;
  else if (mn >= -tol)
    v.kind = Positivity::PositiveSemidefinite;
  else
    v.kind = Positivity::Indefinite;
  return v;
}

namespace {

// Pluecker coordinates m_I = det(B[I,:]) of an n x k frame.
std::vector<Complex> pluecker(const Eigen::MatrixXcd& B, const std::vector<IndexMask>& subsets) {
  std::vector<Complex> m(subsets.size());
  for (std::size_t i = 0; i < subsets.size(); ++i) subset_det(B, subsets[i], &m[i]);
  return m;
}

double restriction_value(const ExteriorForm& a, const Eigen::MatrixXcd& B,
                         const std::vector<IndexMask>& subsets, const std::map<IndexMask, int>& pos) {
  const std::vector<Complex> m = pluecker(B, subsets);
  Complex s(0, 0);
  for (const auto& [key, u] : a.terms())
    s += u * m[pos.at(key.first)] * std::conj(m[pos.at(key.second)]);
  return s.real();
}

}  // namespace

double restrict_to_plane(const ExteriorForm& a, const ComplexPlane& L) {
  const int k = a.pdeg();
  if (a.pdeg() != a.qdeg() || L.planedim() != k)
    throw PlaneDimensionMismatch("restriction needs a (k,k)-form and a k-plane");
  if (L.dim() != a.dim()) throw DimensionMismatch("plane lives in wrong C^n");
  const auto subsets = increasing_subsets(a.dim(), k);
  std::map<IndexMask, int> pos;
  for (std::size_t i = 0; i < subsets.size(); ++i) pos[subsets[i]] = static_cast<int>(i);
  const std::vector<Complex> m = pluecker(L.basis(), subsets);
  Complex s(0, 0);
  for (const auto& [key, u] : a.terms())
    s += u * m[pos.at(key.first)] * std::conj(m[pos.at(key.second)]);
  const double scale = std::max(1.0, a.max_abs());
  if (std::abs(s.imag()) > 1e-10 * scale)
    throw NonRealRestriction("restriction has imaginary residue; input form is not real");
  return s.real();
}

namespace {

// Wirtinger gradient of s(B) with respect to conj(B).
Eigen::MatrixXcd restriction_gradient(const ExteriorForm& a, const Eigen::MatrixXcd& B,
                                      const std::vector<IndexMask>& subsets,
                                      const std::map<IndexMask, int>& pos) {
  const int n = static_cast<int>(B.rows());
  const int k = static_cast<int>(B.cols());
  const std::vector<Complex> m = pluecker(B, subsets);
  // row sums: for each J, w_J = sum_I u_{IJ} m_I
  std::vector<Complex> w(subsets.size(), Complex(0, 0));
  for (const auto& [key, u] : a.terms()) w[pos.at(key.second)] += u * m[pos.at(key.first)];
  Eigen::MatrixXcd grad = Eigen::MatrixXcd::Zero(n, k);
  // d mbar_J / d conj(B_{jt}) = conj(cofactor)
  for (std::size_t jidx = 0; jidx < subsets.size(); ++jidx) {
    if (w[jidx] == Complex(0, 0)) continue;
    const IndexMask J = subsets[jidx];
    const auto rows = mask_to_indices(J);
    Eigen::MatrixXcd sub(k, k);
    for (int r = 0; r < k; ++r) sub.row(r) = B.row(rows[r] - 1);
    for (int r = 0; r < k; ++r) {
      for (int t = 0; t < k; ++t) {
        Eigen::MatrixXcd minor(k - 1, k - 1);
        for (int rr = 0, ri = 0; rr < k; ++rr) {
          if (rr == r) continue;
          for (int cc = 0, ci = 0; cc < k; ++cc) {
            if (cc == t) continue;
            minor(ri, ci) = sub(rr, cc);
            ++ci;
          }
          ++ri;
        }
        const double sgn = ((r + t) & 1) ? -1.0 : 1.0;
        const Complex cof = (k == 1) ? Complex(1, 0) : sgn * minor.determinant();
        grad(rows[r] - 1, t) += w[jidx] * std::conj(cof);
      }
    }
  }
  return grad;
}

}  // namespace

WeakVerdict is_weakly_positive(const ExteriorForm& a, const WeakBudget& budget, std::uint64_t seed,
                               double tol) {
  if (a.pdeg() != a.qdeg()) throw NotRealForm("weak positivity needs a (k,k)-form");
  if (!a.is_real()) throw NotRealForm("weak positivity needs a real form");
  const int n = a.dim();
  const int k = a.pdeg();
  WeakVerdict verdict;
  if (budget.starts <= 0) {
    verdict.kind = WeakVerdict::Kind::Inconclusive;
    return verdict;
  }
  const auto subsets = increasing_subsets(n, k);
  std::map<IndexMask, int> pos;
  for (std::size_t i = 0; i < subsets.size(); ++i) pos[subsets[i]] = static_cast<int>(i);

  struct Result {
    double value = 0;
    Eigen::MatrixXcd frame;
  };
  std::vector<Result> results(budget.starts);
  parallel_for(budget.starts, [&](std::size_t start) {
    Rng rng(derive_seed(seed, start));
    Eigen::MatrixXcd B = orthonormalize(rng.gaussian_matrix(n, k));
    double val = restriction_value(a, B, subsets, pos);
    const double scale = std::max(1.0, a.max_abs());
    for (int it = 0; it < budget.iters; ++it) {
      const Eigen::MatrixXcd g = restriction_gradient(a, B, subsets, pos);
      const double gn = g.norm();
      if (gn < 1e-13 * scale) break;
      double step = 0.5 / (1.0 + gn);
      bool moved = false;
      for (int half = 0; half < 25; ++half) {
        Eigen::MatrixXcd cand = orthonormalize(B - step * g);
        const double cval = restriction_value(a, cand, subsets, pos);
        if (cval < val - 1e-16 * scale) {
          B = std::move(cand);
          val = cval;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    results[start] = {val, B};
  });

  int best = 0;
  for (int i = 1; i < budget.starts; ++i)
    if (results[i].value < results[best].value) best = i;
  verdict.min_value = results[best].value;
  if (verdict.min_value < -tol) {
    ComplexPlane witness(n, results[best].frame);
    // soundness: re-evaluate through the public restriction path
    if (restrict_to_plane(a, witness) < -tol) {
      verdict.kind = WeakVerdict::Kind::Refuted;
      verdict.witness = std::move(witness);
      return verdict;
    }
  }
  verdict.kind = WeakVerdict::Kind::NonNegativeOnSamples;
  return verdict;
}

}  // namespace positools
