#include "positools/charclass.hpp"

#include <algorithm>
#include <numeric>

namespace positools {

Partition::Partition(std::vector<int> parts, int bound) : parts_(std::move(parts)), bound_(bound) {
  while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] <= 0) throw std::invalid_argument("partition parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1]) throw std::invalid_argument("partition must be non-increasing");
  }
  if (!parts_.empty() && parts_[0] > bound_) throw std::invalid_argument("partition part exceeds bound");
  weight_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

Partition Partition::transpose() const {
  std::vector<int> t;
  for (int i = 1; parts_.empty() ? false : i <= parts_[0]; ++i) {
    int count = 0;
    for (int p : parts_)
      if (p >= i) ++count;
    t.push_back(count);
  }
  return Partition(std::move(t), std::max(weight_, 1));
}

std::string Partition::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(parts_[i]);
  }
  return s + ")";
}

std::vector<Partition> Partition::lambda_set(int k, int r) {
  std::vector<Partition> out;
  std::vector<int> cur;
  const auto rec = [&](auto&& self, int remaining, int maxpart) -> void {
    if (remaining == 0) {
      out.emplace_back(cur, r);
      return;
    }
    for (int p = std::min(remaining, maxpart); p >= 1; --p) {
      cur.push_back(p);
      self(self, remaining - p, p);
      cur.pop_back();
    }
  };
  rec(rec, k, r);
  return out;
}

ChernPolynomial ChernPolynomial::constant(int rank, const Rational& c) {
  ChernPolynomial p(rank);
  p.add_term(std::vector<int>(rank, 0), c);
  return p;
}

ChernPolynomial ChernPolynomial::chern_var(int rank, int i) {
  ChernPolynomial p(rank);
  if (i == 0) return constant(rank, 1);
  if (i < 0 || i > rank) return p;  // zero by convention
  std::vector<int> e(rank, 0);
  e[i - 1] = 1;
  p.add_term(e, 1);
  return p;
}

void ChernPolynomial::add_term(const std::vector<int>& exps, const Rational& c) {
  if (static_cast<int>(exps.size()) != rank_) throw std::invalid_argument("exponent vector length");
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(exps, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

ChernPolynomial& ChernPolynomial::operator+=(const ChernPolynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

ChernPolynomial& ChernPolynomial::operator-=(const ChernPolynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

ChernPolynomial operator*(const ChernPolynomial& a, const ChernPolynomial& b) {
  ChernPolynomial out(a.rank_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      std::vector<int> e(ea);
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

ChernPolynomial operator*(const Rational& s, ChernPolynomial a) {
  ChernPolynomial out(a.rank_);
  for (const auto& [e, c] : a.terms_) out.add_term(e, s * c);
  return out;
}

int ChernPolynomial::homogeneous_weight() const {
  int k = -1;
  for (const auto& [e, c] : terms_) {
    int w = 0;
    for (std::size_t i = 0; i < e.size(); ++i) w += static_cast<int>(i + 1) * e[i];
    if (k == -1) k = w;
    if (w != k) throw NotHomogeneous("polynomial is not weighted-homogeneous");
  }
  return std::max(k, 0);
}

ExteriorForm ChernPolynomial::evaluate(const std::vector<ExteriorForm>& chern, int dim) const {
  const int k = homogeneous_weight();
  ExteriorForm out(dim, k, k);
  for (const auto& [e, c] : terms_) {
    ExteriorForm mono = ExteriorForm::scalar(dim, Complex(c.to_double(), 0));
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int rep = 0; rep < e[i]; ++rep) {
        if (i + 1 >= chern.size()) throw WeightExceedsDimension("Chern index exceeds dimension");
        mono = wedge(mono, chern[i + 1]);
      }
    out += mono;
  }
  return out;
}

std::vector<ExteriorForm> chern_forms(const CurvatureTensor& R) {
  const int n = R.n(), r = R.r();
  const int top = std::min(n, r);
  // the matrix of (1,1)-forms of iR/2pi in the scaled basis
  std::vector<std::vector<ExteriorForm>> omega(r, std::vector<ExteriorForm>(r, ExteriorForm(n, 1, 1)));
  for (int l = 0; l < r; ++l)
    for (int m = 0; m < r; ++m)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const Complex c = R.at(j, k, l, m);
          if (c != Complex(0, 0))
            omega[l][m].add_term(IndexMask{1} << j, IndexMask{1} << k, c);
        }

  std::vector<ExteriorForm> out;
  out.push_back(ExteriorForm::scalar(n, 1.0));
  for (int i = 1; i <= top; ++i) {
    ExteriorForm ci(n, i, i);
    for (IndexMask S : increasing_subsets(r, i)) {
      const auto rows = mask_to_indices(S);
      std::vector<int> perm(rows.size());
      std::iota(perm.begin(), perm.end(), 0);
      do {
        int inversions = 0;
        for (std::size_t a = 0; a < perm.size(); ++a)
          for (std::size_t b = a + 1; b < perm.size(); ++b)
            if (perm[a] > perm[b]) ++inversions;
        ExteriorForm term = ExteriorForm::scalar(n, (inversions & 1) ? -1.0 : 1.0);
        for (std::size_t a = 0; a < rows.size(); ++a)
          term = wedge(term, omega[rows[a] - 1][rows[perm[a]] - 1]);
        ci += term;
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    ci.prune(0.0);
    out.push_back(std::move(ci));
  }
  return out;
}

ChernPolynomial schur_polynomial(const Partition& a) {
  const int k = a.weight();
  const int r = a.bound();
  if (k == 0) return ChernPolynomial::constant(r, 1);
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  ChernPolynomial out(r);
  do {
    int inversions = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (perm[i] > perm[j]) ++inversions;
    ChernPolynomial term = ChernPolynomial::constant(r, (inversions & 1) ? -1 : 1);
    bool zero = false;
    for (int i = 0; i < k && !zero; ++i) {
      const int idx = a.part(i) - (i + 1) + (perm[i] + 1);
      const ChernPolynomial var = ChernPolynomial::chern_var(r, idx);
      if (var.terms().empty()) zero = true;
      term = term * var;
    }
    if (!zero) out += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

ExteriorForm schur_form(const CurvatureTensor& R, const Partition& a) {
  if (a.weight() > R.n()) throw WeightExceedsDimension("Schur weight exceeds base dimension");
  return schur_polynomial(a).evaluate(chern_forms(R), R.n());
}

std::vector<ExteriorForm> segre_forms(const CurvatureTensor& R, int kmax) {
  const int n = R.n(), r = R.r();
  if (kmax > n) throw WeightExceedsDimension("Segre degree exceeds base dimension");
  std::vector<ExteriorForm> out;
  for (int k = 0; k <= kmax; ++k)
    out.push_back(schur_form(R, Partition(std::vector<int>(k, 1), r)));

  // inverse-series cross-check: s_k = (-1)^k [degree-k term of c(E)^{-1}]
  const std::vector<ExteriorForm> c = chern_forms(R);
  std::vector<ExteriorForm> inv;
  inv.push_back(ExteriorForm::scalar(n, 1.0));
  for (int m = 1; m <= kmax; ++m) {
    ExteriorForm sm(n, m, m);
    for (int i = 1; i <= std::min<int>(m, static_cast<int>(c.size()) - 1); ++i)
      sm -= wedge(c[i], inv[m - i]);
    inv.push_back(std::move(sm));
  }
  for (int k = 0; k <= kmax; ++k) {
    ExteriorForm diff = out[k] - ((k % 2) ? -inv[k] : inv[k]);
    if (diff.max_abs() > 1e-12 * std::max(1.0, out[k].max_abs()))
      throw std::logic_error("Segre routes disagree beyond 1e-12");
  }
  return out;
}

SchurDecomposition schur_basis_decompose(const ChernPolynomial& p, int k, int r) {
  if (p.rank() != r) throw std::invalid_argument("polynomial rank mismatch");
  if (!p.terms().empty() && p.homogeneous_weight() != k)
    throw NotHomogeneous("polynomial weight differs from k");

  const std::vector<Partition> basis = Partition::lambda_set(k, r);
  // monomial index: exponent vectors of weighted degree k
  std::map<std::vector<int>, int> mono_index;
  std::vector<ChernPolynomial> schur;
  for (const Partition& a : basis) {
    schur.push_back(schur_polynomial(a));
    for (const auto& [e, c] : schur.back().terms())
      mono_index.try_emplace(e, static_cast<int>(mono_index.size()));
  }
  for (const auto& [e, c] : p.terms()) mono_index.try_emplace(e, static_cast<int>(mono_index.size()));

  const int rows = static_cast<int>(mono_index.size());
  const int cols = static_cast<int>(basis.size());
  std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(cols + 1, 0));
  for (int c = 0; c < cols; ++c)
    for (const auto& [e, coeff] : schur[c].terms()) m[mono_index[e]][c] = coeff;
  for (const auto& [e, coeff] : p.terms()) m[mono_index[e]][cols] = coeff;

  // exact Gaussian elimination
  int row = 0;
  std::vector<int> pivot_col(rows, -1);
  for (int c = 0; c < cols && row < rows; ++c) {
    int pr = -1;
    for (int i = row; i < rows; ++i)
      if (!m[i][c].is_zero()) {
        pr = i;
        break;
      }
    if (pr == -1) continue;
    std::swap(m[row], m[pr]);
    const Rational inv = Rational(1) / m[row][c];
    for (int j = c; j <= cols; ++j) m[row][j] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == row || m[i][c].is_zero()) continue;
      const Rational f = m[i][c];
      for (int j = c; j <= cols; ++j) m[i][j] -= f * m[row][j];
    }
    pivot_col[row] = c;
    ++row;
  }
  // consistency (Schur polynomials form a basis, so this must be solvable)
  for (int i = row; i < rows; ++i)
    if (!m[i][cols].is_zero()) throw std::logic_error("Schur decomposition is inconsistent");

  SchurDecomposition out;
  std::vector<Rational> x(cols, 0);
  for (int i = 0; i < row; ++i)
    if (pivot_col[i] >= 0) x[pivot_col[i]] = m[i][cols];
  out.in_fulton_lazarsfeld_cone = true;
  for (int c = 0; c < cols; ++c) {
    out.coords.emplace(basis[c], x[c]);
    if (x[c].negative()) out.in_fulton_lazarsfeld_cone = false;
  }
  return out;
}

CohomologyElement CohomologyElement::inverse() const {
  if (c_[0] != 1 && c_[0] != -1) throw std::domain_error("inverse needs a unit constant term");
  const long long u = c_[0];
  // (u + b a + c a^2)^{-1} = u - b a + (b^2 - u c) a^2 for u^2 = 1
  return {u, -c_[1], c_[1] * c_[1] * u - c_[2]};
}

FultonClasses fulton_bundle_classes(int m) {
  if (m < 1) throw std::invalid_argument("Fulton bundle index must be positive");
  const auto line = [](long long d) { return CohomologyElement(1, d, 0); };
  const CohomologyElement cA = line(-3) * line(-3);
  const CohomologyElement cB = line(-1) * line(-1);
  const CohomologyElement cC = line(m) * line(m);
  const CohomologyElement total = cB * cC * cA.inverse();
  FultonClasses out;
  out.total = total;
  out.c1 = CohomologyElement(0, total.coeff(1), 0);
  out.c2 = CohomologyElement(0, 0, total.coeff(2));
  return out;
}

}  // namespace positools
