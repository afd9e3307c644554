#include "positools/psi.hpp"

#include <algorithm>
#include <numeric>

#include "positools/discriminant.hpp"

namespace positools {

namespace {

using Eigen::MatrixXcd;

long long factorial(int n) {
  long long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

int list_sort_sign(std::vector<int>& v) {
  int sign = 1;
  for (std::size_t i = 1; i < v.size(); ++i) {
    std::size_t j = i;
    while (j > 0 && v[j] < v[j - 1]) {
      std::swap(v[j], v[j - 1]);
      sign = -sign;
      --j;
    }
  }
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] == v[i - 1]) return 0;
  return sign;
}

long long multiset_orderings(const std::vector<int>& sorted) {
  long long mults = 1;
  int run = 1;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1])
      ++run;
    else
      run = 1;
    mults *= run;  // running product of factorials of run lengths
  }
  return factorial(static_cast<int>(sorted.size())) / mults;
}

}  // namespace

SymTensor phi(int l, int n, int r, const WedgePair& x) {
  if (l > n || l > r) throw DegreeTooLarge("phi needs l <= n and l <= r");
  SymTensor out(n * r, l);
  std::vector<int> perm(l);
  for (const auto& [key, coeff] : x) {
    const auto vs = mask_to_indices(key.first);
    const auto ws = mask_to_indices(key.second);
    if (static_cast<int>(vs.size()) != l || static_cast<int>(ws.size()) != l)
      throw DegreeTooLarge("wedge factors must have degree l");
    std::iota(perm.begin(), perm.end(), 0);
    do {
      int inv = 0;
      for (int i = 0; i < l; ++i)
        for (int j = i + 1; j < l; ++j)
          if (perm[i] > perm[j]) ++inv;
      std::vector<int> pairs(l);
      for (int t = 0; t < l; ++t) pairs[t] = (vs[t] - 1) * r + (ws[perm[t]] - 1);
      std::sort(pairs.begin(), pairs.end());
      out.add(pairs, coeff * double((inv & 1) ? -1 : 1) / double(factorial(l)));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

WedgePair phi_inverse(int l, int n, int r, const SymTensor& s) {
  WedgePair out;
  for (const auto& [multiset, coeff] : s.terms()) {
    std::vector<int> va, wb;
    va.reserve(l);
    wb.reserve(l);
    for (int p : multiset) {
      va.push_back(p / r + 1);
      wb.push_back(p % r + 1);
    }
    const int sa = list_sort_sign(va);
    if (sa == 0) continue;
    const int sb = list_sort_sign(wb);
    if (sb == 0) continue;
    const IndexMask mi = indices_to_mask(va, n);
    const IndexMask mj = indices_to_mask(wb, r);
    auto [it, fresh] = out.try_emplace({mi, mj}, Complex(0, 0));
    it->second += coeff * double(sa * sb);
    if (it->second == Complex(0, 0)) out.erase(it);
  }
  return out;
}

SymTensor sym_tensor_power_apply(const MatrixXcd& p, const SymTensor& s) {
  const int d = s.d();
  const int l = s.l();
  if (p.rows() != d || p.cols() != d) throw ShapeMismatch("tensor power operator has wrong shape");
  SymTensor out(d, l);
  std::map<std::vector<int>, Complex> acc;
  for (const auto& [source, val] : s.terms()) {
    acc.clear();
    std::vector<int> ordering = source;
    std::sort(ordering.begin(), ordering.end());
    std::vector<int> target(l);
    do {
      // expand P e_{a_1} (x) ... (x) P e_{a_l}, grouping by sorted target
      const auto rec = [&](auto&& self, int slot, Complex partial) -> void {
        if (partial == Complex(0, 0)) return;
        if (slot == l) {
          std::vector<int> key = target;
          std::sort(key.begin(), key.end());
          acc[key] += partial;
          return;
        }
        for (int t = 0; t < d; ++t) {
          target[slot] = t;
          self(self, slot + 1, partial * p(t, ordering[slot]));
        }
      };
      rec(rec, 0, Complex(1, 0));
    } while (std::next_permutation(ordering.begin(), ordering.end()));
    for (const auto& [key, total] : acc) {
      // each sorted target S was hit once per ordered tuple; rescale to the
      // distinct-orderings basis element m_S
      out.add(key, val * total / double(multiset_orderings(key)));
    }
  }
  return out;
}

MatrixXcd psi_conjugate(const MatrixXcd& p, int n, int r) {
  if (r > n) throw RankExceedsDimension("psi conjugation needs r <= n");
  if (p.rows() != static_cast<long>(n) * r || p.cols() != static_cast<long>(n) * r)
    throw ShapeMismatch("operator must act on C^n (x) C^r");
  const auto subsets = increasing_subsets(n, r);
  const int dim = static_cast<int>(subsets.size());
  std::map<IndexMask, int> pos;
  for (int i = 0; i < dim; ++i) pos[subsets[i]] = i;
  const IndexMask wfull = full_mask(r);

  MatrixXcd out = MatrixXcd::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    WedgePair x;
    x[{subsets[col], wfull}] = Complex(1, 0);
    const SymTensor s = phi(r, n, r, x);
    const SymTensor ps = sym_tensor_power_apply(p, s);
    const WedgePair y = phi_inverse(r, n, r, ps);
    for (const auto& [key, coeff] : y) {
      if (key.second != wfull) continue;
      out(pos.at(key.first), col) = coeff;
    }
  }
  return out;
}

FormOperator tilde_top_chern(const CurvatureTensor& R) {
  const int n = R.n(), r = R.r();
  if (r > n) throw RankExceedsDimension("top Chern form needs r <= n");
  const MatrixXcd raw = psi_conjugate(pestar_matrix(R), n, r);
  FormOperator op;
  op.dim = n;
  op.k = r;
  op.basis = increasing_subsets(n, r);
  // bridge to the form_operator normalization: scale r!, transpose to the
  // contract-row/read-column orientation (both sides Hermitian)
  op.matrix = double(factorial(r)) * raw.transpose();
  return op;
}

double top_chern_on_plane(const CurvatureTensor& R, const ComplexPlane& L) {
  const int r = R.r();
  if (L.planedim() != r) throw PlaneDimensionMismatch("plane dimension must equal the rank");
  if (L.dim() != R.n()) throw DimensionMismatch("plane lives in wrong C^n");
  const Eigen::MatrixXcd& b = L.basis();
  MatrixMap compressed(r, r);
  for (int s = 0; s < r; ++s)
    for (int t = 0; t < r; ++t)
      for (int l = 0; l < r; ++l)
        for (int m = 0; m < r; ++m) {
          Complex acc(0, 0);
          for (int j = 0; j < R.n(); ++j)
            for (int k = 0; k < R.n(); ++k)
              acc += b(j, s) * std::conj(b(k, t)) * R.at(j, k, l, m);
          compressed.at(s, t, l, m) = acc;
        }
  return double(factorial(r)) * double_mixed_discriminant(compressed);
}

MatrixXcd horizontal_pushforward_operator(const MatrixXcd& p0h, int n, int h) {
  if (h > n) throw RankExceedsDimension("pushforward operator needs h <= n");
  return double(factorial(h)) * psi_conjugate(p0h, n, h).transpose();
}

}  // namespace positools
