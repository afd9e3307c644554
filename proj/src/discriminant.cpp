#include "positools/discriminant.hpp"

#include <algorithm>
#include <numeric>

#include "positools/rng.hpp"

namespace positools {

namespace {

using Eigen::MatrixXcd;

long long factorial(int n) {
  long long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

int permutation_sign(const std::vector<int>& perm) {
  int inv = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inv;
  return (inv & 1) ? -1 : 1;
}

void check_shapes(const std::vector<MatrixXcd>& a) {
  const int r = static_cast<int>(a.size());
  if (r < 1) throw ShapeMismatch("mixed discriminant needs at least one matrix");
  for (const MatrixXcd& m : a)
    if (m.rows() != r || m.cols() != r) throw ShapeMismatch("mixed discriminant needs r matrices of size r");
}

}  // namespace

Complex mixed_discriminant(const std::vector<MatrixXcd>& a) {
  check_shapes(a);
  const int r = static_cast<int>(a.size());
  std::vector<int> perm(r);
  std::iota(perm.begin(), perm.end(), 0);
  Complex acc(0, 0);
  MatrixXcd rows(r, r);
  do {
    for (int i = 0; i < r; ++i) rows.row(i) = a[perm[i]].row(i);
    acc += rows.determinant();
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc / double(factorial(r));
}

Complex mixed_discriminant_sigma_tau(const std::vector<MatrixXcd>& a) {
  check_shapes(a);
  const int r = static_cast<int>(a.size());
  std::vector<int> sigma(r), tau(r);
  std::iota(sigma.begin(), sigma.end(), 0);
  Complex acc(0, 0);
  do {
    const int ss = permutation_sign(sigma);
    std::iota(tau.begin(), tau.end(), 0);
    do {
      const int st = permutation_sign(tau);
      Complex prod(double(ss * st), 0);
      for (int i = 0; i < r; ++i) prod *= a[i](sigma[i], tau[i]);
      acc += prod;
    } while (std::next_permutation(tau.begin(), tau.end()));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return acc / double(factorial(r));
}

MixedDiscriminantTensor::MixedDiscriminantTensor(int r) : r_(r) {
  if (r < 1 || r > 4) throw RankTooLarge("dual tensor supported for r in 1..4");
  std::size_t size = 1;
  for (int t = 0; t < r; ++t) size *= static_cast<std::size_t>(r) * r;
  v_.assign(size, Complex(0, 0));
}

std::size_t MixedDiscriminantTensor::index(const std::vector<std::pair<int, int>>& slots) const {
  std::size_t idx = 0;
  for (const auto& [l, m] : slots) idx = idx * (r_ * r_) + static_cast<std::size_t>(l) * r_ + m;
  return idx;
}

Complex MixedDiscriminantTensor::at(const std::vector<std::pair<int, int>>& slots) const {
  return v_[index(slots)];
}

Complex MixedDiscriminantTensor::contract(const std::vector<MatrixXcd>& a) const {
  if (static_cast<int>(a.size()) != r_) throw ShapeMismatch("contraction arity mismatch");
  Complex acc(0, 0);
  const auto rec = [&](auto&& self, int t, Complex partial, std::size_t base) -> void {
    if (t == r_) {
      acc += partial * v_[base];
      return;
    }
    for (int l = 0; l < r_; ++l)
      for (int m = 0; m < r_; ++m)
        self(self, t + 1, partial * a[t](l, m), base * (r_ * r_) + static_cast<std::size_t>(l) * r_ + m);
  };
  rec(rec, 0, Complex(1, 0), 0);
  return acc;
}

MixedDiscriminantTensor dual_tensor(int r) {
  MixedDiscriminantTensor t(r);
  std::vector<int> sigma(r), tau(r);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<Complex>& v = t.v_;
  const double norm = 1.0 / double(factorial(r));
  do {
    const int ss = permutation_sign(sigma);
    std::iota(tau.begin(), tau.end(), 0);
    do {
      const int st = permutation_sign(tau);
      std::size_t idx = 0;
      for (int i = 0; i < r; ++i)
        idx = idx * (r * r) + static_cast<std::size_t>(sigma[i]) * r + tau[i];
      v[idx] += double(ss * st) * norm;
    } while (std::next_permutation(tau.begin(), tau.end()));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return t;
}

double double_mixed_discriminant(const MatrixMap& h) {
  const int r = h.r();
  if (h.n() != r) throw NotSquare("double mixed discriminant needs dim V = dim W");
  if (r > 4) throw RankTooLarge("double mixed discriminant supported for r <= 4");
  if (!h.preserves_adjoints(1e-10))
    throw NotAdjointPreserving("double mixed discriminant needs H(A*) = H(A)*");

  // precompute H(E_lm)
  std::vector<MatrixXcd> image(static_cast<std::size_t>(r) * r);
  for (int l = 0; l < r; ++l)
    for (int m = 0; m < r; ++m) {
      MatrixXcd e = MatrixXcd::Zero(r, r);
      e(l, m) = 1;
      image[static_cast<std::size_t>(l) * r + m] = h.apply(e);
    }

  const MixedDiscriminantTensor dual = dual_tensor(r);
  Complex acc(0, 0);
  std::vector<MatrixXcd> slot_mats(r);
  std::vector<std::pair<int, int>> slots(r);
  const auto rec = [&](auto&& self, int t) -> void {
    if (t == r) {
      const Complex w = dual.at(slots);
      if (w == Complex(0, 0)) return;
      acc += w * mixed_discriminant(slot_mats);
      return;
    }
    for (int l = 0; l < r; ++l)
      for (int m = 0; m < r; ++m) {
        slots[t] = {l, m};
        slot_mats[t] = image[static_cast<std::size_t>(l) * r + m];
        self(self, t + 1);
      }
  };
  rec(rec, 0);

  const double scale = std::max(1.0, std::abs(acc));
  if (std::abs(acc.imag()) > 1e-10 * scale)
    throw ImaginaryResidue("double mixed discriminant has imaginary residue");
  return acc.real();
}

AlexandroffReport alexandroff_check(int r, int samples, std::uint64_t seed) {
  AlexandroffReport rep;
  rep.r = r;
  rep.samples = samples;
  double mn = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, s));
    std::vector<MatrixXcd> tuple;
    for (int i = 0; i < r; ++i) {
      const MatrixXcd g = rng.gaussian_matrix(r, r);
      tuple.push_back(g * g.adjoint());
    }
    const Complex d = mixed_discriminant(tuple);
    mn = std::min(mn, d.real());
  }
  if (samples == 0) mn = 0;
  rep.min_value = mn;
  rep.all_nonnegative = mn >= -1e-12;
  return rep;
}

}  // namespace positools
