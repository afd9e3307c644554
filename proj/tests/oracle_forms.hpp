#pragma once

// Brute-force monomial bookkeeping for differential forms, kept independent
// of the library's scaled-basis implementation. Letters are anticommuting
// symbols: dz_i = (0, i), dzbar_j = (1, j); monomials are explicit letter
// sequences sorted with adjacent-transposition signs.

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "positools/multilinear.hpp"

namespace oracle {

using positools::Complex;
using Letter = std::pair<int, int>;  // (0 = dz, 1 = dzbar; 1-based index)
using Letters = std::vector<Letter>;

// insertion sort with sign; returns 0 on a repeated letter, else +-1
inline int sort_letters(Letters& L) {
  int sign = 1;
  for (std::size_t i = 1; i < L.size(); ++i) {
    std::size_t j = i;
    while (j > 0 && L[j] < L[j - 1]) {
      std::swap(L[j], L[j - 1]);
      sign = -sign;
      --j;
    }
  }
  for (std::size_t i = 1; i < L.size(); ++i)
    if (L[i] == L[i - 1]) return 0;
  return sign;
}

struct PlainForm {
  int n = 1;
  // key: sorted letter sequence (already canonical dz...dzbar order)
  std::map<Letters, Complex> terms;

  void add(Letters letters, Complex c) {
    const int s = sort_letters(letters);
    if (s == 0 || c == Complex(0, 0)) return;
    auto [it, fresh] = terms.try_emplace(letters, double(s) * c);
    if (!fresh) it->second += double(s) * c;
    if (std::abs(it->second) == 0.0) terms.erase(it);
  }
};

inline PlainForm oracle_wedge(const PlainForm& a, const PlainForm& b) {
  PlainForm out;
  out.n = a.n;
  for (const auto& [la, ca] : a.terms)
    for (const auto& [lb, cb] : b.terms) {
      Letters cat = la;
      cat.insert(cat.end(), lb.begin(), lb.end());
      out.add(std::move(cat), ca * cb);
    }
  return out;
}

inline PlainForm oracle_conj(const PlainForm& a) {
  PlainForm out;
  out.n = a.n;
  for (const auto& [l, c] : a.terms) {
    Letters flipped;
    for (const auto& [t, i] : l) flipped.emplace_back(1 - t, i);
    out.add(std::move(flipped), std::conj(c));
  }
  return out;
}

// iota_{dz-dual of s} acting on sorted monomials: drop letter (0, s) with
// sign (-1)^position; zero if absent.
inline PlainForm oracle_contract_one(const PlainForm& a, int s) {
  PlainForm out;
  out.n = a.n;
  for (const auto& [l, c] : a.terms) {
    for (std::size_t pos = 0; pos < l.size(); ++pos) {
      if (l[pos] == Letter{0, s}) {
        Letters rest = l;
        rest.erase(rest.begin() + static_cast<long>(pos));
        out.add(std::move(rest), ((pos & 1) ? -1.0 : 1.0) * c);
        break;
      }
    }
  }
  return out;
}

// pinned convention: contract ascending indices one by one
inline PlainForm oracle_contract(const PlainForm& a, const std::vector<int>& asc) {
  PlainForm out = a;
  for (int s : asc) out = oracle_contract_one(out, s);
  return out;
}

inline Complex ipow(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

inline Letters letters_of(const std::vector<int>& I, const std::vector<int>& J) {
  Letters l;
  for (int i : I) l.emplace_back(0, i);
  for (int j : J) l.emplace_back(1, j);
  return l;
}

// conversions: library coefficient u over beta_{I,J} = i^{pq} dz_I dzbar_J
inline PlainForm to_plain(const positools::ExteriorForm& f) {
  PlainForm out;
  out.n = f.dim();
  const Complex scale = ipow(f.pdeg() * f.qdeg());
  for (const auto& [key, u] : f.terms()) {
    const auto I = positools::mask_to_indices(key.first);
    const auto J = positools::mask_to_indices(key.second);
    out.add(letters_of(I, J), u * scale);
  }
  return out;
}

inline positools::ExteriorForm to_scaled(const PlainForm& f, int p, int q) {
  positools::ExteriorForm out(f.n, p, q);
  const Complex scale = ipow(-p * q);
  for (const auto& [l, c] : f.terms) {
    std::vector<int> I, J;
    for (const auto& [t, i] : l) (t == 0 ? I : J).push_back(i);
    out.add_term(positools::indices_to_mask(I, f.n), positools::indices_to_mask(J, f.n), c * scale);
  }
  return out;
}

inline double plain_distance(const PlainForm& a, const PlainForm& b) {
  double d = 0;
  for (const auto& [l, c] : a.terms) {
    const auto it = b.terms.find(l);
    d = std::max(d, std::abs(c - (it == b.terms.end() ? Complex(0, 0) : it->second)));
  }
  for (const auto& [l, c] : b.terms)
    if (!a.terms.count(l)) d = std::max(d, std::abs(c));
  return d;
}

// Direct-contraction operator oracle for a real (k,k)-form:
//   M[I,J] = i^{-k^2} * (coefficient of dzbar_J in iota_{dz-dual of I} alpha).
inline Eigen::MatrixXcd oracle_form_operator(const positools::ExteriorForm& f) {
  const int n = f.dim();
  const int k = f.pdeg();
  const auto subsets = positools::increasing_subsets(n, k);
  const int d = static_cast<int>(subsets.size());
  const PlainForm plain = to_plain(f);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (int row = 0; row < d; ++row) {
    const PlainForm contracted = oracle_contract(plain, positools::mask_to_indices(subsets[row]));
    for (int col = 0; col < d; ++col) {
      Letters key;
      for (int j : positools::mask_to_indices(subsets[col])) key.emplace_back(1, j);
      const auto it = contracted.terms.find(key);
      if (it != contracted.terms.end()) m(row, col) = ipow(-k * k) * it->second;
    }
  }
  return m;
}

}  // namespace oracle
