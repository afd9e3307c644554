#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace positools {

// Subsets of {1,...,n} are stored as bitmasks; index i occupies bit i-1.
// Enumerations are in ascending mask order (colexicographic on index lists),
// which is the canonical basis order used everywhere in this library.
using IndexMask = std::uint32_t;

inline int mask_size(IndexMask m) { return std::popcount(m); }

inline IndexMask full_mask(int n) { return (n == 32) ? ~IndexMask{0} : ((IndexMask{1} << n) - 1); }

inline std::vector<int> mask_to_indices(IndexMask m) {
  std::vector<int> out;
  while (m) {
    const int b = std::countr_zero(m);
    out.push_back(b + 1);
    m &= m - 1;
  }
  return out;
}

inline IndexMask indices_to_mask(const std::vector<int>& idx, int n) {
  IndexMask m = 0;
  int prev = 0;
  for (int i : idx) {
    if (i <= prev || i > n) throw std::invalid_argument("index list must be strictly increasing within 1..n");
    m |= IndexMask{1} << (i - 1);
    prev = i;
  }
  return m;
}

// Sign (-1)^inv of merging two disjoint increasing lists a, b into one
// increasing list, counting inversions of elements of b against a.
inline int merge_sign(IndexMask a, IndexMask b) {
  int inv = 0;
  while (b) {
    const int bit = std::countr_zero(b);
    inv += std::popcount(a >> (bit + 1));
    b &= b - 1;
  }
  return (inv & 1) ? -1 : 1;
}

inline std::vector<IndexMask> increasing_subsets(int n, int k) {
  std::vector<IndexMask> out;
  if (k < 0 || k > n) return out;
  const IndexMask top = full_mask(n);
  for (IndexMask m = 0; m <= top; ++m) {
    if (std::popcount(m) == k) out.push_back(m);
    if (m == top) break;
  }
  return out;
}

inline long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long num = 1;
  for (int i = 0; i < k; ++i) num = num * (n - i) / (i + 1);
  return num;
}

}  // namespace positools
