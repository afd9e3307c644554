#pragma once

#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "positools/charclass.hpp"
#include "positools/curvature.hpp"
#include "positools/multilinear.hpp"

namespace positools {

struct DegreeTooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct RankExceedsDimension : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Sparse element of Sym^l(C^d). Basis element for a sorted multiset S is
/// the sum of all distinct orderings of S inside the plain tensor power.
class SymTensor {
 public:
  SymTensor(int d, int l) : d_(d), l_(l) {}

  int d() const { return d_; }
  int l() const { return l_; }
  const std::map<std::vector<int>, Complex>& terms() const { return terms_; }

  void add(const std::vector<int>& sorted_multiset, Complex v) {
    if (v == Complex(0, 0)) return;
    auto [it, fresh] = terms_.try_emplace(sorted_multiset, v);
    if (!fresh) {
      it->second += v;
      if (it->second == Complex(0, 0)) terms_.erase(it);
    }
  }

 private:
  int d_, l_;
  std::map<std::vector<int>, Complex> terms_;
};

/// Element of Lambda^l C^n (x) Lambda^l C^r; keys are (V-subset, W-subset).
using WedgePair = std::map<std::pair<IndexMask, IndexMask>, Complex>;

/// Phi: (v_I) (x) (w_J) -> (1/l!) sum_sigma sign(sigma) sym-product of the
/// paired factors; pair basis index (a, b) -> a*r + b.
SymTensor phi(int l, int n, int r, const WedgePair& x);

/// Partial inverse: kills multisets with a repeated V- or W-letter and
/// wedges the rest in stored order.
WedgePair phi_inverse(int l, int n, int r, const SymTensor& s);

/// P^{(x) l} acting slotwise on a symmetric tensor (P is d x d).
SymTensor sym_tensor_power_apply(const Eigen::MatrixXcd& p, const SymTensor& s);

/// Psi^{-1} o P^{(x) r} o Psi as an operator on Lambda^r C^n (colex subset
/// basis); P acts on C^n (x) C^r, basis (j, lambda) -> j*r + lambda.
Eigen::MatrixXcd psi_conjugate(const Eigen::MatrixXcd& p, int n, int r);

/// Operator route to the top Chern form: r! Psi^{-1} (P^{E*})^{(x) r} Psi in
/// the form_operator normalization; equals form_operator(chern_forms(R)[r])
/// within 1e-9 (that equality is the theorem this module exists to check).
FormOperator tilde_top_chern(const CurvatureTensor& R);

/// Top Chern form restricted to an r-plane through the double mixed
/// discriminant: r! * DMD of the compressed bundle map.
double top_chern_on_plane(const CurvatureTensor& R, const ComplexPlane& L);

/// h! Psi^{-1} (P)^{(x) h} Psi on Lambda^h C^n for an operator P on
/// C^n (x) C^h (the horizontal block of a fiberwise quotient).
Eigen::MatrixXcd horizontal_pushforward_operator(const Eigen::MatrixXcd& p0h, int n, int h);

}  // namespace positools
