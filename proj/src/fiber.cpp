#include "positools/fiber.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "positools/parallel.hpp"
#include "positools/psi.hpp"
#include "positools/rng.hpp"

namespace positools {

namespace {

using Eigen::MatrixXcd;
using Eigen::Vector2cd;
using Eigen::VectorXcd;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// unitary with prescribed first column (deterministic Gram-Schmidt fill)
MatrixXcd unitary_with_first_column(const VectorXcd& a) {
  const int r = static_cast<int>(a.size());
  MatrixXcd u(r, r);
  u.col(0) = a / a.norm();
  int filled = 1;
  for (int c = 0; c < r && filled < r; ++c) {
    VectorXcd v = VectorXcd::Zero(r);
    v(c) = 1;
    for (int i = 0; i < filled; ++i) v -= u.col(i) * (u.col(i).adjoint() * v)(0);
    const double nn = v.norm();
    if (nn > 1e-8) u.col(filled++) = v / nn;
  }
  if (filled != r) throw ShapeMismatch("degenerate fiber point");
  return u;
}

ExteriorForm horizontal_form(const CurvatureTensor& g, int total_dim, int lambda, int mu) {
  ExteriorForm f(total_dim, 1, 1);
  for (int s = 0; s < g.n(); ++s)
    for (int t = 0; t < g.n(); ++t) {
      const Complex c = g.at(s, t, lambda, mu);
      if (c != Complex(0, 0)) f.add_term(IndexMask{1} << s, IndexMask{1} << t, c);
    }
  return f;
}

// component of a form whose vertical letters (indices > base_dim) are exactly
// the given masks on both sides; vertical coordinates sit above all base
// coordinates, so the basis factor of the split is +1.
ExteriorForm exact_vertical_component(const ExteriorForm& form, int base_dim, IndexMask vert_i,
                                      IndexMask vert_j) {
  const IndexMask base = full_mask(base_dim);
  const int degree_drop_p = mask_size(vert_i);
  const int degree_drop_q = mask_size(vert_j);
  ExteriorForm out(base_dim, form.pdeg() - degree_drop_p, form.qdeg() - degree_drop_q);
  for (const auto& [key, c] : form.terms()) {
    if ((key.first & ~base) != vert_i || (key.second & ~base) != vert_j) continue;
    out.add_term(key.first & base, key.second & base, c);
  }
  return out;
}

}  // namespace

QuadratureRule QuadratureRule::p1(int resolution) {
  if (resolution < 2) throw DegreeMismatchFiber("quadrature resolution too small");
  QuadratureRule rule;
  rule.resolution = resolution;
  const int mc = resolution;
  const int mphi = std::max(16, resolution / 8);
  rule.points.reserve(static_cast<std::size_t>(mc) * mphi);
  rule.weights.reserve(static_cast<std::size_t>(mc) * mphi);
  for (int i = 0; i < mc; ++i) {
    const double c = -1.0 + (2.0 * i + 1.0) / mc;  // midpoint in cos(theta)
    const double a1 = std::sqrt((1.0 + c) / 2.0);
    const double a2 = std::sqrt((1.0 - c) / 2.0);
    for (int j = 0; j < mphi; ++j) {
      const double phi = kTwoPi * (j + 0.5) / mphi;
      Vector2cd a;
      a << Complex(a1, 0), a2 * Complex(std::cos(phi), std::sin(phi));
      rule.points.push_back(a);
      rule.weights.push_back(1.0 / (static_cast<double>(mc) * mphi));
    }
  }
  return rule;
}

double QuadratureRule::total_weight() const {
  double s = 0;
  for (double w : weights) s += w;
  return s;
}

FiberCurvature mourougane_curvature(const CurvatureTensor& g, const VectorXcd& a) {
  const int n = g.n(), r = g.r();
  if (a.size() != r) throw ShapeMismatch("fiber point lives in wrong C^r");
  const MatrixXcd u = unitary_with_first_column(a);
  const CurvatureTensor rotated = conjugate_frames(g, MatrixXcd::Identity(n, n), u);
  const int f = r - 1;
  const int total = n + f;
  FiberCurvature out;
  out.n = n;
  out.r = r;
  out.entries.reserve(static_cast<std::size_t>(f) * f);
  for (int lambda = 0; lambda < f; ++lambda)
    for (int mu = 0; mu < f; ++mu) {
      // entry (lambda, mu) multiplies e*_lambda (x) e_mu of the quotient frame
      // d'/db_{lambda+2} -> d'/db_{mu+2}; Mourougane gives g_{mu+2, lambda+2}
      // plus the Fubini-Study vertical term.
      ExteriorForm e = horizontal_form(rotated, total, mu + 1, lambda + 1);
      e.add_term(IndexMask{1} << (n + mu), IndexMask{1} << (n + lambda), Complex(1.0 / kTwoPi, 0));
      out.entries.push_back(std::move(e));
    }
  return out;
}

ExteriorForm o1_curvature(const CurvatureTensor& g, const VectorXcd& a) {
  const int n = g.n(), r = g.r();
  const int total = n + r - 1;
  const FiberCurvature q = mourougane_curvature(g, a);
  ExteriorForm o1(total, 1, 1);
  for (int lambda = 0; lambda < r - 1; ++lambda) o1 += q.at(lambda, lambda);
  // subtract the pulled-back c_1(F): the trace is frame-invariant
  for (int lambda = 0; lambda < r; ++lambda) o1 -= horizontal_form(g, total, lambda, lambda);
  return o1;
}

std::vector<ExteriorForm> demailly_flag_curvature(const CurvatureTensor& g,
                                                  const VectorXcd& v1_dir) {
  const int n = g.n(), r = g.r();
  if (r != 2) throw UnsupportedRank("flag curvature implemented for rank 2");
  if (v1_dir.size() != r) throw ShapeMismatch("flag point lives in wrong C^r");
  // frame adapted to the flag: second vector spans V_1
  const MatrixXcd u0 = unitary_with_first_column(v1_dir);
  MatrixXcd u(r, r);
  u.col(0) = u0.col(1);
  u.col(1) = u0.col(0);
  const CurvatureTensor rotated = conjugate_frames(g, MatrixXcd::Identity(n, n), u);
  const int total = n + 1;
  const IndexMask vert = IndexMask{1} << n;
  ExteriorForm q1 = horizontal_form(rotated, total, 0, 0);
  q1.add_term(vert, vert, Complex(1.0 / kTwoPi, 0));
  ExteriorForm q2 = horizontal_form(rotated, total, 1, 1);
  q2.add_term(vert, vert, Complex(-1.0 / kTwoPi, 0));
  return {q1, q2};
}

ExteriorForm fiber_pushforward(const std::function<ExteriorForm(const Vector2cd&)>& integrand,
                               const QuadratureRule& rule, int base_dim, int fiber_dim) {
  if (fiber_dim != 1) throw UnsupportedRank("fiber integration implemented for P^1 fibers");
  ExteriorForm probe = integrand(rule.points.front());
  const int m = probe.pdeg();
  if (probe.qdeg() != m || m < fiber_dim) throw DegreeMismatchFiber("integrand degree too small");
  const IndexMask vert = IndexMask{1} << base_dim;
  const double scale = std::pow(kTwoPi, fiber_dim);

  std::vector<ExteriorForm> slices(rule.points.size(), ExteriorForm(base_dim, m - 1, m - 1));
  parallel_for(rule.points.size(), [&](std::size_t q) {
    const ExteriorForm total = (q == 0) ? probe : integrand(rule.points[q]);
    slices[q] = exact_vertical_component(total, base_dim, vert, vert);
  });
  ExteriorForm out(base_dim, m - 1, m - 1);
  for (std::size_t q = 0; q < slices.size(); ++q) out += (rule.weights[q] * scale) * slices[q];
  out.prune(0.0);
  return out;
}

VerifyReport verify_segre(const CurvatureTensor& g, int k, const QuadratureRule& rule) {
  const int n = g.n(), r = g.r();
  if (r != 2) throw UnsupportedRank("Segre verification implemented for rank 2");
  if (k < 1 || k > n) throw DegreeMismatchFiber("Segre degree outside 1..n");
  const CurvatureTensor gdual = dual_curvature(g);
  const auto integrand = [&](const Vector2cd& a) {
    return wedge_pow(o1_curvature(gdual, a), k + r - 1);
  };
  VerifyReport rep;
  rep.rhs = fiber_pushforward(integrand, rule, n, r - 1);
  rep.lhs = segre_forms(g, k)[k];
  rep.max_deviation = (rep.lhs - rep.rhs).max_abs();
  rep.relative_deviation = rep.max_deviation / std::max(1.0, rep.lhs.max_abs());
  return rep;
}

VerifyReport verify_jacobi_trudi(const CurvatureTensor& g, const Partition& a,
                                 const QuadratureRule& rule) {
  const int n = g.n(), r = g.r();
  if (r != 2) throw UnsupportedRank("Jacobi-Trudi verification implemented for rank 2");
  if (a.weight() > n) throw DegreeMismatchFiber("partition weight exceeds dimension");
  const Partition b = a.transpose();
  const int b1 = b.part(0);
  const int b2 = b.part(1);
  const auto integrand = [&](const Vector2cd& v) {
    const auto q = demailly_flag_curvature(g, v);
    return wedge(wedge_pow(q[0], b1 + r - 1), wedge_pow(q[1], b2));
  };
  VerifyReport rep;
  rep.rhs = fiber_pushforward(integrand, rule, n, 1);
  rep.lhs = schur_form(g, a);
  rep.max_deviation = (rep.lhs - rep.rhs).max_abs();
  rep.relative_deviation = rep.max_deviation / std::max(1.0, rep.lhs.max_abs());
  return rep;
}

NakanoPushReport verify_nakano_pushforward(const CurvatureTensor& g, IndexMask fprime,
                                           const QuadratureRule& rule, int samples,
                                           std::uint64_t seed) {
  const int n = g.n(), r = g.r();
  const int p = mask_size(fprime);
  if (r < 2 || r > 3) throw UnsupportedRank("pushforward verification implemented for r in 2..3");
  if (p < 1 || p > r || fprime > full_mask(r))
    throw ShapeMismatch("F' must be a nonempty coordinate subspace of C^r");
  const int l = r - p;

  NakanoPushReport rep;
  rep.samples = samples;
  if (l == 0) return rep;  // T = F, H = 0: both sides vanish identically

  const auto fprime_indices = mask_to_indices(fprime);
  const double factor =
      std::tgamma(p) /* (p-1)! */ / std::pow(kTwoPi, p - 1);

  double max_dev = 0;
  for (int s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, s));
    // fiber point a in P(F') and a base-frame rotation (the identity is
    // frame-covariant; rotating exercises genuinely different evaluations)
    VectorXcd a = VectorXcd::Zero(r);
    if (p == 1) {
      a(fprime_indices[0] - 1) = 1;
    } else {
      for (int i : fprime_indices) a(i - 1) = rng.complex_gaussian();
      a /= a.norm();
    }
    const CurvatureTensor gs = conjugate_frames(g, rng.unitary(n), MatrixXcd::Identity(r, r));

    // bundle frame adapted to (a, F'): f_1 = a, f_2..f_p span F' ^ a-perp,
    // f_{p+1}..f_r span the complement
    MatrixXcd u(r, r);
    {
      u.col(0) = a / a.norm();
      int filled = 1;
      // inside F'
      for (int i : fprime_indices) {
        if (filled >= p) break;
        VectorXcd v = VectorXcd::Zero(r);
        v(i - 1) = 1;
        for (int c = 0; c < filled; ++c) v -= u.col(c) * (u.col(c).adjoint() * v)(0);
        if (v.norm() > 1e-8) u.col(filled++) = v / v.norm();
      }
      // complement
      for (int i = 0; i < r && filled < r; ++i) {
        if (fprime & (IndexMask{1} << i)) continue;
        VectorXcd v = VectorXcd::Zero(r);
        v(i) = 1;
        for (int c = 0; c < filled; ++c) v -= u.col(c) * (u.col(c).adjoint() * v)(0);
        if (v.norm() > 1e-8) u.col(filled++) = v / v.norm();
      }
      if (filled != r) throw ShapeMismatch("could not adapt frame to F'");
    }
    const CurvatureTensor adapted = conjugate_frames(gs, MatrixXcd::Identity(n, n), u);

    // lhs: horizontal part of the dv_Y-contraction of c_{r-1}(Q') at the
    // rotated center; Y-vertical coordinates are b_2..b_p
    const FiberCurvature q = mourougane_curvature(adapted, VectorXcd::Unit(r, 0));
    const int f = r - 1;
    ExteriorForm ctop = ExteriorForm::scalar(n + f, 1.0);
    {
      // determinant of the (r-1)x(r-1) form matrix
      std::vector<int> perm(f);
      std::iota(perm.begin(), perm.end(), 0);
      ExteriorForm acc(n + f, f, f);
      do {
        int inv = 0;
        for (int i = 0; i < f; ++i)
          for (int j = i + 1; j < f; ++j)
            if (perm[i] > perm[j]) ++inv;
        ExteriorForm term = ExteriorForm::scalar(n + f, (inv & 1) ? -1.0 : 1.0);
        for (int i = 0; i < f; ++i) term = wedge(term, q.at(i, perm[i]));
        acc += term;
      } while (std::next_permutation(perm.begin(), perm.end()));
      ctop = std::move(acc);
    }
    IndexMask vert_y = 0;
    for (int t = 0; t < p - 1; ++t) vert_y |= IndexMask{1} << (n + t);
    const ExteriorForm lhs_form = exact_vertical_component(ctop, n, vert_y, vert_y);
    const MatrixXcd lhs_op = form_operator(lhs_form).matrix;

    // rhs: Psi-conjugated compression of P^F to the bundle indices p+1..r
    MatrixXcd ph(n * l, n * l);
    const MatrixXcd pe = pe_matrix(adapted);
    for (int j = 0; j < n; ++j)
      for (int kk = 0; kk < n; ++kk)
        for (int li = 0; li < l; ++li)
          for (int mi = 0; mi < l; ++mi)
            ph(kk * l + mi, j * l + li) = pe(kk * r + (p + mi), j * r + (p + li));
    const MatrixXcd rhs_op = factor * horizontal_pushforward_operator(ph, n, l);

    const double dev = (lhs_op - rhs_op).cwiseAbs().maxCoeff() /
                       std::max(1.0, rhs_op.cwiseAbs().maxCoeff());
    max_dev = std::max(max_dev, dev);
  }
  rep.max_deviation = max_dev;
  return rep;
}

}  // namespace positools
