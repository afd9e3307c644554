#include "positools/opsearch.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "positools/discriminant.hpp"
#include "positools/parallel.hpp"
#include "positools/rng.hpp"

namespace positools {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

MatrixMap map_from_images(int n, int r, const std::vector<MatrixXcd>& images) {
  MatrixMap h(n, r);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < r; ++l)
        for (int m = 0; m < r; ++m) h.at(j, k, l, m) = images[j * n + k](m, l);
  return h;
}

MatrixMap map_from_action(int n, int r, const std::function<MatrixXcd(const MatrixXcd&)>& action) {
  std::vector<MatrixXcd> images;
  images.reserve(n * n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      MatrixXcd e = MatrixXcd::Zero(n, n);
      e(j, k) = 1;
      images.push_back(action(e));
    }
  return map_from_images(n, r, images);
}

MatrixXcd partial_transpose_v(const MatrixXcd& m, int n, int r) {
  MatrixXcd out(n * r, n * r);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) out(i * r + a, j * r + b) = m(j * r + a, i * r + b);
  return out;
}

RankVerdict verdict_of(double value, double tol, bool at_budget, VectorXcd witness) {
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

ChoiMatrix choi_matrix(const MatrixMap& h) {
  ChoiMatrix c;
  c.n = h.n();
  c.r = h.r();
  c.matrix = choi_matrix_of(h);
  return c;
}

std::vector<RankVerdict> k_positive_profile(const MatrixMap& h, const OptimBudget& budget,
                                            std::uint64_t seed) {
  const int n = h.n(), r = h.r();
  const int kmax = std::min(n, r);
  const MatrixXcd choi = choi_matrix_of(h);
  const double tol = 1e-9 * h.scale();
  std::vector<RankVerdict> out(kmax);
  std::vector<VectorXcd> warm;
  for (int k = 1; k <= kmax; ++k) {
    const bool exact = (k == kmax);
    const RankMinResult res =
        min_rank_quadratic(choi, n, r, k, budget, derive_seed(seed, k), warm);
    out[k - 1] = verdict_of(res.value, tol, !exact, res.minimizer);
    warm = {res.minimizer};
  }
  return out;
}

RankVerdict k_positive(const MatrixMap& h, int k, const OptimBudget& budget, std::uint64_t seed) {
  const int kmax = std::min(h.n(), h.r());
  if (k < 1 || k > kmax) throw ConfigInvalid("k outside 1..min(n,r)");
  if (k == kmax) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(choi_matrix_of(h));
    return verdict_of(es.eigenvalues()(0), 1e-9 * h.scale(), false, es.eigenvectors().col(0));
  }
  return k_positive_profile(h, budget, seed)[k - 1];
}

std::vector<MatrixXcd> kraus_decompose(const MatrixMap& h, double tol) {
  const MatrixXcd choi = choi_matrix_of(h);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(choi, Eigen::EigenvaluesOnly);
  const double mineig = es.eigenvalues()(0);
  if (mineig < -tol * h.scale()) throw NotCompletelyPositive(mineig);
  return kraus_factors_of_psd_choi(choi, h.n(), h.r());
}

std::pair<MatrixXcd, MatrixXcd> h_prime_pair(const MatrixMap& h) {
  const int n = h.n(), r = h.r();
  MatrixXcd hp(n * r, n * r), hpp(n * r, n * r);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < r; ++l)
        for (int m = 0; m < r; ++m) {
          // <H'(e_i (x) w1), e_j (x) w2> = <H(E_ij) w1, w2>
          hp(j * r + m, i * r + l) = h.at(i, j, l, m);
          // <H''(e_i (x) w2*), e_j (x) w1*> = <H(E_ij) w1, w2>
          hpp(j * r + l, i * r + m) = h.at(i, j, l, m);
        }
  return {hp, hpp};
}

// ---------------------------------------------------------------------------

MatrixMap zoo(const std::string& name, int dim, int k) {
  if (name == "identity")
    return map_from_action(dim, dim, [](const MatrixXcd& x) { return x; });
  if (name == "transpose")
    return map_from_action(dim, dim, [](const MatrixXcd& x) { return x.transpose().eval(); });
  if (name == "reduction")
    return map_from_action(dim, dim, [dim](const MatrixXcd& x) {
      return (x.trace() * MatrixXcd::Identity(dim, dim) - x).eval();
    });
  if (name == "conjugation") {
    MatrixXcd g = MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) g(i, i) = i + 1;
    return map_from_action(dim, dim, [g](const MatrixXcd& x) { return (g.adjoint() * x * g).eval(); });
  }
  if (name == "schneider-transpose") {
    MatrixXcd g = MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) g(i, i) = i + 1;
    return map_from_action(dim, dim, [g](const MatrixXcd& x) {
      return (g.adjoint() * x.transpose() * g).eval();
    });
  }
  if (name == "choi3") {
    // the 1975 positive non-decomposable map on M_3
    return map_from_action(3, 3, [](const MatrixXcd& x) {
      MatrixXcd y = -x;
      y(0, 0) = x(0, 0) + x(2, 2);
      y(1, 1) = x(1, 1) + x(0, 0);
      y(2, 2) = x(2, 2) + x(1, 1);
      return y;
    });
  }
  if (name == "kpositive") {
    // tr(X) I - p X with p strictly between 1/(k+1) and 1/k:
    // k-positive and not (k+1)-positive, exact rank-j minima 1 - p j
    if (k < 1 || k >= dim) throw UnknownMap("kpositive needs 1 <= k < dim");
    const double p = (2.0 * k + 1) / (2.0 * k * (k + 1));
    return map_from_action(dim, dim, [dim, p](const MatrixXcd& x) {
      return (x.trace() * MatrixXcd::Identity(dim, dim) - p * x).eval();
    });
  }
  if (name == "woronowicz-2x4")
    throw UnknownMap(
        "woronowicz-2x4: profile not locked; the cited construction is not transcribed in this build");
  throw UnknownMap("unknown zoo map: " + name);
}

std::vector<ZooEntry> zoo_catalog() {
  using V = VerdictKind;
  std::vector<ZooEntry> out;
  out.push_back({"identity", "Kraus form, single factor", 2, 2, {V::SemiDefinite, V::SemiDefinite},
                 true, false, 1});
  out.push_back({"identity", "Kraus form, single factor", 3, 3,
                 {V::SemiDefinite, V::SemiDefinite, V::SemiDefinite}, true, false, 1});
  out.push_back({"transpose", "co-CP generator", 2, 2, {V::SemiDefinite, V::Indefinite}, false,
                 true, 1});
  out.push_back({"transpose", "co-CP generator", 3, 3,
                 {V::SemiDefinite, V::Indefinite, V::Indefinite}, false, true, 1});
  out.push_back({"conjugation", "Schneider form A*XA", 3, 3,
                 {V::SemiDefinite, V::SemiDefinite, V::SemiDefinite}, true, false, 1});
  out.push_back({"schneider-transpose", "Schneider form B*X^T B", 3, 3,
                 {V::SemiDefinite, V::Indefinite, V::Indefinite}, false, true, 1});
  out.push_back({"reduction", "trace minus identity (co-CP)", 3, 3,
                 {V::SemiDefinite, V::Indefinite, V::Indefinite}, false, true, 1});
  out.push_back({"choi3", "Choi 1975 biquadratic example", 3, 3,
                 {V::SemiDefinite, V::Indefinite, V::Indefinite}, false, false, 0});
  out.push_back({"kpositive(3,1)", "interpolating family (co-CP)", 3, 3,
                 {V::Positive, V::Indefinite, V::Indefinite}, false, true, 1});
  out.push_back({"kpositive(3,2)", "interpolating family (co-CP)", 3, 3,
                 {V::Positive, V::Positive, V::Indefinite}, false, true, 1});
  out.push_back({"kpositive(4,2)", "interpolating family (co-CP)", 4, 4,
                 {V::Positive, V::Positive, V::Indefinite, V::Indefinite}, false, true, 1});
  return out;
}

MatrixMap zoo_entry_map(const ZooEntry& e) {
  if (e.name.rfind("kpositive(", 0) == 0) {
    int dim = 0, k = 0;
    if (std::sscanf(e.name.c_str(), "kpositive(%d,%d)", &dim, &k) != 2)
      throw UnknownMap("malformed kpositive entry: " + e.name);
    return zoo("kpositive", dim, k);
  }
  return zoo(e.name, e.n);
}

// ---------------------------------------------------------------------------

std::string kind_name(MapKind k) {
  switch (k) {
    case MapKind::CP: return "CP";
    case MapKind::CoCP: return "coCP";
    case MapKind::Decomposable: return "decomposable";
    case MapKind::Conjugation: return "conjugation";
    default: return "schneider-transpose";
  }
}

MapKind kind_from_string(const std::string& s) {
  if (s == "CP" || s == "cp") return MapKind::CP;
  if (s == "coCP" || s == "cocp") return MapKind::CoCP;
  if (s == "decomposable") return MapKind::Decomposable;
  if (s == "conjugation") return MapKind::Conjugation;
  if (s == "schneider-transpose") return MapKind::SchneiderTranspose;
  throw ConfigInvalid("unknown map kind: " + s);
}

MatrixMap random_positive_map(int n, int r, MapKind kind, std::uint64_t seed) {
  Rng rng(seed);
  const auto kraus_list = [&](int count) {
    std::vector<MatrixXcd> ks;
    for (int p = 0; p < count; ++p)
      ks.push_back(rng.gaussian_matrix(r, n) / std::sqrt(double(count)));
    return ks;
  };
  switch (kind) {
    case MapKind::CP: {
      const int count = 1 + static_cast<int>(rng.uniform() * (n * r)) % (n * r);
      return build_decomposable(kraus_list(count), {}, n, r);
    }
    case MapKind::CoCP: {
      const int count = 1 + static_cast<int>(rng.uniform() * (n * r)) % (n * r);
      return build_decomposable({}, kraus_list(count), n, r);
    }
    case MapKind::Decomposable: {
      const int cv = 1 + static_cast<int>(rng.uniform() * n) % n;
      const int cw = 1 + static_cast<int>(rng.uniform() * n) % n;
      auto v = kraus_list(cv);
      auto w = kraus_list(cw);
      return build_decomposable(v, w, n, r);
    }
    case MapKind::Conjugation:
      return build_decomposable({rng.gaussian_matrix(r, n)}, {}, n, r);
    default:
      return build_decomposable({}, {rng.gaussian_matrix(r, n)}, n, r);
  }
}

namespace {

std::string certify(const MatrixMap& h, MapKind kind) {
  const int n = h.n(), r = h.r();
  std::ostringstream os;
  os.precision(3);
  const MatrixXcd choi = choi_matrix_of(h);
  switch (kind) {
    case MapKind::CP:
    case MapKind::Conjugation: {
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(choi, Eigen::EigenvaluesOnly);
      os << "choi_psd(min=" << es.eigenvalues()(0) << ")";
      break;
    }
    case MapKind::CoCP:
    case MapKind::SchneiderTranspose: {
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(partial_transpose_v(choi, n, r),
                                                  Eigen::EigenvaluesOnly);
      os << "choi_pt_psd(min=" << es.eigenvalues()(0) << ")";
      break;
    }
    case MapKind::Decomposable:
      os << "decomposable_by_construction";
      break;
  }
  return os.str();
}

}  // namespace

SearchSummary search_open_problem(const SearchConfig& config) {
  if (config.r < 1 || config.r > 4) throw ConfigInvalid("search supports r in 1..4");
  if (config.samples < 0) throw ConfigInvalid("negative sample count");
  if (config.kinds.empty() && config.samples > 0) throw ConfigInvalid("no map kinds selected");

  SearchSummary summary;
  summary.records.resize(config.samples);
  summary.min_value = std::numeric_limits<double>::infinity();

  parallel_for(config.samples, [&](std::size_t i) {
    const MapKind kind = config.kinds[i % config.kinds.size()];
    const std::uint64_t sample_seed = derive_seed(config.seed, i);
    const MatrixMap h = random_positive_map(config.r, config.r, kind, sample_seed);
    SearchRecord rec;
    rec.seed = sample_seed;
    rec.kind = kind_name(kind);
    rec.params = "r=" + std::to_string(config.r);
    rec.certificate = certify(h, kind);
    rec.dmd_value = double_mixed_discriminant(h);
    if (rec.dmd_value < -1e-6) rec.flags.push_back("REVIEW");
    summary.records[i] = std::move(rec);
  });

  for (std::size_t i = 0; i < summary.records.size(); ++i) {
    const SearchRecord& rec = summary.records[i];
    if (rec.dmd_value < summary.min_value) {
      summary.min_value = rec.dmd_value;
      summary.min_descriptor = rec.kind + " seed=" + std::to_string(rec.seed);
    }
    if (!rec.flags.empty()) ++summary.review_count;
    if (rec.dmd_value < -1e-10) summary.certified_nonnegative_ok = false;
  }
  if (summary.records.empty()) summary.min_value = 0;
  return summary;
}

}  // namespace positools
