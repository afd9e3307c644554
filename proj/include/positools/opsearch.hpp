#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "positools/curvature.hpp"
#include "positools/optimize.hpp"

namespace positools {

struct NotCompletelyPositive : std::runtime_error {
  explicit NotCompletelyPositive(double eig)
      : std::runtime_error("Choi matrix has a negative eigenvalue"), min_eigenvalue(eig) {}
  double min_eigenvalue;
};
struct UnknownMap : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ConfigInvalid : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ChoiMatrix {
  int n = 0;
  int r = 0;
  Eigen::MatrixXcd matrix;  // basis (j, lambda) -> j*r + lambda
};

ChoiMatrix choi_matrix(const MatrixMap& h);

/// Verdict on <Choi(H) tau, tau> over tensors of rank <= k: exact Choi
/// eigenvalues at k = min(n,r), sampled rank-constrained minimization below.
RankVerdict k_positive(const MatrixMap& h, int k, const OptimBudget& budget = {},
                       std::uint64_t seed = 29);

/// All levels 1..min(n,r) with warm-started chaining (keeps minima monotone).
std::vector<RankVerdict> k_positive_profile(const MatrixMap& h, const OptimBudget& budget = {},
                                            std::uint64_t seed = 29);

/// Kraus factors K_p (r x n, at most n*r of them) with H(X) = sum K_p X K_p^*;
/// requires a PSD Choi matrix.
std::vector<Eigen::MatrixXcd> kraus_decompose(const MatrixMap& h, double tol = 1e-9);

/// The pair (H', H'') attached to H by the natural isomorphisms; both are
/// assembled from their defining relations. H'' coincides entrywise with the
/// transpose of the Choi matrix.
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> h_prime_pair(const MatrixMap& h);

// ---------------------------------------------------------------------------
// positive-map zoo

struct ZooEntry {
  std::string name;     // catalog key, e.g. "choi3", "kpositive(3,2)"
  std::string cite;     // short provenance tag
  int n = 0, r = 0;
  std::vector<VerdictKind> expected_k;  // expected k_positive verdicts, k = 1..min(n,r)
  bool completely_positive = false;
  bool co_completely_positive = false;
  int decomposable_expected = 1;  // 1 = witness expected, 0 = NotFound expected
};

/// Named maps. Parameterized entries: "identity", "transpose", "reduction"
/// take dim; "conjugation", "schneider-transpose" use diag(1..dim);
/// "choi3" is fixed at 3x3; "kpositive" takes (dim, k).
MatrixMap zoo(const std::string& name, int dim = 3, int k = 1);

/// Catalog shipped with expected positivity profiles (re-derived by tests).
std::vector<ZooEntry> zoo_catalog();

/// The map a catalog entry describes.
MatrixMap zoo_entry_map(const ZooEntry& e);

// ---------------------------------------------------------------------------
// open-problem search

enum class MapKind { CP, CoCP, Decomposable, Conjugation, SchneiderTranspose };

std::string kind_name(MapKind k);
MapKind kind_from_string(const std::string& s);  // throws ConfigInvalid

/// Positive-by-construction sample of the requested kind.
MatrixMap random_positive_map(int n, int r, MapKind kind, std::uint64_t seed);

struct SearchConfig {
  int r = 2;
  int samples = 100;
  std::vector<MapKind> kinds = {MapKind::CP, MapKind::CoCP, MapKind::Decomposable,
                                MapKind::Conjugation, MapKind::SchneiderTranspose};
  std::uint64_t seed = 1;
};

struct SearchRecord {
  std::uint64_t seed = 0;
  std::string kind;
  std::string params;
  std::string certificate;
  double dmd_value = 0;
  std::vector<std::string> flags;
};

struct SearchSummary {
  std::vector<SearchRecord> records;
  double min_value = 0;
  std::string min_descriptor;
  int review_count = 0;                    // certified-positive samples below -1e-6
  bool certified_nonnegative_ok = true;    // all certified samples gave dmd >= -1e-10
};

/// Samples maps, certifies them, evaluates the double mixed discriminant and
/// reports the global minimum. Values below -1e-6 on certified samples are
/// flagged REVIEW, never auto-claimed as counterexamples.
SearchSummary search_open_problem(const SearchConfig& config);

}  // namespace positools
