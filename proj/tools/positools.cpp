// positools: command-line surface for the curvature-positivity laboratory.
//
// Subcommands: classify | schur | verify | search | zoo.
// Exit codes: 0 success, 2 input/validation error, 3 internal error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "positools/discriminant.hpp"
#include "positools/fiber.hpp"
#include "positools/io.hpp"
#include "positools/opsearch.hpp"
#include "positools/psi.hpp"
#include "positools/rng.hpp"

using namespace positools;
using nlohmann::json;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("invalid JSON in " + path + ": " + e.what());
  }
}

std::vector<int> parse_partition(const std::string& text) {
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      parts.push_back(std::stoi(item));
    } catch (...) {
      throw InputError("cannot parse partition: " + text);
    }
  }
  return parts;
}

int run_classify(const std::string& file, double tol, int restarts, std::uint64_t seed) {
  const CurvatureTensor t = tensor_from_json(read_json_file(file));
  OptimBudget budget;
  budget.restarts = restarts;
  const PositivityReport rep = classify(t, tol, budget, seed);
  std::cout << report_to_json(rep).dump(2) << "\n";
  return 0;
}

int run_schur(const std::string& file, const std::string& partition, bool test_positivity,
              double tol) {
  const CurvatureTensor t = tensor_from_json(read_json_file(file));
  Partition a = [&] {
    try {
      return Partition(parse_partition(partition), t.r());
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("bad partition: ") + e.what());
    }
  }();
  if (a.weight() > t.n()) throw InputError("partition weight exceeds the base dimension");
  const ExteriorForm form = schur_form(t, a);
  json out{{"partition", a.parts()}, {"form", form_to_json(form)}};
  if (test_positivity) {
    const PositivityVerdict v = is_positive(form, tol);
    const char* kind = v.kind == Positivity::PositiveDefinite
                           ? "positive-definite"
                           : (v.kind == Positivity::PositiveSemidefinite ? "positive-semidefinite"
                                                                         : "indefinite");
    out["positivity"] = {{"verdict", kind}, {"min_eigenvalue", v.min_eigenvalue}};
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct SuiteResult {
  std::string name;
  int trials = 0;
  double max_deviation = 0;
  double tol = 0;
  bool pass() const { return trials == 0 || max_deviation <= tol; }
};

SuiteResult suite_tilde_c(int trials, std::uint64_t seed) {
  SuiteResult res{"tilde-c", trials, 0, 1e-9};
  for (int i = 0; i < trials; ++i) {
    const int n = 2 + i % 2;
    const CurvatureTensor t = random_hermitian(n, n, derive_seed(seed, i));
    const Eigen::MatrixXcd via_psi = tilde_top_chern(t).matrix;
    const Eigen::MatrixXcd via_form = form_operator(chern_forms(t)[n]).matrix;
    const double dev = (via_psi - via_form).cwiseAbs().maxCoeff() /
                       std::max(1.0, via_form.cwiseAbs().maxCoeff());
    res.max_deviation = std::max(res.max_deviation, dev);
  }
  return res;
}

SuiteResult suite_plane(int trials, std::uint64_t seed) {
  SuiteResult res{"plane", trials, 0, 1e-9};
  const std::vector<std::pair<int, int>> dims = {{2, 2}, {3, 2}, {3, 3}};
  for (int i = 0; i < trials; ++i) {
    const auto [n, r] = dims[i % dims.size()];
    Rng rng(derive_seed(seed, 1000 + i));
    const CurvatureTensor t = random_hermitian(n, r, derive_seed(seed, i));
    const ComplexPlane plane(n, rng.gaussian_matrix(n, r));
    const double via_dmd = top_chern_on_plane(t, plane);
    const double via_restrict = restrict_to_plane(chern_forms(t)[r], plane);
    const double dev = std::abs(via_dmd - via_restrict) / std::max(1.0, std::abs(via_restrict));
    res.max_deviation = std::max(res.max_deviation, dev);
  }
  return res;
}

SuiteResult suite_segre(int trials, std::uint64_t seed, int resolution) {
  SuiteResult res{"segre", trials, 0, 1e-4};
  const QuadratureRule rule = QuadratureRule::p1(resolution);
  for (int i = 0; i < trials; ++i) {
    const int n = 2 + i % 2;
    const CurvatureTensor t = random_hermitian(n, 2, derive_seed(seed, i));
    for (int k = 1; k <= 2; ++k)
      res.max_deviation = std::max(res.max_deviation, verify_segre(t, k, rule).relative_deviation);
  }
  return res;
}

SuiteResult suite_jacobi_trudi(int trials, std::uint64_t seed, int resolution) {
  SuiteResult res{"jacobi-trudi", trials, 0, 1e-4};
  const QuadratureRule rule = QuadratureRule::p1(resolution);
  for (int i = 0; i < trials; ++i) {
    const int n = 2 + i % 2;
    const CurvatureTensor t = random_hermitian(n, 2, derive_seed(seed, i));
    for (const Partition& a : Partition::lambda_set(2, 2))
      res.max_deviation =
          std::max(res.max_deviation, verify_jacobi_trudi(t, a, rule).relative_deviation);
  }
  return res;
}

SuiteResult suite_nakano_push(int trials, std::uint64_t seed, int resolution) {
  SuiteResult res{"nakano-push", trials, 0, 1e-8};
  const QuadratureRule rule = QuadratureRule::p1(resolution);
  for (int i = 0; i < trials; ++i) {
    const int r = 2 + i % 2;
    const CurvatureTensor t = random_hermitian(r, r, derive_seed(seed, i));
    const auto rep = verify_nakano_pushforward(t, IndexMask{1}, rule, 32, derive_seed(seed, 50 + i));
    res.max_deviation = std::max(res.max_deviation, rep.max_deviation);
  }
  return res;
}

int run_verify(const std::string& suite, int trials, std::uint64_t seed, int resolution,
               const std::string& fixture) {
  if (!fixture.empty()) {
    // a fixture document must at least validate; a broken one names itself
    try {
      tensor_from_json(read_json_file(fixture));
    } catch (const std::exception& e) {
      throw InputError("fixture '" + fixture + "' failed validation: " + e.what());
    }
  }
  SuiteResult res;
  if (suite == "tilde-c")
    res = suite_tilde_c(trials, seed);
  else if (suite == "plane")
    res = suite_plane(trials, seed);
  else if (suite == "segre")
    res = suite_segre(trials, seed, resolution);
  else if (suite == "jacobi-trudi")
    res = suite_jacobi_trudi(trials, seed, resolution);
  else if (suite == "nakano-push")
    res = suite_nakano_push(trials, seed, resolution);
  else
    throw InputError("unknown suite: " + suite);

  std::ostringstream line;
  line.precision(17);
  line << "suite=" << res.name << " trials=" << res.trials << " max_deviation=" << res.max_deviation
       << " tol=" << res.tol << " status=" << (res.pass() ? "PASS" : "FAIL");
  std::cout << line.str() << "\n";
  return res.pass() ? 0 : 1;
}

int run_search(const std::string& config_path) {
  const json cfg = read_json_file(config_path);
  SearchConfig config;
  try {
    config.r = cfg.value("r", 2);
    config.samples = cfg.value("samples", 100);
    config.seed = cfg.value("seed", std::uint64_t{1});
    if (cfg.contains("kinds")) {
      config.kinds.clear();
      for (const auto& k : cfg.at("kinds")) config.kinds.push_back(kind_from_string(k.get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed search config: ") + e.what());
  }
  const std::string out_path = cfg.value("out", std::string{});

  SearchSummary summary;
  try {
    summary = search_open_problem(config);
  } catch (const ConfigInvalid& e) {
    throw InputError(e.what());
  }

  if (!out_path.empty()) {
    // resume-from-log: seeds already present are not rewritten
    std::set<std::uint64_t> done;
    {
      std::ifstream in(out_path);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
          done.insert(json::parse(line).at("seed").get<std::uint64_t>());
        } catch (...) {
          throw InputError("corrupt search log: " + out_path);
        }
      }
    }
    std::ofstream out(out_path, std::ios::app);
    if (!out) throw InputError("cannot open log for append: " + out_path);
    for (const SearchRecord& rec : summary.records)
      if (!done.count(rec.seed)) out << search_record_to_json(rec).dump() << "\n";
  }

  json js{{"samples", summary.records.size()},
          {"min_value", summary.min_value},
          {"min_descriptor", summary.min_descriptor},
          {"review_count", summary.review_count},
          {"certified_nonnegative_ok", summary.certified_nonnegative_ok}};
  std::cout << js.dump(2) << "\n";
  return summary.review_count == 0 ? 0 : 1;
}

int run_zoo(const std::string& name, int dim, int k) {
  if (name.empty()) {
    json out = json::array();
    for (const ZooEntry& e : zoo_catalog()) {
      json verdicts = json::array();
      for (const VerdictKind v : e.expected_k)
        verdicts.push_back(v == VerdictKind::Positive
                               ? "positive"
                               : (v == VerdictKind::SemiDefinite ? "semidefinite" : "indefinite"));
      out.push_back({{"name", e.name},
                     {"cite", e.cite},
                     {"n", e.n},
                     {"r", e.r},
                     {"expected_k", verdicts},
                     {"completely_positive", e.completely_positive},
                     {"co_completely_positive", e.co_completely_positive},
                     {"decomposable_expected", e.decomposable_expected}});
    }
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  try {
    const MatrixMap h = zoo(name, dim, k);
    std::cout << map_to_json(h, name).dump(2) << "\n";
  } catch (const UnknownMap& e) {
    throw InputError(e.what());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pointwise positivity laboratory for Hermitian bundle curvature"};
  app.require_subcommand(1);

  std::string file, partition = "1", suite, fixture, config_path, zoo_name;
  double tol = 1e-9;
  int restarts = 64, trials = 25, resolution = 256, dim = 3, kpar = 1;
  std::uint64_t seed = 1;
  bool test_positivity = false;

  auto* classify_cmd = app.add_subcommand("classify", "positivity report for a tensor document");
  classify_cmd->add_option("file", file)->required();
  classify_cmd->add_option("--tol", tol);
  classify_cmd->add_option("--budget", restarts);
  classify_cmd->add_option("--seed", seed);

  auto* schur_cmd = app.add_subcommand("schur", "Schur form of a tensor document");
  schur_cmd->add_option("file", file)->required();
  schur_cmd->add_option("--partition", partition);
  schur_cmd->add_flag("--test-positivity", test_positivity);
  schur_cmd->add_option("--tol", tol);

  auto* verify_cmd = app.add_subcommand("verify", "numerical verification suites");
  verify_cmd->add_option("--suite", suite)->required();
  verify_cmd->add_option("--trials", trials);
  verify_cmd->add_option("--seed", seed);
  verify_cmd->add_option("--resolution", resolution);
  verify_cmd->add_option("--file", fixture);

  auto* search_cmd = app.add_subcommand("search", "open-problem sampling harness");
  search_cmd->add_option("--config", config_path)->required();

  auto* zoo_cmd = app.add_subcommand("zoo", "positive-map catalog");
  zoo_cmd->add_option("--name", zoo_name);
  zoo_cmd->add_option("--dim", dim);
  zoo_cmd->add_option("--k", kpar);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (classify_cmd->parsed()) return run_classify(file, tol, restarts, seed);
    if (schur_cmd->parsed()) return run_schur(file, partition, test_positivity, tol);
    if (verify_cmd->parsed()) return run_verify(suite, trials, seed, resolution, fixture);
    if (search_cmd->parsed()) return run_search(config_path);
    if (zoo_cmd->parsed()) return run_zoo(zoo_name, dim, kpar);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const DocumentInvalid& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
