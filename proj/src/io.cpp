#include "positools/io.hpp"

namespace positools {

using nlohmann::json;

json tensor_to_json(const CurvatureTensor& t) {
  json entries = json::array();
  for (int j = 0; j < t.n(); ++j)
    for (int k = 0; k < t.n(); ++k)
      for (int l = 0; l < t.r(); ++l)
        for (int m = 0; m < t.r(); ++m) {
          const Complex c = t.at(j, k, l, m);
          if (c == Complex(0, 0)) continue;
          entries.push_back({{"j", j + 1},
                             {"k", k + 1},
                             {"lambda", l + 1},
                             {"mu", m + 1},
                             {"re", c.real()},
                             {"im", c.imag()}});
        }
  return json{{"n", t.n()}, {"r", t.r()}, {"entries", std::move(entries)}};
}

namespace {

std::vector<Complex> entries_to_array(const json& doc, int n, int r) {
  std::vector<Complex> c(static_cast<std::size_t>(n) * n * r * r, Complex(0, 0));
  const auto idx = [&](int j, int k, int l, int m) {
    return ((static_cast<std::size_t>(j) * n + k) * r + l) * r + m;
  };
  for (const json& e : doc.at("entries")) {
    const int j = e.at("j").get<int>(), k = e.at("k").get<int>();
    const int l = e.at("lambda").get<int>(), m = e.at("mu").get<int>();
    if (j < 1 || j > n || k < 1 || k > n || l < 1 || l > r || m < 1 || m > r)
      throw DocumentInvalid("entry index out of range");
    c[idx(j - 1, k - 1, l - 1, m - 1)] +=
        Complex(e.at("re").get<double>(), e.value("im", 0.0));
  }
  return c;
}

}  // namespace

CurvatureTensor tensor_from_json(const json& doc) {
  try {
    const int n = doc.at("n").get<int>();
    const int r = doc.at("r").get<int>();
    if (n < 1 || r < 1 || n > 8) throw DocumentInvalid("tensor dimensions out of range");
    return CurvatureTensor::from_components(n, r, entries_to_array(doc, n, r));
  } catch (const json::exception& e) {
    throw DocumentInvalid(std::string("malformed tensor document: ") + e.what());
  } catch (const SymmetryViolation& e) {
    throw DocumentInvalid(std::string("tensor document violates Hermitian symmetry"));
  } catch (const ShapeMismatch& e) {
    throw DocumentInvalid(e.what());
  }
}

json map_to_json(const MatrixMap& h, const std::string& kind) {
  json entries = json::array();
  for (int j = 0; j < h.n(); ++j)
    for (int k = 0; k < h.n(); ++k)
      for (int l = 0; l < h.r(); ++l)
        for (int m = 0; m < h.r(); ++m) {
          const Complex c = h.at(j, k, l, m);
          if (c == Complex(0, 0)) continue;
          entries.push_back({{"j", j + 1},
                             {"k", k + 1},
                             {"lambda", l + 1},
                             {"mu", m + 1},
                             {"re", c.real()},
                             {"im", c.imag()}});
        }
  return json{{"n", h.n()}, {"r", h.r()}, {"kind", kind}, {"payload", {{"entries", entries}}}};
}

MatrixMap map_from_json(const json& doc) {
  try {
    const int n = doc.at("n").get<int>();
    const int r = doc.at("r").get<int>();
    if (n < 1 || r < 1) throw DocumentInvalid("map dimensions out of range");
    MatrixMap h(n, r);
    for (const json& e : doc.at("payload").at("entries")) {
      const int j = e.at("j").get<int>(), k = e.at("k").get<int>();
      const int l = e.at("lambda").get<int>(), m = e.at("mu").get<int>();
      if (j < 1 || j > n || k < 1 || k > n || l < 1 || l > r || m < 1 || m > r)
        throw DocumentInvalid("entry index out of range");
      h.at(j - 1, k - 1, l - 1, m - 1) += Complex(e.at("re").get<double>(), e.value("im", 0.0));
    }
    return h;
  } catch (const json::exception& e) {
    throw DocumentInvalid(std::string("malformed map document: ") + e.what());
  }
}

json form_to_json(const ExteriorForm& f) {
  json terms = json::array();
  for (const auto& [key, c] : f.terms()) {
    terms.push_back({{"I", mask_to_indices(key.first)},
                     {"J", mask_to_indices(key.second)},
                     {"re", c.real()},
                     {"im", c.imag()}});
  }
  return json{{"dim", f.dim()}, {"p", f.pdeg()}, {"q", f.qdeg()}, {"terms", std::move(terms)}};
}

json verdict_to_json(const RankVerdict& v) {
  const char* kind = v.kind == VerdictKind::Positive
                         ? "positive"
                         : (v.kind == VerdictKind::SemiDefinite ? "semidefinite" : "indefinite");
  return json{{"verdict", kind}, {"min_value", v.min_value}, {"at_budget", v.at_budget}};
}

json report_to_json(const PositivityReport& r) {
  json kn = json::array(), kdn = json::array();
  for (const auto& v : r.k_nakano) kn.push_back(verdict_to_json(v));
  for (const auto& v : r.k_dual_nakano) kdn.push_back(verdict_to_json(v));
  return json{{"griffiths", verdict_to_json(r.griffiths)},
              {"nakano", verdict_to_json(r.nakano)},
              {"dual_nakano", verdict_to_json(r.dual_nakano)},
              {"k_nakano", std::move(kn)},
              {"k_dual_nakano", std::move(kdn)}};
}

json search_record_to_json(const SearchRecord& rec) {
  return json{{"seed", rec.seed},        {"kind", rec.kind},
              {"params", rec.params},    {"certificate", rec.certificate},
              {"dmd_value", rec.dmd_value}, {"flags", rec.flags}};
}

}  // namespace positools
