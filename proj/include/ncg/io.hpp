#pragma once

// JSON encodings for triples, elements, states, routings, morphisms, grid
// specs and reports. Complex numbers are [re, im]; dense matrices are
// row-major arrays of rows; large operators may use
//   {"rows": r, "cols": c, "entries": [[i, j, [re, im]], ...]}.
// Output goes through dump() so every double carries 17 significant digits.

#include "ncg/hodge.hpp"
#include "ncg/morphisms.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace ncg::io {

using json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrices above this dimension are written in the sparse encoding.
inline constexpr int kDenseLimit = 256;

// ---------------------------------------------------------------------------
// Serialisation

namespace detail {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  if (v == 0.0) v = 0.0;  // no "-0.0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

inline void dump_into(std::ostringstream& os, const json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* sep = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        os << (first ? "" : ",") << pad << json(it.key()).dump() << sep;
        dump_into(os, it.value(), indent, depth + 1);
        first = false;
      }
      os << close << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Scalar lists and matrix rows (lists of complex pairs) stay on one line.
      auto scalar_list = [](const json& a) {
        if (!a.is_array()) return false;
        for (const auto& e : a) {
          if (e.is_structured()) return false;
        }
        return true;
      };
      bool flat = true;
      for (const auto& e : j) flat = flat && (!e.is_structured() || (scalar_list(e) && e.size() <= 3));
      os << '[';
      bool first = true;
      for (const auto& e : j) {
        os << (first ? "" : (flat ? ", " : ",")) << (flat ? "" : pad);
        dump_into(os, e, indent, depth + 1);
        first = false;
      }
      os << (flat ? "" : close) << ']';
      return;
    }
    case json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace detail

inline std::string dump(const json& j, int indent = 2) {
  std::ostringstream os;
  detail::dump_into(os, j, indent, 0);
  if (indent > 0) os << '\n';
  return os.str();
}

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json_sparse(const SparseMatrix& m) {
  json entries = json::array();
  std::vector<std::tuple<Eigen::Index, Eigen::Index, Complex>> t;
  for (Eigen::Index o = 0; o < m.outerSize(); ++o) {
    for (SparseMatrix::InnerIterator it(m, o); it; ++it) {
      if (it.value() != Complex(0.0)) t.emplace_back(it.row(), it.col(), it.value());
    }
  }
  std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  for (const auto& [r, c, v] : t) entries.push_back(json::array({r, c, to_json(v)}));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

inline json to_json(const SparseMatrix& m) {
  if (m.rows() > kDenseLimit || m.cols() > kDenseLimit) return to_json_sparse(m);
  return to_json(to_dense(m));
}

inline json to_json(const AlgebraElement& a) {
  json blocks = json::array();
  for (const auto& b : a.blocks) blocks.push_back(to_json(b));
  return {{"blocks", std::move(blocks)}};
}

inline json to_json(const FiniteSpectralTriple& t) {
  json rep = json::array();
  for (int k = 0; k < t.rep.size(); ++k) rep.push_back(to_json(t.rep.image(k)));
  return {{"blocks", t.algebra.block_dims()},
          {"hilbert_dim", t.hilbert_dim},
          {"rep", std::move(rep)},
          {"dirac", to_json(t.dirac)},
          {"grading", t.grading ? to_json(*t.grading) : json(nullptr)}};
}

inline json to_json(const ExtendedReal& v) { return v.infinite ? json("inf") : json(v.value); }

inline json to_json(const DistanceResult& r) {
  return {{"value", to_json(r.value)}, {"certificate", to_json(r.certificate)}, {"iterations", r.iterations}};
}

inline json to_json(const PureState& p) {
  if (p.kind == PureState::Kind::evaluation) return {{"kind", "evaluation"}, {"block", p.block}};
  json xi = json::array();
  for (Eigen::Index i = 0; i < p.xi.size(); ++i) xi.push_back(to_json(p.xi(i)));
  return {{"kind", "vector"}, {"block", p.block}, {"xi", std::move(xi)}};
}

inline json to_json(const State& s) {
  if (s.is_pure()) return to_json(s.terms.front().second);
  json terms = json::array();
  for (const auto& [w, p] : s.terms) terms.push_back(json::array({w, to_json(p)}));
  return {{"mixture", std::move(terms)}};
}

inline json to_json(const BlockHomomorphism& phi) {
  json routes = json::array();
  for (const auto& r : phi.routing()) {
    routes.push_back({{"target_block", r.target_block},
                      {"source_block", r.source_block},
                      {"conjugation", r.conjugation ? to_json(*r.conjugation) : json(nullptr)}});
  }
  return {{"routing", std::move(routes)}};
}

inline json to_json(const SmoothMorphism& m) {
  return {{"phi", to_json(m.phi)}, {"u", to_json(m.u)}, {"source", to_json(*m.source)}, {"target", to_json(*m.target)}};
}

inline json to_json(const ClassificationReport& r) {
  return {{"flags",
           {{"smooth_morphism", r.smooth_morphism},
            {"embedding", r.embedding},
            {"connes_isometric", r.connes_isometric},
            {"riemannian", r.riemannian},
            {"totally_geodesic", r.totally_geodesic},
            {"isometric", r.isometric}}},
          {"residuals",
           {{"smooth_morphism", r.smooth_residual},
            {"riemannian", r.riemannian_residual},
            {"totally_geodesic", r.totally_geodesic_residual},
            {"connes_isometric_gap", r.connes_gap},
            {"isometric_gap", r.isometric_gap},
            {"dirac_projection_commutator", r.dirac_p_commutator},
            {"norm_equality_gap", r.norm_equality_gap}}},
          {"coisometry", r.coisometry},
          {"state_set", r.state_set},
          {"notes", r.notes}};
}

inline json to_json(const ValidationReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) {
    json item = {{"kind", to_string(x.kind)}, {"residual", x.residual}, {"detail", x.detail}};
    if (x.basis_pair) item["basis_pair"] = json::array({x.basis_pair->first, x.basis_pair->second});
    v.push_back(std::move(item));
  }
  return {{"valid", r.ok()}, {"violations", std::move(v)}, {"notes", r.notes}};
}

// ---------------------------------------------------------------------------
// Parsing

inline Complex complex_from(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  throw FormatError("expected a complex number [re, im], got " + j.dump());
}

inline SparseMatrix sparse_from(const json& j, int rows, int cols) {
  if (j.is_object()) {
    const int r = j.at("rows").get<int>();
    const int c = j.at("cols").get<int>();
    if (r != rows || c != cols) {
      throw FormatError("matrix is " + ncg::detail::shape_string(r, c) + ", expected " + ncg::detail::shape_string(rows, cols));
    }
    std::vector<Triplet> t;
    for (const auto& e : j.at("entries")) {
      const int i = e.at(0).get<int>();
      const int k = e.at(1).get<int>();
      if (i < 0 || i >= r || k < 0 || k >= c) throw FormatError("sparse entry out of range");
      t.emplace_back(i, k, complex_from(e.at(2)));
    }
    SparseMatrix m(r, c);
    m.setFromTriplets(t.begin(), t.end());
    return m;
  }
  if (!j.is_array() || static_cast<int>(j.size()) != rows) throw FormatError("matrix must have " + std::to_string(rows) + " rows");
  std::vector<Triplet> t;
  for (int i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) throw FormatError("matrix row " + std::to_string(i) + " has wrong length");
    for (int k = 0; k < cols; ++k) {
      const Complex z = complex_from(row[static_cast<std::size_t>(k)]);
      if (z != Complex(0.0)) t.emplace_back(i, k, z);
    }
  }
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

inline Matrix matrix_from(const json& j, int rows, int cols) { return to_dense(sparse_from(j, rows, cols)); }

/// Matrix of unknown shape (dense encoding only).
inline Matrix matrix_from(const json& j) {
  if (j.is_object()) return to_dense(sparse_from(j, j.at("rows").get<int>(), j.at("cols").get<int>()));
  if (!j.is_array() || j.empty()) throw FormatError("expected a non-empty matrix");
  return matrix_from(j, static_cast<int>(j.size()), static_cast<int>(j[0].size()));
}

inline FiniteSpectralTriple triple_from(const json& j) {
  try {
    const auto blocks = j.at("blocks").get<std::vector<int>>();
    const int h = j.at("hilbert_dim").get<int>();
    if (h < 1) throw FormatError("hilbert_dim must be positive");
    FiniteAlgebra alg(blocks);
    const auto& rep = j.at("rep");
    if (!rep.is_array() || static_cast<int>(rep.size()) != alg.dimension()) {
      throw FormatError("rep must list " + std::to_string(alg.dimension()) + " basis images");
    }
    std::vector<SparseMatrix> images;
    for (const auto& m : rep) images.push_back(sparse_from(m, h, h));
    std::optional<SparseMatrix> grading;
    if (j.contains("grading") && !j.at("grading").is_null()) grading = sparse_from(j.at("grading"), h, h);
    return FiniteSpectralTriple(std::move(alg), h, images, sparse_from(j.at("dirac"), h, h), std::move(grading));
  } catch (const json::exception& e) {
    throw FormatError(std::string("triple: ") + e.what());
  }
}

inline PureState pure_state_from(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const int block = j.at("block").get<int>();
  if (kind == "evaluation") return PureState::evaluation(block);
  if (kind == "vector") {
    const auto& xi = j.at("xi");
    Vector v(static_cast<Eigen::Index>(xi.size()));
    for (std::size_t i = 0; i < xi.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from(xi[i]);
    return PureState::vector_state(block, v);
  }
  throw FormatError("unknown state kind '" + kind + "'");
}

inline State state_from(const json& j) {
  try {
    if (j.contains("mixture")) {
      State s;
      for (const auto& t : j.at("mixture")) s.terms.emplace_back(t.at(0).get<double>(), pure_state_from(t.at(1)));
      return s;
    }
    return pure_state_from(j);
  } catch (const json::exception& e) {
    throw FormatError(std::string("state: ") + e.what());
  }
}

/// Short forms: "e3" (evaluation on block 3), "v1:0" (basis vector 0 of block 1).
inline State state_from_token(const std::string& s, const FiniteAlgebra& alg) {
  try {
    if (!s.empty() && s[0] == 'e') {
      const PureState p = PureState::evaluation(std::stoi(s.substr(1)));
      p.check(alg);  // ShapeError is an invalid_argument: reported below
      return p;
    }
    if (!s.empty() && s[0] == 'v') {
      const auto colon = s.find(':');
      if (colon == std::string::npos) throw FormatError("vector state token needs block:index");
      const int block = std::stoi(s.substr(1, colon - 1));
      const int idx = std::stoi(s.substr(colon + 1));
      const int n = alg.block_dim(block);
      if (idx < 0 || idx >= n) throw FormatError("vector state index out of range");
      return PureState::vector_state(block, Vector::Unit(n, idx));
    }
  } catch (const std::invalid_argument&) {
  } catch (const std::out_of_range&) {
  }
  throw FormatError("cannot parse state '" + s + "' (use e<block> or v<block>:<index>)");
}

inline BlockHomomorphism homomorphism_from(const json& j, const FiniteAlgebra& source, const FiniteAlgebra& target) {
  try {
    std::vector<Route> routes;
    for (const auto& r : j.at("routing")) {
      Route route{r.at("target_block").get<int>(), r.at("source_block").get<int>(), std::nullopt};
      if (r.contains("conjugation") && !r.at("conjugation").is_null()) route.conjugation = matrix_from(r.at("conjugation"));
      routes.push_back(std::move(route));
    }
    return BlockHomomorphism(source, target, std::move(routes));
  } catch (const json::exception& e) {
    throw FormatError(std::string("routing: ") + e.what());
  }
}

struct GridSpecJson {
  std::string kind = "circle";
  int n = 32;
  int ntheta = 32;
  int nphi = 32;
  double c = 3.0;
  TorusMetric metric = TorusMetric::embedded;
};

inline GridSpecJson grid_spec_from(const json& j) {
  GridSpecJson g;
  g.kind = j.value("kind", std::string("circle"));
  g.n = j.value("n", g.n);
  g.ntheta = j.value("ntheta", g.ntheta);
  g.nphi = j.value("nphi", g.nphi);
  g.c = j.value("c", g.c);
  const std::string metric = j.value("metric", std::string("embedded"));
  if (metric == "flat") {
    g.metric = TorusMetric::flat;
  } else if (metric != "embedded") {
    throw FormatError("unknown metric '" + metric + "'");
  }
  if (g.kind != "circle" && g.kind != "torus" && g.kind != "union") throw FormatError("unknown grid kind '" + g.kind + "'");
  return g;
}

inline DiscreteHodgeTriple build_grid(const GridSpecJson& g) {
  if (g.kind == "circle") return build_circle(CircleGrid::flat(g.n));
  if (g.kind == "torus") return build_torus({g.ntheta, g.nphi, g.c, g.metric});
  return disjoint_union(build_circle(CircleGrid::flat(g.n)), build_circle(CircleGrid::flat(g.n)));
}

inline json read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw FormatError("cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(p.string() + ": " + e.what());
  }
}

/// Off-diagonal entries of F_N: one number or [re, im] for all of them, or
/// a list of N(N-1)/2 values in (i<j) order.
inline std::vector<Complex> npoint_offdiag(const json& x, int n) {
  const std::size_t count = static_cast<std::size_t>(n * (n - 1) / 2);
  // N(N-1)/2 is never 2, so a two-number array is always a single [re, im].
  if (x.is_number() || (x.is_array() && x.size() == 2 && x[0].is_number())) return std::vector<Complex>(count, complex_from(x));
  if (!x.is_array() || x.size() != count) throw FormatError("x: expected " + std::to_string(count) + " entries");
  std::vector<Complex> out;
  for (const auto& v : x) out.push_back(complex_from(v));
  return out;
}

/// Named constructions: {"kind": "npoint", "n": 3, "x": 1}, {"kind": "f_ed",
/// "d": 1}, {"kind": "trivial", "m": 2}, or any grid spec kind.
inline FiniteSpectralTriple triple_from_spec(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "npoint") {
      const int n = j.at("n").get<int>();
      if (n < 2) throw FormatError("npoint: n must be at least 2");
      return build_npoint(n, npoint_offdiag(j.value("x", json(1.0)), n));
    }
    if (kind == "f_ed") return build_f_ed(complex_from(j.value("d", json(1.0))));
    if (kind == "trivial") return build_trivial(j.value("m", 1));
    return build_grid(grid_spec_from(j)).triple;
  } catch (const json::exception& e) {
    throw FormatError(std::string("build spec: ") + e.what());
  }
}

/// A triple reference: inline triple object, path string (relative to
/// `base`), {"grid": spec} or {"build": spec}.
inline FiniteSpectralTriple triple_ref_from(const json& j, const std::filesystem::path& base) {
  if (j.is_string()) {
    std::filesystem::path p = j.get<std::string>();
    if (p.is_relative()) p = base / p;
    return triple_from(read_file(p));
  }
  if (j.contains("grid")) return build_grid(grid_spec_from(j.at("grid"))).triple;
  if (j.contains("build")) return triple_from_spec(j.at("build"));
  return triple_from(j);
}

/// Standard morphisms by name:
///   {"kind": "npoint", "n": N, "x": ...}            F_N → F_{N-1}
///   {"kind": "f_ed", "d": d}                        F_ED → C² (trivial)
///   {"kind": "almost_commutative", "even": ref, "d": d}
///   {"kind": "identity", "triple": ref}
inline SmoothMorphism construction_from(const json& j, const std::filesystem::path& base) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "npoint") {
    const int n = j.at("n").get<int>();
    if (n < 3) throw FormatError("npoint morphism: n must be at least 3");
    return npoint_morphism(n, npoint_offdiag(j.value("x", json(1.0)), n));
  }
  if (kind == "f_ed") return f_ed_morphism(complex_from(j.value("d", json(1.0))));
  if (kind == "almost_commutative") {
    return almost_commutative_morphism(triple_ref_from(j.at("even"), base), complex_from(j.value("d", json(1.0))));
  }
  if (kind == "identity") return identity_morphism(triple_ref_from(j.at("triple"), base));
  throw FormatError("unknown construction '" + kind + "'");
}

inline SmoothMorphism morphism_from(const json& j, const std::filesystem::path& base = ".") {
  try {
    if (j.contains("construction")) return construction_from(j.at("construction"), base);
    FiniteSpectralTriple t2 = triple_ref_from(j.at("source"), base);
    FiniteSpectralTriple t1 = triple_ref_from(j.at("target"), base);
    BlockHomomorphism phi = homomorphism_from(j.at("phi"), t2.algebra, t1.algebra);
    SparseMatrix u = sparse_from(j.at("u"), t1.hilbert_dim, t2.hilbert_dim);
    return SmoothMorphism(std::move(phi), std::move(u), std::move(t2), std::move(t1));
  } catch (const json::exception& e) {
    throw FormatError(std::string("morphism: ") + e.what());
  }
}

}  // namespace ncg::io
