#pragma once

// Finite spectral triples (A, H, D[, γ]) with the representation stored as
// the images of the algebra's matrix-unit basis.

#include "ncg/algebra.hpp"

#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace ncg {

struct RepEntry {
  int row;
  int col;
  Complex value;
};

/// Images π(E_k) of the matrix-unit basis, stored as one flat entry list so
/// large commutative triples do not pay per-image sparse-matrix overhead.
class Representation {
 public:
  Representation() = default;
  explicit Representation(int hilbert_dim) : dim_(hilbert_dim) {}
  Representation(int hilbert_dim, const std::vector<SparseMatrix>& images) : dim_(hilbert_dim) {
    for (const auto& m : images) push_back(m);
  }

  int hilbert_dim() const { return dim_; }
  int size() const { return static_cast<int>(offsets_.size()) - 1; }

  void push_back(std::vector<RepEntry> entries) {
    for (const auto& e : entries) {
      if (e.row < 0 || e.row >= dim_ || e.col < 0 || e.col >= dim_) throw ShapeError("representation entry out of range");
    }
    entries_.insert(entries_.end(), entries.begin(), entries.end());
    offsets_.push_back(entries_.size());
  }

  void push_back(const SparseMatrix& m) {
    if (m.rows() != dim_ || m.cols() != dim_) {
      throw ShapeError("basis image must be " + std::to_string(dim_) + "x" + std::to_string(dim_));
    }
    std::vector<RepEntry> e;
    for (Eigen::Index o = 0; o < m.outerSize(); ++o) {
      for (SparseMatrix::InnerIterator it(m, o); it; ++it) {
        if (it.value() != Complex(0.0)) e.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()), it.value()});
      }
    }
    push_back(std::move(e));
  }

  std::span<const RepEntry> operator[](int k) const {
    if (k < 0 || k >= size()) throw ShapeError("basis image index out of range");
    return {entries_.data() + offsets_[static_cast<std::size_t>(k)],
            offsets_[static_cast<std::size_t>(k) + 1] - offsets_[static_cast<std::size_t>(k)]};
  }

  SparseMatrix image(int k) const {
    std::vector<Triplet> t;
    for (const auto& e : (*this)[k]) t.emplace_back(e.row, e.col, e.value);
    SparseMatrix m(dim_, dim_);
    m.setFromTriplets(t.begin(), t.end());
    return m;
  }

  /// Copy with image k replaced.
  Representation with_image(int k, const SparseMatrix& m) const {
    Representation out(dim_);
    for (int i = 0; i < size(); ++i) out.push_back(i == k ? m : image(i));
    return out;
  }

 private:
  int dim_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<RepEntry> entries_;
};

struct FiniteSpectralTriple {
  FiniteAlgebra algebra;
  int hilbert_dim = 0;
  Representation rep;
  SparseMatrix dirac;
  std::optional<SparseMatrix> grading;

  FiniteSpectralTriple() = default;

  FiniteSpectralTriple(FiniteAlgebra a, int hdim, const std::vector<SparseMatrix>& images, SparseMatrix d,
                       std::optional<SparseMatrix> gamma = std::nullopt)
      : FiniteSpectralTriple(std::move(a), hdim, Representation(hdim, images), std::move(d), std::move(gamma)) {}

  FiniteSpectralTriple(FiniteAlgebra a, int hdim, Representation images, SparseMatrix d,
                       std::optional<SparseMatrix> gamma = std::nullopt)
      : algebra(std::move(a)), hilbert_dim(hdim), rep(std::move(images)), dirac(std::move(d)), grading(std::move(gamma)) {
    if (hilbert_dim < 1) throw ShapeError("triple: hilbert_dim must be >= 1");
    if (rep.hilbert_dim() != hilbert_dim) throw ShapeError("triple: representation acts on the wrong space");
    if (rep.size() != algebra.dimension()) {
      throw ShapeError("triple: expected " + std::to_string(algebra.dimension()) + " basis images, got " +
                       std::to_string(rep.size()));
    }
    require_square(dirac, "dirac");
    if (grading) require_square(*grading, "grading");
    dirac.makeCompressed();
  }

  SparseMatrix represent_coordinates(const Vector& coords) const {
    if (coords.size() != algebra.dimension()) throw ShapeError("represent: coordinate length mismatch");
    std::vector<Triplet> entries;
    for (Eigen::Index k = 0; k < coords.size(); ++k) {
      if (coords(k) == Complex(0.0)) continue;
      for (const auto& e : rep[static_cast<int>(k)]) entries.emplace_back(e.row, e.col, coords(k) * e.value);
    }
    SparseMatrix out(hilbert_dim, hilbert_dim);
    out.setFromTriplets(entries.begin(), entries.end());
    return out;
  }

  SparseMatrix represent(const AlgebraElement& a) const { return represent_coordinates(algebra.coordinates(a)); }

  /// [D, π(a)].
  SparseMatrix dirac_commutator(const AlgebraElement& a) const { return commutator(dirac, represent(a)); }

 private:
  void require_square(const SparseMatrix& m, const char* what) const {
    if (m.rows() != hilbert_dim || m.cols() != hilbert_dim) {
      throw ShapeError(std::string("triple: ") + what + " must be " + std::to_string(hilbert_dim) + "x" +
                       std::to_string(hilbert_dim));
    }
  }
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  dirac_not_self_adjoint,
  not_unital,
  not_multiplicative,
  not_star_preserving,
  not_faithful,
  grading_not_involution,
  grading_not_self_adjoint,
  grading_not_anticommuting,
  grading_not_commuting_with_algebra,
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::dirac_not_self_adjoint: return "dirac_not_self_adjoint";
    case ViolationKind::not_unital: return "not_unital";
    case ViolationKind::not_multiplicative: return "not_multiplicative";
    case ViolationKind::not_star_preserving: return "not_star_preserving";
    case ViolationKind::not_faithful: return "not_faithful";
    case ViolationKind::grading_not_involution: return "grading_not_involution";
    case ViolationKind::grading_not_self_adjoint: return "grading_not_self_adjoint";
    case ViolationKind::grading_not_anticommuting: return "grading_not_anticommuting";
    case ViolationKind::grading_not_commuting_with_algebra: return "grading_not_commuting_with_algebra";
  }
  return "unknown";
}

struct Violation {
  ViolationKind kind;
  double residual = 0.0;
  std::optional<std::pair<int, int>> basis_pair;  // (i, j) for product/adjoint failures
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> notes;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind k) const {
    for (const auto& v : violations) {
      if (v.kind == k) return true;
    }
    return false;
  }
  std::string summary() const {
    std::ostringstream os;
    if (ok()) os << "valid";
    for (const auto& v : violations) os << to_string(v.kind) << ": " << v.detail << "\n";
    return os.str();
  }
};

namespace detail {

// Basis elements whose image has a nonzero entry in a given column (resp. row).
struct SupportIndex {
  std::vector<std::vector<int>> by_col;
  std::vector<std::vector<int>> by_row;
};

inline SupportIndex support_index(const FiniteSpectralTriple& t) {
  SupportIndex s;
  s.by_col.resize(static_cast<std::size_t>(t.hilbert_dim));
  s.by_row.resize(static_cast<std::size_t>(t.hilbert_dim));
  for (int k = 0; k < t.rep.size(); ++k) {
    std::set<int> rows, cols;
    for (const auto& e : t.rep[k]) {
      rows.insert(e.row);
      cols.insert(e.col);
    }
    for (auto r : rows) s.by_row[static_cast<std::size_t>(r)].push_back(k);
    for (auto c : cols) s.by_col[static_cast<std::size_t>(c)].push_back(k);
  }
  return s;
}

// Entry-wise accumulation of Σ coef · image, keyed by (row, col).
using EntryMap = std::map<std::pair<int, int>, Complex>;

inline void accumulate(EntryMap& m, std::span<const RepEntry> img, Complex coef) {
  for (const auto& e : img) m[{e.row, e.col}] += coef * e.value;
}

inline EntryMap product(std::span<const RepEntry> a, std::span<const RepEntry> b) {
  std::map<int, std::vector<const RepEntry*>> b_by_row;
  for (const auto& e : b) b_by_row[e.row].push_back(&e);
  EntryMap out;
  for (const auto& ea : a) {
    auto it = b_by_row.find(ea.col);
    if (it == b_by_row.end()) continue;
    for (const RepEntry* eb : it->second) out[{ea.row, eb->col}] += ea.value * eb->value;
  }
  return out;
}

inline double max_abs(const EntryMap& m) {
  double best = 0.0;
  for (const auto& [k, v] : m) best = std::max(best, std::abs(v));
  return best;
}

}  // namespace detail

/// Checks every structural requirement on a finite triple. In finite
/// dimension Dom(D) = H and A¹ = A^∞ = A, so the density requirements hold
/// trivially; they are listed in the notes.
inline ValidationReport validate_triple(const FiniteSpectralTriple& t, double tol = 1e-10) {
  ValidationReport report;
  const auto& alg = t.algebra;
  const Eigen::Index h = t.hilbert_dim;
  report.notes.push_back("finite dimension: Dom(D) = H^1 = H^inf = H and A^1 = A^inf = A; density conditions hold");

  const SparseMatrix dadj = t.dirac.adjoint();
  const double herm = max_abs(SparseMatrix(t.dirac - dadj));
  if (herm > tol) {
    report.violations.push_back({ViolationKind::dirac_not_self_adjoint, herm, std::nullopt,
                                 "max |D - D*| = " + std::to_string(herm)});
  }

  detail::EntryMap unit;
  for (Eigen::Index i = 0; i < h; ++i) unit[{static_cast<int>(i), static_cast<int>(i)}] = -1.0;
  for (int b = 0; b < alg.num_blocks(); ++b) {
    for (int p = 0; p < alg.block_dim(b); ++p) detail::accumulate(unit, t.rep[alg.basis_position(b, p, p)], 1.0);
  }
  const double unital = detail::max_abs(unit);
  if (unital > tol) {
    report.violations.push_back({ViolationKind::not_unital, unital, std::nullopt,
                                 "max |pi(1) - Id| = " + std::to_string(unital)});
  }

  // Only pairs whose images can overlap, or whose algebra product is nonzero,
  // can violate multiplicativity; every other product is zero on both sides.
  const auto support = detail::support_index(t);
  std::set<std::pair<int, int>> candidates;
  for (Eigen::Index k = 0; k < h; ++k) {
    for (int i : support.by_col[static_cast<std::size_t>(k)]) {
      for (int j : support.by_row[static_cast<std::size_t>(k)]) candidates.emplace(i, j);
    }
  }
  for (int b = 0; b < alg.num_blocks(); ++b) {
    const int n = alg.block_dim(b);
    for (int p = 0; p < n; ++p) {
      for (int q = 0; q < n; ++q) {
        for (int s = 0; s < n; ++s) candidates.emplace(alg.basis_position(b, p, q), alg.basis_position(b, q, s));
      }
    }
  }
  for (const auto& [i, j] : candidates) {
    detail::EntryMap lhs = detail::product(t.rep[i], t.rep[j]);
    const auto prod = alg.basis_product(i, j);
    if (prod) detail::accumulate(lhs, t.rep[*prod], -1.0);
    const double r = detail::max_abs(lhs);
    if (r > tol) {
      report.violations.push_back({ViolationKind::not_multiplicative, r, std::make_pair(i, j),
                                   "pi(e" + std::to_string(i) + ") pi(e" + std::to_string(j) + ") != pi(e" +
                                       std::to_string(i) + " e" + std::to_string(j) + "), residual " + std::to_string(r)});
    }
  }

  for (int k = 0; k < alg.dimension(); ++k) {
    detail::EntryMap diff;
    for (const auto& e : t.rep[k]) diff[{e.col, e.row}] += std::conj(e.value);
    detail::accumulate(diff, t.rep[alg.basis_adjoint(k)], -1.0);
    const double r = detail::max_abs(diff);
    if (r > tol) {
      report.violations.push_back({ViolationKind::not_star_preserving, r, std::make_pair(k, alg.basis_adjoint(k)),
                                   "pi(e" + std::to_string(k) + ")* != pi(e" + std::to_string(k) + "*)"});
    }
  }

  // Injectivity as a linear map: Hilbert–Schmidt Gram matrix of the images
  // must be nonsingular. For large algebras fall back to the block-unit
  // criterion, which is exact for *-homomorphisms since each block is simple.
  if (alg.dimension() <= 512) {
    Matrix gram = Matrix::Zero(alg.dimension(), alg.dimension());
    std::map<std::pair<int, int>, std::vector<std::pair<int, Complex>>> by_entry;
    for (int k = 0; k < alg.dimension(); ++k) {
      for (const auto& e : t.rep[k]) by_entry[{e.row, e.col}].emplace_back(k, e.value);
    }
    for (const auto& [pos, list] : by_entry) {
      for (const auto& [i, vi] : list) {
        for (const auto& [j, vj] : list) gram(i, j) += std::conj(vi) * vj;
      }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
    const double bottom = es.eigenvalues().minCoeff();
    if (top == 0.0 || bottom <= 1e-12 * top) {
      report.violations.push_back({ViolationKind::not_faithful, bottom, std::nullopt,
                                   "basis images are linearly dependent (smallest Gram eigenvalue " +
                                       std::to_string(bottom) + ")"});
    }
  } else {
    for (int b = 0; b < alg.num_blocks(); ++b) {
      double mass = 0.0;
      for (const auto& e : t.rep[alg.basis_position(b, 0, 0)]) mass = std::max(mass, std::abs(e.value));
      if (mass <= tol) {
        report.violations.push_back({ViolationKind::not_faithful, 0.0, std::nullopt,
                                     "block " + std::to_string(b) + " is represented by zero"});
      }
    }
  }

  if (t.grading) {
    const SparseMatrix& g = *t.grading;
    const SparseMatrix g2 = g * g;
    const double inv = max_abs(SparseMatrix(g2 - sparse_identity(h)));
    if (inv > tol) report.violations.push_back({ViolationKind::grading_not_involution, inv, std::nullopt, "gamma^2 != Id"});
    const SparseMatrix gadj = g.adjoint();
    const double sa = max_abs(SparseMatrix(gadj - g));
    if (sa > tol) report.violations.push_back({ViolationKind::grading_not_self_adjoint, sa, std::nullopt, "gamma* != gamma"});
    const SparseMatrix gd = g * t.dirac;
    const SparseMatrix dg = t.dirac * g;
    const double anti = max_abs(SparseMatrix(gd + dg));
    if (anti > tol) {
      report.violations.push_back({ViolationKind::grading_not_anticommuting, anti, std::nullopt, "gamma D + D gamma != 0"});
    }
    std::vector<std::vector<std::pair<int, Complex>>> g_col(static_cast<std::size_t>(h)), g_row(static_cast<std::size_t>(h));
    for (Eigen::Index o = 0; o < g.outerSize(); ++o) {
      for (SparseMatrix::InnerIterator it(g, o); it; ++it) {
        g_col[static_cast<std::size_t>(it.col())].emplace_back(static_cast<int>(it.row()), it.value());
        g_row[static_cast<std::size_t>(it.row())].emplace_back(static_cast<int>(it.col()), it.value());
      }
    }
    for (int k = 0; k < alg.dimension(); ++k) {
      detail::EntryMap comm;
      for (const auto& e : t.rep[k]) {
        for (const auto& [i, gv] : g_col[static_cast<std::size_t>(e.row)]) comm[{i, e.col}] += gv * e.value;
        for (const auto& [j, gv] : g_row[static_cast<std::size_t>(e.col)]) comm[{e.row, j}] -= e.value * gv;
      }
      const double c = detail::max_abs(comm);
      if (c > tol) {
        report.violations.push_back({ViolationKind::grading_not_commuting_with_algebra, c, std::make_pair(k, k),
                                     "[gamma, pi(e" + std::to_string(k) + ")] != 0"});
        break;
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Dirac flux

/// exp(iDt) X exp(-iDt), through the eigen-decomposition of D.
inline Matrix dirac_flux(const FiniteSpectralTriple& t, const Matrix& x, double time) {
  if (x.rows() != t.hilbert_dim || x.cols() != t.hilbert_dim) throw ShapeError("dirac_flux: X must match hilbert_dim");
  const Matrix d = hermitian_part(to_dense(t.dirac));
  Eigen::SelfAdjointEigenSolver<Matrix> es(d);
  const Matrix& v = es.eigenvectors();
  Vector phase(d.rows());
  for (Eigen::Index k = 0; k < d.rows(); ++k) phase(k) = std::polar(1.0, es.eigenvalues()(k) * time);
  const Matrix u = v * phase.asDiagonal() * v.adjoint();
  return u * x * u.adjoint();
}

// ---------------------------------------------------------------------------
// Clifford algebra

struct CliffordAlgebra {
  std::vector<Matrix> basis;  // orthonormal for tr(A* B)
  int dimension() const { return static_cast<int>(basis.size()); }
};

namespace detail {

// Adds `m` to an orthonormal Hilbert–Schmidt basis if it is independent.
inline bool hs_extend(std::vector<Matrix>& basis, Matrix m, double drop) {
  const double n0 = m.norm();
  if (n0 <= drop) return false;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) m -= b * (b.conjugate().cwiseProduct(m).sum());
  }
  const double n1 = m.norm();
  if (n1 <= drop * n0) return false;
  basis.push_back(m / n1);
  return true;
}

}  // namespace detail

/// Span of all products π(x0)[D,π(x1)]⋯[D,π(xn)]: the algebra generated by
/// the images π(e_i) and the commutators [D, π(e_i)], closed by repeated
/// multiplication until one full pass adds nothing.
inline CliffordAlgebra clifford_algebra(const FiniteSpectralTriple& t, double drop = 1e-9) {
  std::vector<Matrix> generators;
  const Matrix d = to_dense(t.dirac);
  for (int k = 0; k < t.rep.size(); ++k) {
    const Matrix p = to_dense(t.rep.image(k));
    generators.push_back(p);
    generators.push_back(commutator(d, p));
  }
  CliffordAlgebra cl;
  for (const auto& g : generators) detail::hs_extend(cl.basis, g, drop);
  bool grew = true;
  while (grew) {
    grew = false;
    const std::size_t current = cl.basis.size();
    for (std::size_t i = 0; i < current; ++i) {
      for (const auto& g : generators) {
        if (detail::hs_extend(cl.basis, Matrix(cl.basis[i] * g), drop)) grew = true;
      }
    }
  }
  return cl;
}

}  // namespace ncg
