#pragma once

// Dense and sparse complex operator calculus shared by every other header:
// commutators, operator norms, direct sums, Kronecker products and
// partial-isometry tests.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

/// Accuracy we expect from the symmetric eigen-solver behind every norm.
inline constexpr double kEigenTolerance = 1e-10;

/// Largest tolerated distance between an operator asserted Hermitian and its
/// symmetrization.
inline constexpr double kHermitianDrift = 1e-8;

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

inline std::string shape_string(Eigen::Index r, Eigen::Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

template <typename A, typename B>
void require_same_square(const A& a, const B& b, const char* what) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw ShapeError(std::string(what) + ": expected square operators of equal size, got " +
                     shape_string(a.rows(), a.cols()) + " and " + shape_string(b.rows(), b.cols()));
  }
}

// Union-find over row and column nodes of a sparse matrix.
class DisjointSets {
 public:
  explicit DisjointSets(Eigen::Index n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), Eigen::Index{0});
  }
  Eigen::Index find(Eigen::Index x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(Eigen::Index a, Eigen::Index b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<Eigen::Index> parent_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Conversions

inline SparseMatrix to_sparse(const Matrix& a, double drop = 0.0) {
  std::vector<Triplet> entries;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (std::abs(a(i, j)) > drop) entries.emplace_back(i, j, a(i, j));
    }
  }
  SparseMatrix s(a.rows(), a.cols());
  s.setFromTriplets(entries.begin(), entries.end());
  return s;
}

inline Matrix to_dense(const SparseMatrix& a) { return Matrix(a); }

inline SparseMatrix sparse_identity(Eigen::Index n) {
  SparseMatrix id(n, n);
  id.setIdentity();
  return id;
}

inline SparseMatrix sparse_diagonal(const Vector& diag) {
  std::vector<Triplet> entries;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (diag(i) != Complex(0.0)) entries.emplace_back(i, i, diag(i));
  }
  SparseMatrix s(diag.size(), diag.size());
  s.setFromTriplets(entries.begin(), entries.end());
  return s;
}

/// Largest absolute entry; zero for empty matrices.
inline double max_abs(const SparseMatrix& a) {
  double m = 0.0;
  for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

inline double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------------------
// Algebraic operations

inline Matrix commutator(const Matrix& a, const Matrix& b) {
  detail::require_same_square(a, b, "commutator");
  return a * b - b * a;
}

inline SparseMatrix commutator(const SparseMatrix& a, const SparseMatrix& b) {
  detail::require_same_square(a, b, "commutator");
  SparseMatrix ab = a * b;
  SparseMatrix ba = b * a;
  SparseMatrix c = ab - ba;
  c.prune(Complex(0.0), 0.0);
  return c;
}

inline Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix s = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  s.topLeftCorner(a.rows(), a.cols()) = a;
  s.bottomRightCorner(b.rows(), b.cols()) = b;
  return s;
}

inline SparseMatrix direct_sum(const SparseMatrix& a, const SparseMatrix& b) {
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(a.nonZeros() + b.nonZeros()));
  for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) entries.emplace_back(it.row(), it.col(), it.value());
  }
  for (Eigen::Index k = 0; k < b.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(b, k); it; ++it) {
      entries.emplace_back(a.rows() + it.row(), a.cols() + it.col(), it.value());
    }
  }
  SparseMatrix s(a.rows() + b.rows(), a.cols() + b.cols());
  s.setFromTriplets(entries.begin(), entries.end());
  return s;
}

/// Kronecker product: (A ⊗ B)_{(i,k),(j,l)} = A_ij B_kl with row index i*rows(B)+k.
inline Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix t(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      t.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return t;
}

inline SparseMatrix tensor(const SparseMatrix& a, const SparseMatrix& b) {
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
  for (Eigen::Index ka = 0; ka < a.outerSize(); ++ka) {
    for (SparseMatrix::InnerIterator ia(a, ka); ia; ++ia) {
      for (Eigen::Index kb = 0; kb < b.outerSize(); ++kb) {
        for (SparseMatrix::InnerIterator ib(b, kb); ib; ++ib) {
          entries.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                               ia.value() * ib.value());
        }
      }
    }
  }
  SparseMatrix t(a.rows() * b.rows(), a.cols() * b.cols());
  t.setFromTriplets(entries.begin(), entries.end());
  return t;
}

/// Returns (A + A*)/2, throwing when A was further than kHermitianDrift from Hermitian.
inline Matrix hermitian_part(const Matrix& a, double drift = kHermitianDrift) {
  if (a.rows() != a.cols()) throw ShapeError("hermitian_part: operator is not square");
  const double d = max_abs(Matrix(a - a.adjoint()));
  if (d > drift) {
    throw PreconditionError("hermitian_part: operator deviates from Hermitian by " + std::to_string(d));
  }
  return (a + a.adjoint()) / 2.0;
}

// ---------------------------------------------------------------------------
// Norms and singular pairs

struct SingularPair {
  double value = 0.0;
  Vector left;   // unit u with A w = value * u
  Vector right;  // unit w
};

/// All singular pairs of `a` with singular value above `threshold`, largest
/// first, obtained from the Hermitian dilation [[0, A], [A*, 0]].
inline std::vector<SingularPair> singular_pairs_above(const Matrix& a, double threshold,
                                                      std::size_t max_pairs = SIZE_MAX) {
  std::vector<SingularPair> pairs;
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (m == 0 || n == 0 || max_pairs == 0) return pairs;
  if (m == 1 && n == 1) {
    const double s = std::abs(a(0, 0));
    if (s > threshold) {
      SingularPair p;
      p.value = s;
      p.left = Vector::Constant(1, a(0, 0) / s);
      p.right = Vector::Ones(1);
      pairs.push_back(std::move(p));
    }
    return pairs;
  }
  Matrix dilation = Matrix::Zero(m + n, m + n);
  dilation.topRightCorner(m, n) = a;
  dilation.bottomLeftCorner(n, m) = a.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(dilation);
  const auto& values = solver.eigenvalues();
  for (Eigen::Index k = m + n - 1; k >= 0 && pairs.size() < max_pairs; --k) {
    if (values(k) <= threshold) break;
    const Vector v = solver.eigenvectors().col(k);
    SingularPair p;
    p.value = values(k);
    p.left = v.head(m);
    p.right = v.tail(n);
    const double ln = p.left.norm();
    const double rn = p.right.norm();
    if (ln == 0.0 || rn == 0.0) continue;
    p.left /= ln;
    p.right /= rn;
    pairs.push_back(std::move(p));
  }
  return pairs;
}

/// Largest singular value, computed from the Hermitian dilation eigen-solve.
inline double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  if (max_abs(a) == 0.0) return 0.0;
  Matrix dilation = Matrix::Zero(a.rows() + a.cols(), a.rows() + a.cols());
  dilation.topRightCorner(a.rows(), a.cols()) = a;
  dilation.bottomLeftCorner(a.cols(), a.rows()) = a.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(dilation, Eigen::EigenvaluesOnly);
  return std::max(0.0, solver.eigenvalues().maxCoeff());
}

/// A sparse operator split into independent dense blocks: rows and columns are
/// grouped by connected components of the nonzero pattern, so the operator is
/// a direct sum of the blocks up to permutation.
struct BlockDecomposition {
  struct Block {
    std::vector<Eigen::Index> rows;
    std::vector<Eigen::Index> cols;
    Matrix entries;
  };
  std::vector<Block> blocks;
};

inline BlockDecomposition decompose_blocks(const SparseMatrix& a) {
  const Eigen::Index m = a.rows();
  detail::DisjointSets sets(m + a.cols());
  for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      if (it.value() != Complex(0.0)) sets.unite(it.row(), m + it.col());
    }
  }
  BlockDecomposition out;
  std::vector<Eigen::Index> block_of(static_cast<std::size_t>(m + a.cols()), -1);
  std::vector<Eigen::Index> local(static_cast<std::size_t>(m + a.cols()), -1);
  auto block_index = [&](Eigen::Index node) {
    const Eigen::Index root = sets.find(node);
    if (block_of[root] < 0) {
      block_of[root] = static_cast<Eigen::Index>(out.blocks.size());
      out.blocks.emplace_back();
    }
    return block_of[root];
  };
  for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      if (it.value() == Complex(0.0)) continue;
      const Eigen::Index b = block_index(it.row());
      auto& blk = out.blocks[static_cast<std::size_t>(b)];
      if (local[it.row()] < 0) {
        local[it.row()] = static_cast<Eigen::Index>(blk.rows.size());
        blk.rows.push_back(it.row());
      }
      if (local[m + it.col()] < 0) {
        local[m + it.col()] = static_cast<Eigen::Index>(blk.cols.size());
        blk.cols.push_back(it.col());
      }
    }
  }
  for (auto& blk : out.blocks) blk.entries = Matrix::Zero(static_cast<Eigen::Index>(blk.rows.size()),
                                                          static_cast<Eigen::Index>(blk.cols.size()));
  for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      if (it.value() == Complex(0.0)) continue;
      auto& blk = out.blocks[static_cast<std::size_t>(block_of[sets.find(it.row())])];
      blk.entries(local[it.row()], local[m + it.col()]) += it.value();
    }
  }
  return out;
}

inline double operator_norm(const SparseMatrix& a) {
  double best = 0.0;
  for (const auto& blk : decompose_blocks(a).blocks) best = std::max(best, operator_norm(blk.entries));
  return best;
}

/// Singular pairs of a sparse operator whose values exceed `threshold`,
/// lifted back to full-length vectors. At most `per_block` pairs are taken
/// from each independent block.
inline std::vector<SingularPair> sparse_singular_pairs_above(const SparseMatrix& a, double threshold,
                                                             std::size_t per_block) {
  std::vector<SingularPair> out;
  for (const auto& blk : decompose_blocks(a).blocks) {
    for (auto& p : singular_pairs_above(blk.entries, threshold, per_block)) {
      SingularPair lifted;
      lifted.value = p.value;
      lifted.left = Vector::Zero(a.rows());
      lifted.right = Vector::Zero(a.cols());
      for (std::size_t i = 0; i < blk.rows.size(); ++i) lifted.left(blk.rows[i]) = p.left(static_cast<Eigen::Index>(i));
      for (std::size_t j = 0; j < blk.cols.size(); ++j) lifted.right(blk.cols[j]) = p.right(static_cast<Eigen::Index>(j));
      out.push_back(std::move(lifted));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const SingularPair& x, const SingularPair& y) { return x.value > y.value; });
  return out;
}

// ---------------------------------------------------------------------------
// Partial isometries

struct PartialIsometryReport {
  bool is_partial_isometry = false;
  bool is_coisometry = false;  // u u* = Id on the target
  double residual = 0.0;       // ‖u u* u − u‖
  double coisometry_residual = 0.0;
};

inline PartialIsometryReport is_partial_isometry(const Matrix& u, double tol = 1e-9) {
  PartialIsometryReport r;
  const Matrix uu = u * u.adjoint();
  r.residual = operator_norm(Matrix(uu * u - u));
  r.coisometry_residual = operator_norm(Matrix(uu - Matrix::Identity(u.rows(), u.rows())));
  r.is_partial_isometry = r.residual <= tol;
  r.is_coisometry = r.is_partial_isometry && r.coisometry_residual <= tol;
  return r;
}

inline PartialIsometryReport is_partial_isometry(const SparseMatrix& u, double tol = 1e-9) {
  PartialIsometryReport r;
  const SparseMatrix ustar = u.adjoint();
  const SparseMatrix uu = u * ustar;
  const SparseMatrix cubic = uu * u;
  r.residual = operator_norm(SparseMatrix(cubic - u));
  r.coisometry_residual = operator_norm(SparseMatrix(uu - sparse_identity(u.rows())));
  r.is_partial_isometry = r.residual <= tol;
  r.is_coisometry = r.is_partial_isometry && r.coisometry_residual <= tol;
  return r;
}

/// True when P is an orthogonal projection within `tol`.
inline bool is_projection(const SparseMatrix& p, double tol = 1e-9) {
  if (p.rows() != p.cols()) return false;
  const SparseMatrix p2 = p * p;
  const SparseMatrix padj = p.adjoint();
  return max_abs(SparseMatrix(p2 - p)) <= tol && max_abs(SparseMatrix(padj - p)) <= tol;
}

/// Orthonormal basis (columns) of the range of a projection, built by
/// Gram-Schmidt over its columns so coordinate projections keep sparse bases.
inline Matrix projection_range_basis(const SparseMatrix& p, double drop = 1e-9) {
  const Matrix dense = to_dense(p);
  std::vector<Vector> basis;
  for (Eigen::Index j = 0; j < dense.cols(); ++j) {
    Vector v = dense.col(j);
    const double n0 = v.norm();
    if (n0 <= drop) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) v -= b * b.dot(v);
    }
    const double n1 = v.norm();
    if (n1 <= drop * std::max(1.0, n0)) continue;
    basis.push_back(v / n1);
  }
  Matrix out(p.rows(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = basis[k];
  return out;
}

}  // namespace ncg
