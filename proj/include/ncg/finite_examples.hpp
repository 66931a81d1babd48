#pragma once

// Constructors for the finite triples: N-point spaces, the two-point
// electrodynamics triple F_ED, trivial triples, and products D⊗1 + γ⊗D_F.

#include "ncg/triple.hpp"

#include <utility>
#include <vector>

namespace ncg {

/// Index of the pair (j, k), 0-based with j < k, in the order
/// (0,1), (0,2), (1,2), (0,3), ... used for the off-diagonal values.
inline int npoint_pair_index(int j, int k) { return k * (k - 1) / 2 + j; }

/// N-point space: A = ℂ^N on ℂ^{N(N-1)}. Every pair (j, k) owns a 2-dim
/// summand carrying diag(a_j, a_k) and D_{j,k} = [[0, x_jk], [conj x_jk, 0]];
/// the summands are stacked in pair order, which is exactly the recursion
/// π_N = π_{N-1} ⊕ diag pairs, D_N = D_{N-1} ⊕ D_{j,N}.
inline FiniteSpectralTriple build_npoint(int n, const std::vector<Complex>& offdiag) {
  if (n < 2) throw ShapeError("build_npoint: N must be >= 2");
  const int pairs = n * (n - 1) / 2;
  if (static_cast<int>(offdiag.size()) != pairs) {
    throw ShapeError("build_npoint: expected " + std::to_string(pairs) + " off-diagonal values");
  }
  const int h = n * (n - 1);
  std::vector<std::vector<Triplet>> rep_entries(static_cast<std::size_t>(n));
  std::vector<Triplet> dirac_entries;
  for (int k = 1; k < n; ++k) {
    for (int j = 0; j < k; ++j) {
      const int m = npoint_pair_index(j, k);
      const Complex x = offdiag[static_cast<std::size_t>(m)];
      rep_entries[static_cast<std::size_t>(j)].emplace_back(2 * m, 2 * m, 1.0);
      rep_entries[static_cast<std::size_t>(k)].emplace_back(2 * m + 1, 2 * m + 1, 1.0);
      if (x != Complex(0.0)) {
        dirac_entries.emplace_back(2 * m, 2 * m + 1, x);
        dirac_entries.emplace_back(2 * m + 1, 2 * m, std::conj(x));
      }
    }
  }
  std::vector<SparseMatrix> rep;
  for (auto& e : rep_entries) {
    SparseMatrix m(h, h);
    m.setFromTriplets(e.begin(), e.end());
    rep.push_back(std::move(m));
  }
  SparseMatrix d(h, h);
  d.setFromTriplets(dirac_entries.begin(), dirac_entries.end());
  return FiniteSpectralTriple(FiniteAlgebra::commutative(n), h, std::move(rep), std::move(d));
}

inline FiniteSpectralTriple build_npoint(int n, Complex x) {
  return build_npoint(n, std::vector<Complex>(static_cast<std::size_t>(n * (n - 1) / 2), x));
}

inline Matrix f_ed_dirac(Complex d) {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 1) = d;
  m(1, 0) = std::conj(d);
  m(2, 3) = std::conj(d);
  m(3, 2) = d;
  return m;
}

inline Matrix f_ed_grading() {
  Matrix g = Matrix::Zero(4, 4);
  g.diagonal() << -1.0, 1.0, 1.0, -1.0;
  return g;
}

/// Finite part of electrodynamics: ℂ² on ℂ⁴ with π(f1, f2) = diag(f1, f1, f2, f2).
inline FiniteSpectralTriple build_f_ed(Complex d) {
  std::vector<SparseMatrix> rep;
  Vector first(4), second(4);
  first << 1.0, 1.0, 0.0, 0.0;
  second << 0.0, 0.0, 1.0, 1.0;
  rep.push_back(sparse_diagonal(first));
  rep.push_back(sparse_diagonal(second));
  return FiniteSpectralTriple(FiniteAlgebra::commutative(2), 4, std::move(rep), to_sparse(f_ed_dirac(d)),
                              to_sparse(f_ed_grading()));
}

/// (ℂ, ℂ^m, 0).
inline FiniteSpectralTriple build_trivial(int m = 1) {
  std::vector<SparseMatrix> rep{sparse_identity(m)};
  return FiniteSpectralTriple(FiniteAlgebra::commutative(1), m, std::move(rep), SparseMatrix(m, m), sparse_identity(m));
}

/// Block structure of A_even ⊗ A_F: block (i, j) has size n_i m_j, ordered
/// with the even block index outermost.
inline FiniteAlgebra product_algebra(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  std::vector<int> dims;
  for (int ni : a.block_dims()) {
    for (int mj : b.block_dims()) dims.push_back(ni * mj);
  }
  return FiniteAlgebra(std::move(dims));
}

/// Position in the product algebra basis of E^i_pq ⊗ E^j_rs.
inline int product_basis_position(const FiniteAlgebra& a, const FiniteAlgebra& b, const FiniteAlgebra& prod, int ka,
                                  int kb) {
  const auto ia = a.basis_index(ka);
  const auto ib = b.basis_index(kb);
  const int m = b.block_dim(ib.block);
  const int block = ia.block * b.num_blocks() + ib.block;
  return prod.basis_position(block, ia.row * m + ib.row, ia.col * m + ib.col);
}

/// Almost-commutative product: rep = rep_even ⊗ rep_F, D = D ⊗ 1 + γ ⊗ D_F,
/// grading γ ⊗ γ_F when the finite triple is graded.
inline FiniteSpectralTriple product_triple(const FiniteSpectralTriple& even, const FiniteSpectralTriple& fin) {
  if (!even.grading) throw PreconditionError("product_triple: the first factor must carry a grading");
  FiniteAlgebra prod = product_algebra(even.algebra, fin.algebra);
  std::vector<std::vector<RepEntry>> images(static_cast<std::size_t>(prod.dimension()));
  const int mf = fin.hilbert_dim;
  for (int ka = 0; ka < even.algebra.dimension(); ++ka) {
    for (int kb = 0; kb < fin.algebra.dimension(); ++kb) {
      auto& img = images[static_cast<std::size_t>(product_basis_position(even.algebra, fin.algebra, prod, ka, kb))];
      for (const auto& ea : even.rep[ka]) {
        for (const auto& eb : fin.rep[kb]) img.push_back({ea.row * mf + eb.row, ea.col * mf + eb.col, ea.value * eb.value});
      }
    }
  }
  Representation rep(even.hilbert_dim * mf);
  for (auto& img : images) rep.push_back(std::move(img));
  const SparseMatrix one_f = sparse_identity(fin.hilbert_dim);
  SparseMatrix d = tensor(even.dirac, one_f);
  d += tensor(*even.grading, fin.dirac);
  std::optional<SparseMatrix> gamma;
  if (fin.grading) gamma = tensor(*even.grading, *fin.grading);
  return FiniteSpectralTriple(std::move(prod), even.hilbert_dim * fin.hilbert_dim, std::move(rep), std::move(d),
                              std::move(gamma));
}

/// T_a ⊕ T_b: algebras, Hilbert spaces, Diracs and (when both exist) gradings.
inline FiniteSpectralTriple direct_sum_triple(const FiniteSpectralTriple& a, const FiniteSpectralTriple& b) {
  std::vector<int> blocks = a.algebra.block_dims();
  blocks.insert(blocks.end(), b.algebra.block_dims().begin(), b.algebra.block_dims().end());
  Representation rep(a.hilbert_dim + b.hilbert_dim);
  for (int k = 0; k < a.rep.size(); ++k) rep.push_back(std::vector<RepEntry>(a.rep[k].begin(), a.rep[k].end()));
  for (int k = 0; k < b.rep.size(); ++k) {
    std::vector<RepEntry> e;
    for (const auto& x : b.rep[k]) e.push_back({x.row + a.hilbert_dim, x.col + a.hilbert_dim, x.value});
    rep.push_back(std::move(e));
  }
  std::optional<SparseMatrix> gamma;
  if (a.grading && b.grading) gamma = direct_sum(*a.grading, *b.grading);
  return FiniteSpectralTriple(FiniteAlgebra(blocks), a.hilbert_dim + b.hilbert_dim, std::move(rep),
                              direct_sum(a.dirac, b.dirac), std::move(gamma));
}

/// (W π W*, W D W*, W γ W*) for a unitary W.
inline FiniteSpectralTriple conjugate_triple(const FiniteSpectralTriple& t, const Matrix& w, double drop = 1e-14) {
  if (w.rows() != t.hilbert_dim || w.cols() != t.hilbert_dim) throw ShapeError("conjugate_triple: W has wrong size");
  const Matrix wa = w.adjoint();
  std::vector<SparseMatrix> images;
  for (int k = 0; k < t.rep.size(); ++k) images.push_back(to_sparse(Matrix(w * to_dense(t.rep.image(k)) * wa), drop));
  std::optional<SparseMatrix> gamma;
  if (t.grading) gamma = to_sparse(Matrix(w * to_dense(*t.grading) * wa), drop);
  return FiniteSpectralTriple(t.algebra, t.hilbert_dim, images, to_sparse(Matrix(w * to_dense(t.dirac) * wa), drop),
                              std::move(gamma));
}

/// ⊕_i M_{n_i} acting as a_i ⊗ 1_{m_i} on ⊕_i ℂ^{n_i m_i}.
inline FiniteSpectralTriple block_triple(const std::vector<int>& dims, const std::vector<int>& mult, const Matrix& dirac) {
  if (dims.size() != mult.size()) throw ShapeError("block_triple: one multiplicity per block");
  FiniteAlgebra alg(dims);
  int h = 0;
  std::vector<int> offset;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (mult[i] < 1) throw ShapeError("block_triple: multiplicities must be positive");
    offset.push_back(h);
    h += dims[i] * mult[i];
  }
  if (dirac.rows() != h || dirac.cols() != h) throw ShapeError("block_triple: Dirac must be " + detail::shape_string(h, h));
  Representation rep(h);
  for (int k = 0; k < alg.dimension(); ++k) {
    const auto idx = alg.basis_index(k);
    const int m = mult[static_cast<std::size_t>(idx.block)];
    std::vector<RepEntry> e;
    for (int c = 0; c < m; ++c) {
      const int base = offset[static_cast<std::size_t>(idx.block)];
      e.push_back({base + idx.row * m + c, base + idx.col * m + c, 1.0});
    }
    rep.push_back(std::move(e));
  }
  return FiniteSpectralTriple(std::move(alg), h, std::move(rep), to_sparse(dirac));
}

}  // namespace ncg
