#pragma once

// Derivation spaces Der(A), the ideal-preserving part Der_φ(A), the induced
// map φ_*: Der_φ(A) → Der(B), and the submanifold-algebra test.
//
// A derivation is stored as the complex matrix of a linear map A → A in the
// matrix-unit coordinates. Derivations kill central idempotents
// (δ(e) = δ(e²) = 2eδ(e) forces eδ(e) = 0 = δ(e)), so they preserve every
// block and the Leibniz system can be solved block by block.

#include "ncg/homomorphism.hpp"

#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace ncg {

struct DerivationSpace {
  FiniteAlgebra algebra;
  std::vector<Matrix> basis;
  int dimension() const { return static_cast<int>(basis.size()); }
};

struct IdealBasis {
  std::vector<AlgebraElement> basis;
  Matrix coordinates;  // one column per basis element
  int dimension() const { return static_cast<int>(basis.size()); }
};

namespace detail {

/// Columns spanning the numerical nullspace of m; rank cut at 1e-8 σ_max.
inline Matrix nullspace(const Matrix& m) {
  if (m.rows() == 0) return Matrix::Identity(m.cols(), m.cols());
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double top = s.size() ? s(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (top > 0.0 && s(i) > 1e-8 * top) ++rank;
  }
  return svd.matrixV().rightCols(m.cols() - rank);
}

inline int numerical_rank(const Matrix& m) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(0) > 0.0 && s(i) > 1e-8 * s(0)) ++rank;
  }
  return rank;
}

/// Leibniz system for linear maps M_n → M_n; unknown entry (r, c) of the map
/// matrix sits at c·n² + r. Row block (i, j, out) encodes
/// δ(E_i E_j) − δ(E_i) E_j − E_i δ(E_j) = 0 in coordinate `out`.
inline RealMatrix block_leibniz_system(int n) {
  const int d = n * n;
  RealMatrix sys = RealMatrix::Zero(static_cast<Eigen::Index>(d) * d * d, static_cast<Eigen::Index>(d) * d);
  auto var = [d](int r, int c) { return static_cast<Eigen::Index>(c) * d + r; };
  for (int i = 0; i < d; ++i) {
    const int ip = i / n, iq = i % n;
    for (int j = 0; j < d; ++j) {
      const int jp = j / n, jq = j % n;
      for (int out = 0; out < d; ++out) {
        const int op = out / n, oq = out % n;
        const Eigen::Index row = (static_cast<Eigen::Index>(i) * d + j) * d + out;
        if (iq == jp) sys(row, var(out, ip * n + jq)) += 1.0;
        // (δ(E_i) E_j)_{op,oq} = δ(E_i)_{op,jp} δ_{jq,oq}
        if (jq == oq) sys(row, var(op * n + jp, i)) -= 1.0;
        // (E_i δ(E_j))_{op,oq} = δ_{op,ip} δ(E_j)_{iq,oq}
        if (op == ip) sys(row, var(iq * n + oq, j)) -= 1.0;
      }
    }
  }
  return sys;
}

/// Nullspace of the M_n Leibniz system, memoised per n (the SVD is the only
/// expensive step and block sizes repeat).
inline const Matrix& block_derivations(int n) {
  static std::mutex mu;
  static std::map<int, Matrix> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, nullspace(block_leibniz_system(n).cast<Complex>())).first;
  return it->second;
}

}  // namespace detail

/// Max over basis pairs of ‖δ(ab) − δ(a)b − aδ(b)‖ in coordinates.
inline double leibniz_residual(const FiniteAlgebra& a, const Matrix& delta) {
  if (delta.rows() != a.dimension() || delta.cols() != a.dimension()) throw ShapeError("leibniz: map has wrong size");
  double worst = 0.0;
  std::vector<AlgebraElement> images;
  for (int k = 0; k < a.dimension(); ++k) images.push_back(a.from_coordinates(delta.col(k)));
  for (int i = 0; i < a.dimension(); ++i) {
    const AlgebraElement ei = a.basis_element(i);
    for (int j = 0; j < a.dimension(); ++j) {
      AlgebraElement r = a.zero() - images[static_cast<std::size_t>(i)] * a.basis_element(j) -
                         ei * images[static_cast<std::size_t>(j)];
      if (const auto p = a.basis_product(i, j)) r = r + images[static_cast<std::size_t>(*p)];
      worst = std::max(worst, max_abs(Matrix(a.coordinates(r))));
    }
  }
  return worst;
}

inline DerivationSpace derivation_space(const FiniteAlgebra& a) {
  DerivationSpace out{a, {}};
  for (int b = 0; b < a.num_blocks(); ++b) {
    const int n = a.block_dim(b);
    if (n == 1) continue;
    const int d = n * n;
    const Matrix& null = detail::block_derivations(n);
    for (Eigen::Index c = 0; c < null.cols(); ++c) {
      Matrix delta = Matrix::Zero(a.dimension(), a.dimension());
      const int off = a.block_offset(b);
      for (int col = 0; col < d; ++col) {
        for (int row = 0; row < d; ++row) delta(off + row, off + col) = null(static_cast<Eigen::Index>(col) * d + row, c);
      }
      out.basis.push_back(std::move(delta));
    }
  }
  return out;
}

/// Basis of ker φ: the matrix units of the source blocks φ does not route.
inline IdealBasis ideal_kernel(const BlockHomomorphism& phi) {
  if (!phi.is_surjective()) throw HomomorphismError("ideal_kernel: phi is not surjective");
  const auto& a = phi.source();
  IdealBasis out;
  for (int b : phi.unrouted_source_blocks()) {
    const int n = a.block_dim(b);
    for (int p = 0; p < n; ++p) {
      for (int q = 0; q < n; ++q) out.basis.push_back(a.basis_element(a.basis_position(b, p, q)));
    }
  }
  out.coordinates.resize(a.dimension(), out.dimension());
  for (int k = 0; k < out.dimension(); ++k) out.coordinates.col(k) = a.coordinates(out.basis[static_cast<std::size_t>(k)]);
  return out;
}

/// Derivations δ of A with δ(I) ⊆ I.
inline DerivationSpace der_phi(const FiniteAlgebra& a, const IdealBasis& ideal) {
  DerivationSpace full = derivation_space(a);
  if (ideal.dimension() == 0 || full.dimension() == 0) return full;
  Eigen::ColPivHouseholderQR<Matrix> qr(ideal.coordinates);
  const int r = detail::numerical_rank(ideal.coordinates);
  const Matrix q = Matrix(qr.householderQ()).leftCols(r);
  const Matrix qperp = Matrix::Identity(a.dimension(), a.dimension()) - q * q.adjoint();
  // Column m of the constraint matrix stacks Q⊥ δ_m z over the ideal basis z.
  Matrix cons(static_cast<Eigen::Index>(a.dimension()) * ideal.dimension(), full.dimension());
  for (int m = 0; m < full.dimension(); ++m) {
    const Matrix img = qperp * full.basis[static_cast<std::size_t>(m)] * ideal.coordinates;
    cons.col(m) = Eigen::Map<const Vector>(img.data(), img.size());
  }
  const Matrix null = detail::nullspace(cons);
  DerivationSpace out{a, {}};
  for (Eigen::Index c = 0; c < null.cols(); ++c) {
    Matrix delta = Matrix::Zero(a.dimension(), a.dimension());
    for (int m = 0; m < full.dimension(); ++m) delta += null(m, c) * full.basis[static_cast<std::size_t>(m)];
    out.basis.push_back(std::move(delta));
  }
  return out;
}

/// Right inverse of a surjective routing: b ↦ the element with U* b_t U in
/// the routed source block and zero elsewhere.
inline Matrix section_map(const BlockHomomorphism& phi) {
  if (!phi.is_surjective()) throw HomomorphismError("section: phi is not surjective");
  const auto& a = phi.source();
  const auto& b = phi.target();
  Matrix s = Matrix::Zero(a.dimension(), b.dimension());
  for (int k = 0; k < b.dimension(); ++k) {
    const AlgebraElement e = b.basis_element(k);
    AlgebraElement lift = a.zero();
    for (int t = 0; t < b.num_blocks(); ++t) {
      const Route& r = phi.route(t);
      const Matrix& blk = e.blocks[static_cast<std::size_t>(t)];
      lift.blocks[static_cast<std::size_t>(r.source_block)] =
          r.conjugation ? Matrix(r.conjugation->adjoint() * blk * *r.conjugation) : blk;
    }
    s.col(k) = a.coordinates(lift);
  }
  return s;
}

/// Quotient derivation δ̂(a + I) = δa + I, transported to B through φ.
inline Matrix phi_star(const Matrix& delta, const BlockHomomorphism& phi, double tol = 1e-9) {
  const Matrix lin = phi.linear_map();
  const IdealBasis ideal = ideal_kernel(phi);
  if (ideal.dimension() > 0) {
    const double leak = max_abs(Matrix(lin * delta * ideal.coordinates));
    if (leak > tol) throw PreconditionError("phi_star: derivation does not preserve ker phi (leak " + std::to_string(leak) + ")");
  }
  return lin * delta * section_map(phi);
}

struct SubmanifoldReport {
  bool is_submanifold = false;
  int rank_phi_star = 0;
  int dim_der_target = 0;
  int dim_der_phi = 0;
};

/// B = φ(A) is a submanifold algebra iff φ_*: Der_φ(A) → Der(B) is onto.
inline SubmanifoldReport is_submanifold_algebra(const BlockHomomorphism& phi) {
  const IdealBasis ideal = ideal_kernel(phi);
  const DerivationSpace dphi = der_phi(phi.source(), ideal);
  const DerivationSpace dtarget = derivation_space(phi.target());
  SubmanifoldReport rep;
  rep.dim_der_phi = dphi.dimension();
  rep.dim_der_target = dtarget.dimension();
  const int bd = phi.target().dimension();
  Matrix images(static_cast<Eigen::Index>(bd) * bd, dphi.dimension());
  for (int m = 0; m < dphi.dimension(); ++m) {
    const Matrix img = phi_star(dphi.basis[static_cast<std::size_t>(m)], phi);
    images.col(m) = Eigen::Map<const Vector>(img.data(), img.size());
  }
  rep.rank_phi_star = detail::numerical_rank(images);
  rep.is_submanifold = rep.rank_phi_star == rep.dim_der_target;
  return rep;
}

}  // namespace ncg
