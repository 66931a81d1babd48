#include <gtest/gtest.h>

#include "ncg/ncg.hpp"
#include "oracles.hpp"

using namespace ncg;

TEST(Triples, AlgebraBasisTable) {
  const FiniteAlgebra a({2, 1, 3});
  EXPECT_EQ(a.dimension(), 4 + 1 + 9);
  for (int i = 0; i < a.dimension(); ++i) {
    const auto idx = a.basis_index(i);
    EXPECT_EQ(a.basis_position(idx.block, idx.row, idx.col), i);
    EXPECT_EQ(a.basis_adjoint(a.basis_adjoint(i)), i);
    for (int j = 0; j < a.dimension(); ++j) {
      // E_i E_j against the explicit block product
      const AlgebraElement prod = a.basis_element(i) * a.basis_element(j);
      const auto k = a.basis_product(i, j);
      const AlgebraElement expect = k ? a.basis_element(*k) : a.zero();
      EXPECT_EQ(max_abs(a.coordinates(prod - expect)), 0.0);
    }
  }
  EXPECT_EQ(a.self_adjoint_basis().size(), static_cast<std::size_t>(a.dimension()));
  EXPECT_THROW(FiniteAlgebra(std::vector<int>{}), ShapeError);
  EXPECT_THROW(FiniteAlgebra({2, 0}), ShapeError);
}

TEST(Triples, NPointShapesAndValidity) {
  for (int n = 2; n <= 6; ++n) {
    const auto t = build_npoint(n, Complex(0.7, -0.2));
    EXPECT_EQ(t.hilbert_dim, n * (n - 1));
    EXPECT_TRUE(t.algebra.is_commutative());
    EXPECT_TRUE(validate_triple(t).ok()) << validate_triple(t).summary();
  }
  EXPECT_THROW(build_npoint(3, std::vector<Complex>{1.0}), ShapeError);
}

TEST(Triples, FedAndProducts) {
  const auto fed = build_f_ed(Complex(0.3, 1.1));
  ASSERT_TRUE(fed.grading.has_value());
  EXPECT_TRUE(validate_triple(fed).ok()) << validate_triple(fed).summary();

  const auto circle = build_circle(CircleGrid::flat(8));
  EXPECT_TRUE(validate_triple(circle.triple).ok());
  const auto prod = product_triple(circle.triple, fed);
  EXPECT_EQ(prod.hilbert_dim, circle.triple.hilbert_dim * fed.hilbert_dim);
  EXPECT_EQ(prod.algebra.dimension(), circle.triple.algebra.dimension() * fed.algebra.dimension());
  EXPECT_TRUE(validate_triple(prod).ok()) << validate_triple(prod).summary();

  const auto sum = direct_sum_triple(build_npoint(2, Complex(1.0)), build_trivial(2));
  EXPECT_TRUE(validate_triple(sum).ok()) << validate_triple(sum).summary();
}

TEST(Triples, ConjugationPreservesValidity) {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const auto t = random_block_triple(rng);
    ASSERT_TRUE(validate_triple(t).ok()) << validate_triple(t).summary();
    const Matrix w = random_unitary(t.hilbert_dim, rng);
    const auto c = conjugate_triple(t, w);
    EXPECT_TRUE(validate_triple(c).ok()) << validate_triple(c).summary();
    // the spectrum of D survives conjugation
    Eigen::SelfAdjointEigenSolver<Matrix> e1(to_dense(t.dirac)), e2(to_dense(c.dirac));
    EXPECT_LT((e1.eigenvalues() - e2.eigenvalues()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Triples, ValidationFlagsEachAxiom) {
  const auto t = build_npoint(3, Complex(1.0));

  auto bad_d = t;
  Matrix d = to_dense(t.dirac);
  d(0, 1) += 0.5;
  bad_d.dirac = to_sparse(d);
  EXPECT_TRUE(validate_triple(bad_d).has(ViolationKind::dirac_not_self_adjoint));

  // Swap the roles of two projections only on part of the space: breaks
  // multiplicativity of the basis images.
  Matrix img = to_dense(t.rep.image(0));
  img(0, 1) = 1.0;
  auto bad_rep = t;
  bad_rep.rep = t.rep.with_image(0, to_sparse(img));
  const auto rep = validate_triple(bad_rep);
  EXPECT_FALSE(rep.ok());

  // A zero image cannot be faithful or unital.
  auto zero_rep = t;
  zero_rep.rep = t.rep.with_image(1, SparseMatrix(t.hilbert_dim, t.hilbert_dim));
  const auto zr = validate_triple(zero_rep);
  EXPECT_TRUE(zr.has(ViolationKind::not_faithful) || zr.has(ViolationKind::not_unital));

  auto fed = build_f_ed(Complex(1.0));
  fed.grading = to_sparse(Matrix(Matrix::Identity(fed.hilbert_dim, fed.hilbert_dim)));
  EXPECT_TRUE(validate_triple(fed).has(ViolationKind::grading_not_anticommuting));
  fed.grading = to_sparse(Matrix(2.0 * Matrix::Identity(fed.hilbert_dim, fed.hilbert_dim)));
  EXPECT_TRUE(validate_triple(fed).has(ViolationKind::grading_not_involution));
}

TEST(Triples, ShapeErrors) {
  EXPECT_THROW(FiniteSpectralTriple(FiniteAlgebra::commutative(2), 2, std::vector<SparseMatrix>{sparse_identity(2)},
                                    sparse_identity(2)),
               ShapeError);
  EXPECT_THROW(FiniteSpectralTriple(FiniteAlgebra::commutative(1), 2, std::vector<SparseMatrix>{sparse_identity(2)},
                                    sparse_identity(3)),
               ShapeError);
}

TEST(Triples, DiracFlux) {
  const auto t = build_npoint(3, Complex(0.8, 0.4));
  const Matrix d = to_dense(t.dirac);
  // D commutes with itself, so the flux fixes it.
  EXPECT_LT(max_abs(Matrix(dirac_flux(t, d, 1.3) - d)), 1e-12);
  // Unitary conjugation keeps the norm and is a one-parameter group.
  const Matrix x = to_dense(t.rep.image(0));
  const Matrix y = dirac_flux(t, x, 0.4);
  EXPECT_NEAR(operator_norm(y), operator_norm(x), 1e-12);
  EXPECT_LT(max_abs(Matrix(dirac_flux(t, y, 0.6) - dirac_flux(t, x, 1.0))), 1e-12);
  // d/dt at 0 is i[D, X]
  const double h = 1e-6;
  const Matrix deriv = (dirac_flux(t, x, h) - dirac_flux(t, x, -h)) / (2 * h);
  EXPECT_LT(max_abs(Matrix(deriv - Complex(0, 1) * commutator(d, x))), 1e-6);
}

TEST(Triples, CliffordAlgebraDimensions) {
  // F2: projections and one commutator generate all of M2.
  EXPECT_EQ(clifford_algebra(build_npoint(2, Complex(1.0))).dimension(), 4);
  // Trivial triple with D = 0: only the scalars.
  EXPECT_EQ(clifford_algebra(build_trivial(1)).dimension(), 1);
  const auto cl = clifford_algebra(build_npoint(3, Complex(1.0)));
  for (std::size_t i = 0; i < cl.basis.size(); ++i) {
    for (std::size_t j = 0; j < cl.basis.size(); ++j) {
      const Complex ip = cl.basis[i].conjugate().cwiseProduct(cl.basis[j]).sum();
      EXPECT_NEAR(std::abs(ip - Complex(i == j ? 1.0 : 0.0)), 0.0, 1e-10);
    }
  }
}
