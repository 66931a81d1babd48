#include <gtest/gtest.h>

#include "ncg/ncg.hpp"
#include "oracles.hpp"

using namespace ncg;

namespace {

Matrix rand_mat(int r, int c, std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = Complex(nd(g), nd(g));
  return m;
}

}  // namespace

TEST(OperatorCore, SparseDenseRoundTrip) {
  std::mt19937_64 g(3);
  const Matrix a = rand_mat(5, 4, g);
  EXPECT_EQ(max_abs(Matrix(to_dense(to_sparse(a)) - a)), 0.0);
  const SparseMatrix id = sparse_identity(4);
  EXPECT_EQ(max_abs(Matrix(to_dense(id) - Matrix::Identity(4, 4))), 0.0);
}

TEST(OperatorCore, KroneckerMatchesLoopOracle) {
  std::mt19937_64 g(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = rand_mat(1 + trial % 3, 2 + trial % 2, g);
    const Matrix b = rand_mat(2, 1 + trial % 4, g);
    EXPECT_LT(max_abs(Matrix(tensor(a, b) - oracle::kron(a, b))), 1e-14);
    const SparseMatrix s = tensor(to_sparse(a), to_sparse(b));
    EXPECT_LT(max_abs(Matrix(to_dense(s) - oracle::kron(a, b))), 1e-14);
  }
}

TEST(OperatorCore, DirectSumIsBlockDiagonal) {
  std::mt19937_64 g(11);
  const Matrix a = rand_mat(2, 2, g), b = rand_mat(3, 3, g);
  const Matrix s = direct_sum(a, b);
  ASSERT_EQ(s.rows(), 5);
  EXPECT_EQ(max_abs(Matrix(s.topLeftCorner(2, 2) - a)), 0.0);
  EXPECT_EQ(max_abs(Matrix(s.bottomRightCorner(3, 3) - b)), 0.0);
  EXPECT_EQ(max_abs(Matrix(s.topRightCorner(2, 3))), 0.0);
  EXPECT_EQ(max_abs(Matrix(to_dense(direct_sum(to_sparse(a), to_sparse(b))) - s)), 0.0);
}

TEST(OperatorCore, ShapeMismatchThrows) {
  EXPECT_THROW(commutator(Matrix::Identity(2, 2), Matrix::Identity(3, 3)), ShapeError);
}

TEST(OperatorCore, CommutatorProperties) {
  std::mt19937_64 g(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = rand_mat(4, 4, g), b = rand_mat(4, 4, g);
    // [A,B] = −[B,A], and [A,A] = 0
    EXPECT_LT(max_abs(Matrix(commutator(a, b) + commutator(b, a))), 1e-12);
    EXPECT_LT(max_abs(commutator(a, a)), 1e-12);
    EXPECT_LT(max_abs(Matrix(to_dense(commutator(to_sparse(a), to_sparse(b))) - commutator(a, b))), 1e-12);
  }
}

TEST(OperatorCore, OperatorNormAgreesWithPowerIteration) {
  std::mt19937_64 g(23);
  for (int trial = 0; trial < 15; ++trial) {
    const Matrix a = rand_mat(3 + trial % 5, 2 + trial % 4, g);
    const double ref = oracle::power_norm(a);
    EXPECT_NEAR(operator_norm(a), ref, 1e-8 * ref);
    EXPECT_NEAR(operator_norm(to_sparse(a)), ref, 1e-8 * ref);
  }
}

TEST(OperatorCore, SparseNormUsesBlocks) {
  // Two decoupled blocks: the norm is the larger block norm.
  Matrix a = Matrix::Zero(5, 5);
  a(0, 1) = 3.0;
  a(2, 3) = Complex(0.0, 4.0);
  a(4, 4) = 1.0;
  EXPECT_NEAR(operator_norm(to_sparse(a)), 4.0, 1e-12);
  const auto blocks = decompose_blocks(to_sparse(a));
  EXPECT_EQ(blocks.blocks.size(), 3u);
}

TEST(OperatorCore, SingularPairsSatisfyDefinition) {
  std::mt19937_64 g(29);
  const Matrix a = rand_mat(6, 6, g);
  const double nrm = operator_norm(a);
  const auto pairs = singular_pairs_above(a, 0.5 * nrm);
  ASSERT_FALSE(pairs.empty());
  EXPECT_NEAR(pairs.front().value, nrm, 1e-10 * nrm);
  for (const auto& p : pairs) {
    EXPECT_GE(p.value, 0.5 * nrm);
    EXPECT_LT((a * p.right - p.value * p.left).norm(), 1e-10 * nrm);
    EXPECT_NEAR(p.left.norm(), 1.0, 1e-12);
  }
}

TEST(OperatorCore, PartialIsometryAndProjection) {
  Matrix u = Matrix::Zero(2, 3);
  u(0, 0) = 1.0;
  u(1, 2) = Complex(0.0, 1.0);
  const auto r = is_partial_isometry(u);
  EXPECT_TRUE(r.is_partial_isometry);
  EXPECT_TRUE(r.is_coisometry);
  const SparseMatrix p = to_sparse(Matrix(u.adjoint() * u));
  EXPECT_TRUE(is_projection(p));

  Matrix v = u;
  v(0, 0) = 2.0;
  EXPECT_FALSE(is_partial_isometry(v).is_partial_isometry);
  EXPECT_FALSE(is_projection(to_sparse(Matrix(v.adjoint() * v))));

  // Rank-deficient partial isometry: not a co-isometry.
  Matrix w = Matrix::Zero(2, 3);
  w(0, 1) = 1.0;
  const auto rw = is_partial_isometry(w);
  EXPECT_TRUE(rw.is_partial_isometry);
  EXPECT_FALSE(rw.is_coisometry);
}
