#include <gtest/gtest.h>

#include "ncg/ncg.hpp"
#include "oracles.hpp"

using namespace ncg;

namespace {

// Random off-diagonal entries for F_N; roughly one in five is zero so that
// some instances are disconnected.
std::vector<Complex> random_offdiag(int n, std::mt19937_64& g) {
  std::uniform_real_distribution<double> mag(0.3, 3.0), ang(0.0, 2 * std::numbers::pi), coin(0.0, 1.0);
  std::vector<Complex> x;
  for (int i = 0; i < n * (n - 1) / 2; ++i) x.push_back(coin(g) < 0.2 ? Complex(0.0) : std::polar(mag(g), ang(g)));
  return x;
}

}  // namespace

TEST(States, EvaluationAndVectorStates) {
  const FiniteAlgebra a({1, 2});
  AlgebraElement x = a.zero();
  x.blocks[0](0, 0) = 3.0;
  x.blocks[1] << 1.0, Complex(0, 2), Complex(0, -2), 5.0;
  EXPECT_NEAR(std::abs(evaluate(PureState::evaluation(0), a, x) - Complex(3.0)), 0.0, 1e-15);
  Vector xi(2);
  xi << 1.0 / std::sqrt(2.0), Complex(0.0, 1.0 / std::sqrt(2.0));
  // <ξ, x ξ> = ½(x00 + x11) + Re(conj(ξ0) x01 ξ1) + Re(conj(ξ1) x10 ξ0) = 3 − 1 − 1
  EXPECT_NEAR(std::abs(evaluate(PureState::vector_state(1, xi), a, x) - Complex(1.0)), 0.0, 1e-14);
  // the coefficient form agrees with evaluate
  const Vector w = state_functional(PureState::vector_state(1, xi), a);
  EXPECT_NEAR(std::abs(Complex((w.transpose() * a.coordinates(x))(0, 0)) - Complex(1.0)), 0.0, 1e-14);

  EXPECT_THROW(PureState::evaluation(1).check(a), ShapeError);
  EXPECT_THROW(PureState::vector_state(1, Vector::Ones(2)).check(a), ShapeError);
  State bad;
  bad.terms = {{0.7, PureState::evaluation(0)}, {0.2, PureState::evaluation(0)}};
  EXPECT_THROW(bad.check(a), ShapeError);
}

TEST(States, DensityAndDefaultSet) {
  const FiniteAlgebra a({1, 2});
  Matrix rho(2, 2);
  rho << 0.75, 0.0, 0.0, 0.25;
  const State s = state_from_density(a, 1, rho);
  AlgebraElement x = a.zero();
  x.blocks[1] << 2.0, 0.0, 0.0, 6.0;
  EXPECT_NEAR(evaluate(s, a, x).real(), 0.75 * 2 + 0.25 * 6, 1e-14);
  EXPECT_EQ(default_state_set(a).size(), 3u);
  EXPECT_THROW(state_from_density(a, 1, Matrix::Identity(2, 2)), ShapeError);
}

TEST(States, PullbackIsComposition) {
  const FiniteAlgebra src({2, 1, 3});
  const auto phi = BlockHomomorphism::drop_last(src);
  std::mt19937_64 g(9);
  std::normal_distribution<double> nd;
  for (const auto& rho : default_state_set(phi.target())) {
    const auto pb = pullback_state(phi, rho);
    EXPECT_TRUE(pb.purity_guaranteed);
    for (int trial = 0; trial < 5; ++trial) {
      AlgebraElement a = src.zero();
      for (auto& b : a.blocks)
        for (int i = 0; i < b.rows(); ++i)
          for (int j = 0; j < b.cols(); ++j) b(i, j) = Complex(nd(g), nd(g));
      EXPECT_NEAR(std::abs(evaluate(pb.state, src, a) - evaluate(rho, phi.target(), phi.apply(a))), 0.0, 1e-12);
    }
  }
}

TEST(Metric, TwoPointClosedForm) {
  for (double x : {0.25, 0.5, 1.0, 2.0, 7.0}) {
    const auto d = connes_distance(build_npoint(2, Complex(x, 0.0)), PureState::evaluation(0), PureState::evaluation(1));
    ASSERT_TRUE(d.value.is_finite());
    EXPECT_NEAR(d.value.value, oracle::two_point(x), 1e-6 * oracle::two_point(x));
  }
  // phase of x is irrelevant
  const auto d = connes_distance(build_npoint(2, std::polar(2.0, 1.1)), PureState::evaluation(0), PureState::evaluation(1));
  EXPECT_NEAR(d.value.value, 0.5, 1e-6);
  // same state, and a disconnected pair
  EXPECT_NEAR(connes_distance(build_npoint(2, Complex(2.0)), PureState::evaluation(0), PureState::evaluation(0)).value.value, 0.0,
              1e-12);
  EXPECT_TRUE(connes_distance(build_npoint(2, Complex(0.0)), PureState::evaluation(0), PureState::evaluation(1)).value.infinite);
}

TEST(Metric, MixedStatesAreLinear) {
  // On two points the optimum f is affine in the state, so the half mixture
  // sits at half the distance.
  State mix;
  mix.terms = {{0.5, PureState::evaluation(0)}, {0.5, PureState::evaluation(1)}};
  const auto d = connes_distance(build_npoint(2, Complex(2.0)), mix, PureState::evaluation(0));
  EXPECT_NEAR(d.value.value, 0.25, 1e-6);
}

TEST(Metric, NPointMatchesShortestPaths) {
  std::mt19937_64 g(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 3;
    const auto x = random_offdiag(n, g);
    const auto t = build_npoint(n, x);
    const auto ref = oracle::npoint_distances(n, x);
    ConnesMetric metric = ConnesMetric::full(t);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const auto d = metric.distance(PureState::evaluation(i), PureState::evaluation(j));
        if (std::isinf(ref[i][j])) {
          EXPECT_TRUE(d.value.infinite) << "trial " << trial << " pair " << i << "," << j;
        } else {
          ASSERT_TRUE(d.value.is_finite()) << "trial " << trial;
          EXPECT_NEAR(d.value.value, ref[i][j], 1e-6 * std::max(1.0, ref[i][j])) << "trial " << trial;
        }
      }
    }
  }
}

TEST(Metric, ShortestPathModelAgreesWithGridSearch) {
  // Tests the oracle's own assumption on F3 with an explicit commutator norm.
  const std::vector<Complex> x = {Complex(1.0), Complex(0.5), Complex(2.0)};
  const auto t = build_npoint(3, x);
  const auto ref = oracle::npoint_distances(3, x);
  const Matrix d = to_dense(t.dirac);
  double best = 0.0;
  for (int a = -40; a <= 40; ++a) {
    for (int b = -40; b <= 40; ++b) {
      Vector f(3);
      f << 0.0, 0.05 * a, 0.05 * b;
      const Matrix c = commutator(d, to_dense(t.represent_coordinates(f)));
      if (oracle::power_norm(c, 200) <= 1.0 + 1e-9) best = std::max(best, f(1).real());
    }
  }
  EXPECT_NEAR(best, ref[0][1], 0.05 + 1e-9);
  EXPECT_NEAR(brute_force_distance(t, PureState::evaluation(0), PureState::evaluation(1), {-2.0, 2.0, 0.05}), ref[0][1], 0.05);
}

TEST(Metric, MetricAxiomsOnRandomTriples) {
  std::mt19937_64 g(77);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4;
    auto x = random_offdiag(n, g);
    for (auto& v : x)
      if (v == Complex(0.0)) v = 1.0;
    ConnesMetric m = ConnesMetric::full(build_npoint(n, x));
    double dist[4][4];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dist[i][j] = m.distance(PureState::evaluation(i), PureState::evaluation(j)).value.value;
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(dist[i][i], 0.0, 1e-12);
      for (int j = 0; j < n; ++j) {
        EXPECT_NEAR(dist[i][j], dist[j][i], 1e-6 * std::max(1.0, dist[i][j]));
        for (int k = 0; k < n; ++k) EXPECT_LE(dist[i][k], dist[i][j] + dist[j][k] + 1e-6);
      }
    }
  }
}

TEST(Metric, CircleGeodesics) {
  const int n = 32;
  const auto circle = build_circle(CircleGrid::flat(n));
  ConnesMetric m = ConnesMetric::full(circle.triple);
  for (int k : {1, 5, 16, 23}) {
    const double d = m.distance(PureState::evaluation(0), PureState::evaluation(k)).value.value;
    EXPECT_NEAR(d, oracle::circle_geodesic(n, k), 1e-6 * oracle::circle_geodesic(n, k)) << "k=" << k;
  }
}

TEST(Metric, RestrictedAndCompressedVariants) {
  const std::vector<Complex> x = {Complex(1.0), Complex(0.5), Complex(2.0)};
  const auto t = build_npoint(3, x);
  const State a = PureState::evaluation(0), b = PureState::evaluation(2);
  const double full = connes_distance(t, a, b).value.value;
  // Restricting the family can only shrink the supremum.
  std::vector<AlgebraElement> fam = {t.algebra.basis_element(2)};
  const auto r = connes_distance_restricted(t, fam, a, b);
  EXPECT_LE(r.value.value, full + 1e-9);
  // P = 1 changes nothing.
  const auto c = compressed_distance(t, sparse_identity(t.hilbert_dim), a, b);
  EXPECT_NEAR(c.value.value, full, 1e-6);
  Matrix notp = Matrix::Identity(t.hilbert_dim, t.hilbert_dim) * 0.5;
  EXPECT_THROW(compressed_distance(t, to_sparse(notp), a, b), PreconditionError);
}

TEST(Metric, NoncommutativeDiagonalDiracIsInfinite) {
  // M2 on C^2 with diagonal D: [D, a] only sees off-diagonal entries, so the
  // diagonal difference is unconstrained.
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  const auto t = block_triple({2}, {1}, d);
  const auto r = connes_distance(t, PureState::vector_state(0, Vector::Unit(2, 0)), PureState::vector_state(0, Vector::Unit(2, 1)));
  EXPECT_TRUE(r.value.infinite);
}

TEST(Simplex, MatchesVertexEnumeration) {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.2, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 3, m = 2 + trial % 5;
    DenseSimplex::RealMatrix a(m + n, n);
    Eigen::VectorXd b(m + n), c(n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = u(g);
      b(i) = pos(g);
    }
    // a box keeps everything bounded
    for (int j = 0; j < n; ++j) {
      a.row(m + j).setZero();
      a(m + j, j) = 1.0;
      b(m + j) = 3.0;
    }
    for (int j = 0; j < n; ++j) c(j) = u(g);
    DenseSimplex lp(n, trial % 2 ? PivotRule::dantzig : PivotRule::bland);
    for (int i = 0; i < m + n; ++i) lp.add_constraint(a.row(i).transpose(), b(i));
    lp.set_objective(c);
    ASSERT_EQ(lp.solve(), LpStatus::optimal);
    const double ref = oracle::lp_vertex_max(Eigen::MatrixXd(a), b, c);
    EXPECT_NEAR(lp.objective_value(), ref, 1e-9) << "trial " << trial;
    EXPECT_LE(lp.max_violation(), 1e-9);
  }
}

TEST(Simplex, UnboundedAndInfeasible) {
  DenseSimplex lp(2);
  Eigen::VectorXd row(2);
  row << 1.0, -1.0;
  lp.add_constraint(row, 1.0);
  Eigen::VectorXd c(2);
  c << 1.0, 1.0;
  lp.set_objective(c);
  EXPECT_EQ(lp.solve(), LpStatus::unbounded);

  DenseSimplex bad(1);
  Eigen::VectorXd r1(1);
  r1 << -1.0;
  bad.add_constraint(r1, -2.0);  // x >= 2
  r1 << 1.0;
  bad.add_constraint(r1, 1.0);   // x <= 1
  Eigen::VectorXd c1(1);
  c1 << 1.0;
  bad.set_objective(c1);
  EXPECT_EQ(bad.solve(), LpStatus::infeasible);
}

TEST(Simplex, WarmStartAfterAddingRows) {
  DenseSimplex lp(2, PivotRule::dantzig);
  Eigen::VectorXd r(2), c(2);
  r << 1.0, 0.0;
  lp.add_constraint(r, 4.0);
  r << 0.0, 1.0;
  lp.add_constraint(r, 4.0);
  c << 1.0, 1.0;
  lp.set_objective(c);
  ASSERT_EQ(lp.solve(), LpStatus::optimal);
  EXPECT_NEAR(lp.objective_value(), 8.0, 1e-12);
  r << 1.0, 1.0;
  lp.add_constraint(r, 5.0);
  ASSERT_EQ(lp.solve(), LpStatus::optimal);
  EXPECT_NEAR(lp.objective_value(), 5.0, 1e-12);
}
