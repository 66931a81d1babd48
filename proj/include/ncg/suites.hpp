#pragma once

// Seeded generators of morphisms with known properties, and the named
// verification suites run by the command-line tool.

#include "ncg/hodge.hpp"
#include "ncg/morphisms.hpp"

#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace ncg {

using Rng = std::mt19937_64;

inline Matrix random_gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = Complex(g(rng), g(rng));
  }
  return m;
}

inline Matrix random_hermitian(int n, Rng& rng) {
  const Matrix g = random_gaussian(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

/// Haar-distributed unitary: QR of a complex Gaussian with the phases of R
/// divided out.
inline Matrix random_unitary(int n, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_gaussian(n, n, rng));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

/// Random finite triple: a small block profile with multiplicities and a
/// Dirac operator that is a random Hermitian matrix.
inline FiniteSpectralTriple random_block_triple(Rng& rng, int max_blocks = 3) {
  std::uniform_int_distribution<int> nb(1, max_blocks), dim(1, 2), mult(1, 2);
  std::vector<int> dims, mults;
  const int k = nb(rng);
  int h = 0;
  for (int i = 0; i < k; ++i) {
    dims.push_back(dim(rng));
    mults.push_back(mult(rng));
    h += dims.back() * mults.back();
  }
  return block_triple(dims, mults, random_hermitian(h, rng));
}

/// Element of the commutant of a block_triple representation: ⊕ 1_{n_i} ⊗ B_i.
inline Matrix random_commutant(const std::vector<int>& dims, const std::vector<int>& mults, Rng& rng) {
  int h = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) h += dims[i] * mults[i];
  Matrix out = Matrix::Zero(h, h);
  int off = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const int m = mults[i];
    const Matrix b = random_gaussian(m, m, rng);
    for (int r = 0; r < dims[i]; ++r) out.block(off + r * m, off + r * m, m, m) = b;
    off += dims[i] * m;
  }
  return out;
}

namespace detail {

inline SparseMatrix leading_coordinates(int rows, int cols) {
  SparseMatrix u(rows, cols);
  for (int i = 0; i < rows; ++i) u.insert(i, i) = 1.0;
  u.makeCompressed();
  return u;
}

}  // namespace detail

/// Totally geodesic by construction: T2 = W(T1 ⊕ T3)W*, φ drops the T3
/// blocks, u = [1 | 0] W*.
inline SmoothMorphism random_totally_geodesic(Rng& rng) {
  const FiniteSpectralTriple t1 = random_block_triple(rng);
  const FiniteSpectralTriple t3 = random_block_triple(rng, 2);
  FiniteSpectralTriple sum = direct_sum_triple(t1, t3);
  const Matrix w = random_unitary(sum.hilbert_dim, rng);
  const SparseMatrix u = to_sparse(Matrix(to_dense(detail::leading_coordinates(t1.hilbert_dim, sum.hilbert_dim)) * w.adjoint()), 1e-15);
  BlockHomomorphism phi = BlockHomomorphism::drop_last(sum.algebra, t3.algebra.num_blocks());
  return SmoothMorphism(std::move(phi), u, conjugate_triple(sum, w), t1);
}

/// Riemannian by construction, with [D2, P] = 0 but not totally geodesic:
/// A1 acts twice on H1 ⊕ H1, the first copy carries D1 + K with K = K* in the
/// commutant of π1, the second an unrelated Hermitian E; an extra summand T3
/// is dropped by φ. Everything is conjugated by a random unitary.
inline SmoothMorphism random_riemannian(Rng& rng) {
  std::uniform_int_distribution<int> nb(1, 3), dim(1, 2), mult(1, 2);
  std::vector<int> dims, mults;
  const int k = nb(rng);
  int h1 = 0;
  for (int i = 0; i < k; ++i) {
    dims.push_back(dim(rng));
    mults.push_back(mult(rng));
    h1 += dims.back() * mults.back();
  }
  const Matrix d1 = random_hermitian(h1, rng);
  const FiniteSpectralTriple t1 = block_triple(dims, mults, d1);

  const Matrix c = random_commutant(dims, mults, rng);
  Matrix d2 = Matrix::Zero(2 * h1, 2 * h1);
  d2.topLeftCorner(h1, h1) = d1 + 0.5 * (c + c.adjoint());
  d2.bottomRightCorner(h1, h1) = random_hermitian(h1, rng);

  // block_triple(dims, 2 m) interleaves the copies inside each block; pm maps
  // its coordinates to H1 ⊕ H1.
  std::vector<int> mults2;
  for (int m : mults) mults2.push_back(2 * m);
  Matrix pm = Matrix::Zero(2 * h1, 2 * h1);
  int off1 = 0, off2 = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const int m = mults[i];
    for (int r = 0; r < dims[i]; ++r) {
      for (int col = 0; col < 2 * m; ++col) {
        const int copy = col < m ? off1 + r * m + col : h1 + off1 + r * m + (col - m);
        pm(copy, off2 + r * 2 * m + col) = 1.0;
      }
    }
    off1 += dims[i] * m;
    off2 += dims[i] * 2 * m;
  }
  const FiniteSpectralTriple doubled = block_triple(dims, mults2, Matrix(pm.adjoint() * d2 * pm));
  const FiniteSpectralTriple t3 = random_block_triple(rng, 2);
  const FiniteSpectralTriple sum = direct_sum_triple(doubled, t3);
  Matrix u = Matrix::Zero(h1, sum.hilbert_dim);
  u.leftCols(2 * h1) = pm.topRows(h1);
  const Matrix w = random_unitary(sum.hilbert_dim, rng);
  BlockHomomorphism phi = BlockHomomorphism::drop_last(sum.algebra, t3.algebra.num_blocks());
  return SmoothMorphism(std::move(phi), to_sparse(Matrix(u * w.adjoint()), 1e-15), conjugate_triple(sum, w), t1);
}

/// Surjective routing onto a random sub-profile: every target block is fed
/// by a distinct source block of equal size, optionally conjugated.
inline BlockHomomorphism random_surjection(Rng& rng) {
  std::uniform_int_distribution<int> nb(1, 4), dim(1, 3), coin(0, 1);
  std::vector<int> src;
  int budget = 20;
  const int k = nb(rng);
  for (int i = 0; i < k; ++i) {
    int n = dim(rng);
    while (n > 1 && n * n > budget) --n;
    if (n * n > budget) break;
    src.push_back(n);
    budget -= n * n;
  }
  std::vector<int> order(src.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_int_distribution<int> keep(1, static_cast<int>(src.size()));
  const int kept = keep(rng);
  std::vector<int> tgt;
  std::vector<Route> routes;
  for (int t = 0; t < kept; ++t) {
    const int s = order[static_cast<std::size_t>(t)];
    tgt.push_back(src[static_cast<std::size_t>(s)]);
    Route r{t, s, std::nullopt};
    if (src[static_cast<std::size_t>(s)] > 1 && coin(rng)) r.conjugation = random_unitary(src[static_cast<std::size_t>(s)], rng);
    routes.push_back(std::move(r));
  }
  return BlockHomomorphism(FiniteAlgebra(src), FiniteAlgebra(tgt), std::move(routes));
}

// ---------------------------------------------------------------------------
// Suites

struct SuiteCase {
  std::string name;
  bool pass = false;
  std::string detail;
  std::vector<std::pair<std::string, double>> values;
};

struct SuiteReport {
  std::string name;
  std::vector<SuiteCase> cases;
  bool passed() const {
    for (const auto& c : cases) {
      if (!c.pass) return false;
    }
    return !cases.empty();
  }
};

struct SuiteOptions {
  double tau = 1e-9;
  double eps = 1e-4;
  double tau_rel = 0.05;
  std::uint64_t seed = 1;
  int samples = 100;
};

namespace detail {

inline void add_case(SuiteReport& r, std::string name, bool pass, std::string detail = {},
                     std::vector<std::pair<std::string, double>> values = {}) {
  r.cases.push_back({std::move(name), pass, std::move(detail), std::move(values)});
}

// Runs a case body, turning exceptions into failures.
inline void guarded(SuiteReport& r, const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    add_case(r, name, false, std::string("exception: ") + e.what());
  }
}

}  // namespace detail

inline SuiteReport suite_worked_examples(const SuiteOptions& o) {
  SuiteReport r{"paper-examples", {}};
  detail::guarded(r, "two-point distance", [&] {
    for (double x : {0.5, 1.0, 2.0}) {
      const auto d = connes_distance(build_npoint(2, Complex(x)), PureState::evaluation(0), PureState::evaluation(1));
      detail::add_case(r, "F2 distance x=" + std::to_string(x), std::abs(d.value.value - 1.0 / x) <= 1e-6, {},
                       {{"distance", d.value.value}, {"expected", 1.0 / x}});
    }
  });
  detail::guarded(r, "npoint dimensions", [&] {
    bool ok = true;
    for (int n = 2; n <= 8; ++n) ok = ok && build_npoint(n, Complex(1.0)).hilbert_dim == n * (n - 1);
    detail::add_case(r, "F_N hilbert_dim = N(N-1)", ok);
  });
  detail::guarded(r, "F_N chain", [&] {
    for (int n = 3; n <= 5; ++n) {
      std::vector<Complex> xs;
      for (int i = 0; i < n * (n - 1) / 2; ++i) xs.emplace_back(1.0 + 0.25 * i, 0.1 * i);
      const SmoothMorphism m = npoint_morphism(n, xs);
      const auto rep = classify(m, default_state_set(m.target->algebra), {o.tau, o.eps, {}, true});
      detail::add_case(r, "F" + std::to_string(n) + " -> F" + std::to_string(n - 1),
                       rep.smooth_morphism && rep.embedding && rep.riemannian && rep.totally_geodesic && rep.isometric, {},
                       {{"riemannian_residual", rep.riemannian_residual}, {"tg_residual", rep.totally_geodesic_residual}});
    }
  });
  detail::guarded(r, "F_ED", [&] {
    const auto t = build_f_ed(Complex(1.0, 0.5));
    double comm = 0.0;
    for (int k = 0; k < 2; ++k) comm = std::max(comm, max_abs(commutator(t.dirac, t.rep.image(k))));
    detail::add_case(r, "F_ED valid and [D_F, pi] = 0", validate_triple(t).ok() && comm == 0.0);
  });
  detail::guarded(r, "almost-commutative", [&] {
    const auto circle = build_circle(CircleGrid::flat(16));
    const SmoothMorphism m = almost_commutative_morphism(circle.triple, Complex(1.0));
    const auto rep = classify(m, default_state_set(m.target->algebra), {o.tau, 1e-3, {}, true});
    detail::add_case(r, "circle x F_ED: riemannian, not totally geodesic, isometric",
                     rep.riemannian && !rep.totally_geodesic && rep.isometric, {},
                     {{"riemannian_residual", rep.riemannian_residual}, {"isometric_gap", rep.isometric_gap}});
  });
  detail::guarded(r, "submanifold algebras", [&] {
    const auto drop = BlockHomomorphism::drop_last(FiniteAlgebra::commutative(3));
    const auto block = BlockHomomorphism::drop_last(FiniteAlgebra({2, 2}));
    const auto s1 = is_submanifold_algebra(drop);
    const auto s2 = is_submanifold_algebra(block);
    detail::add_case(r, "C^3 -> C^2 and M2+M2 -> M2", s1.is_submanifold && s2.is_submanifold && s2.dim_der_phi == 6);
  });
  detail::guarded(r, "Clifford algebra", [&] {
    const int dim = clifford_algebra(build_npoint(2, Complex(1.0))).dimension();
    detail::add_case(r, "Cl(F2) = M2", dim == 4, {}, {{"dimension", dim}});
  });
  detail::guarded(r, "isometric immersion", [&] {
    const TorusGrid tg{64, 64, 3.0, TorusMetric::embedded};
    std::vector<double> params;
    std::vector<std::array<double, 2>> image;
    for (int i = 0; i < 64; ++i) {
      params.push_back(i * tg.htheta());
      image.push_back({i * tg.htheta(), 0.0});
    }
    const auto rep = check_riemannian_immersion(params, image, [](double) { return 1.0; },
                                                [&](double th, double) { return torus_metric(tg, th); }, 1e-12);
    detail::add_case(r, "f(theta) = (theta, 0) is isometric", rep.pass, {}, {{"residual", rep.max_residual}});
  });
  return r;
}

struct NormGapRow {
  std::string grid;
  std::string function;
  double norm_n = 0.0;
  double norm_m = 0.0;
  double rel_gap = 0.0;
};

inline std::vector<NormGapRow> hodge_norm_table(const std::vector<int>& sizes, double c) {
  const std::vector<std::pair<std::string, std::function<double(double)>>> fns = {
      {"cos(theta)", [](double t) { return std::cos(t); }},
      {"sin(2theta)", [](double t) { return std::sin(2 * t); }},
      {"cos(3theta)", [](double t) { return std::cos(3 * t); }}};
  std::vector<NormGapRow> rows;
  for (int n : sizes) {
    const auto circle = build_circle(CircleGrid::flat(n));
    const TorusGrid tg{n, n, c, TorusMetric::embedded};
    const auto torus = build_torus(tg);
    for (const auto& [name, f] : fns) {
      const RealVector h = torus_function(tg, [&](double th, double) { return f(th); });
      const auto rep = verify_commutator_norm_equality(circle, torus, h, 1.0);
      rows.push_back({std::to_string(n) + "/" + std::to_string(n) + "x" + std::to_string(n), name, rep.norm_n, rep.norm_m,
                      rep.rel_gap});
    }
  }
  return rows;
}

inline SuiteReport suite_hodge_convergence(const SuiteOptions& o) {
  SuiteReport r{"hodge-convergence", {}};
  detail::guarded(r, "norm equality", [&] {
    const auto rows = hodge_norm_table({32, 64, 128}, 3.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      bool pass = row.rel_gap <= o.tau_rel;
      // Refinement must not make the gap grow (10% noise allowance).
      if (i >= 3) pass = pass && row.rel_gap <= 1.1 * rows[i - 3].rel_gap + 1e-12;
      detail::add_case(r, row.grid + " " + row.function, pass, {},
                       {{"norm_N", row.norm_n}, {"norm_M", row.norm_m}, {"rel_gap", row.rel_gap}});
    }
  });
  detail::guarded(r, "gradient lift", [&] {
    const int n = 64;
    const auto circle = build_circle(CircleGrid::flat(n));
    const auto torus = build_torus({n, n, 3.0, TorusMetric::embedded});
    const RealVector k = circle_function(circle.circle, [](double t) { return std::cos(t); });
    const auto rep = verify_gradient_lift(torus, circle, k, 1.0 / n, [](double t) { return -std::sin(t); });
    detail::add_case(r, "gradient lift cos(theta)", rep.pass, {},
                     {{"vertical", rep.vertical_residual}, {"horizontal_vs_analytic", rep.horizontal_vs_analytic}});
  });
  detail::guarded(r, "circle distances", [&] {
    const int n = 128;
    const auto circle = build_circle(CircleGrid::flat(n));
    ConnesMetric metric = ConnesMetric::full(circle.triple);
    double worst = 0.0;
    for (int k : {1, 8, 21, 32, 64, 100}) {
      const double d = metric.distance(PureState::evaluation(0), PureState::evaluation(k)).value.value;
      const double expect = std::min(k, n - k) * circle.circle.spacing();
      worst = std::max(worst, std::abs(d - expect) / expect);
    }
    detail::add_case(r, "flat circle geodesic distances", worst <= 0.02, {}, {{"max_rel_error", worst}});
  });
  return r;
}

struct ImplicationStats {
  int totally_geodesic_cases = 0;
  int riemannian_failures = 0;
  int isometric_failures = 0;
  int monotonicity_cases = 0;
  int monotonicity_failures = 0;
  double worst_monotonicity_excess = 0.0;
};

/// TG ⇒ Riemannian, TG ∧ uu* = Id ⇒ isometric, and d_{D1} ≤ d_{PD2P} for
/// Riemannian morphisms with [D2, P] = 0, on seeded random instances.
inline ImplicationStats run_implications(std::uint64_t seed, int samples, double tau, double eps) {
  Rng rng(seed);
  ImplicationStats s;
  for (int i = 0; i < samples; ++i) {
    const SmoothMorphism m = random_totally_geodesic(rng);
    ++s.totally_geodesic_cases;
    if (!check_totally_geodesic(m, tau).pass) continue;
    if (!check_riemannian(m, tau).pass) ++s.riemannian_failures;
    if (is_partial_isometry(m.u, tau).is_coisometry) {
      if (!check_isometric(m, default_state_set(m.target->algebra), eps).pass) ++s.isometric_failures;
    }
  }
  for (int i = 0; i < samples; ++i) {
    const SmoothMorphism m = random_riemannian(rng);
    const SparseMatrix p = m.projection();
    if (!check_riemannian(m, tau).pass || max_abs(commutator(m.source->dirac, p)) > tau) continue;
    ++s.monotonicity_cases;
    const auto states = default_state_set(m.target->algebra);
    const auto c = check_isometric(m, states, std::numeric_limits<double>::infinity());
    for (const auto& p : c.pairs) {
      if (p.rhs.infinite) continue;
      const double excess = p.lhs.infinite ? 0.0 : (p.rhs.value - p.lhs.value) / std::max(1.0, p.rhs.value);
      s.worst_monotonicity_excess = std::max(s.worst_monotonicity_excess, excess);
      if (excess > eps) {
        ++s.monotonicity_failures;
        break;
      }
    }
  }
  return s;
}

inline SuiteReport suite_implications(const SuiteOptions& o) {
  SuiteReport r{"implications", {}};
  detail::guarded(r, "implications", [&] {
    const auto s = run_implications(o.seed, o.samples, o.tau, o.eps);
    detail::add_case(r, "totally geodesic => riemannian", s.riemannian_failures == 0, {},
                     {{"cases", s.totally_geodesic_cases}, {"failures", s.riemannian_failures}});
    detail::add_case(r, "totally geodesic and uu* = Id => isometric", s.isometric_failures == 0, {},
                     {{"cases", s.totally_geodesic_cases}, {"failures", s.isometric_failures}});
    detail::add_case(r, "riemannian => d_D1 <= d_PD2P", s.monotonicity_failures == 0 && s.monotonicity_cases == o.samples, {},
                     {{"cases", s.monotonicity_cases},
                      {"failures", s.monotonicity_failures},
                      {"worst_excess", s.worst_monotonicity_excess}});
  });
  return r;
}

inline const std::map<std::string, std::function<SuiteReport(const SuiteOptions&)>>& suites() {
  static const std::map<std::string, std::function<SuiteReport(const SuiteOptions&)>> table = {
      {"paper-examples", suite_worked_examples},
      {"hodge-convergence", suite_hodge_convergence},
      {"implications", suite_implications}};
  return table;
}

}  // namespace ncg
