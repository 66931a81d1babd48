// Acceptance criteria AC1–AC9. One PASS/FAIL line per criterion; the exit
// status is nonzero if any criterion fails. Pass criterion names (AC3 ...) to
// run a subset.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "ncg/ncg.hpp"
#include "oracles.hpp"

using namespace ncg;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::vector<Complex> chain_x(int n) {
  std::vector<Complex> xs;
  for (int i = 0; i < n * (n - 1) / 2; ++i) xs.emplace_back(1.0 + 0.25 * i, 0.1 * i);
  return xs;
}

// AC1: two-point distance against the closed form and a grid search.
void ac1(Outcome& o) {
  for (double x : {0.5, 1.0, 2.0}) {
    const auto t0 = Clock::now();
    const auto t = build_npoint(2, Complex(x));
    const double d = connes_distance(t, PureState::evaluation(0), PureState::evaluation(1)).value.value;
    const double secs = seconds_since(t0);
    // grid oracle: f = (0, a), admissible iff ‖[D, f]‖ ≤ 1
    const Matrix dd = to_dense(t.dirac);
    double grid = 0.0;
    for (int k = 0; k <= 4000; ++k) {
      Vector f(2);
      f << 0.0, 0.001 * k;
      if (oracle::power_norm(commutator(dd, to_dense(t.represent_coordinates(f))), 50) <= 1.0 + 1e-12) grid = 0.001 * k;
    }
    o.detail << " x=" << x << ": d=" << d << " (" << secs << "s, grid " << grid << ")";
    o.require(std::abs(d - oracle::two_point(x)) <= 1e-6, "closed form at x=" + std::to_string(x));
    o.require(std::abs(d - grid) <= 1e-3, "grid oracle at x=" + std::to_string(x));
    o.require(secs < 1.0, "runtime at x=" + std::to_string(x));
  }
}

// AC2: F_N → F_{N−1} chain.
void ac2(Outcome& o) {
  for (int n = 3; n <= 5; ++n) {
    const auto m = npoint_morphism(n, chain_x(n));
    const double riem = check_riemannian(m).residual;
    const double tg = check_totally_geodesic(m).residual;
    o.detail << " F" << n << ": riem=" << riem << " tg=" << tg;
    o.require(riem <= 1e-12, "riemannian residual F" + std::to_string(n));
    o.require(tg <= 1e-12, "totally geodesic residual F" + std::to_string(n));
    try {
      const auto rep = classify(m, default_state_set(m.target->algebra));
      // totally geodesic ⇒ Riemannian, and with uu* = Id ⇒ isometric
      o.require(rep.totally_geodesic && rep.riemannian, "classification flags F" + std::to_string(n));
      o.require(!rep.coisometry || rep.isometric, "co-isometric TG must be isometric F" + std::to_string(n));
    } catch (const InconsistencyError& e) {
      o.require(false, e.what());
    }
  }
}

// AC3: discrete circle × F_ED.
void ac3(Outcome& o) {
  for (int n : {32, 64}) {
    const auto t0 = Clock::now();
    const auto circle = build_circle(CircleGrid::flat(n));
    const SmoothMorphism m = almost_commutative_morphism(circle.triple, Complex(1.0));
    const SparseMatrix p = m.projection();
    const double riem = check_riemannian(m).residual;
    const double dp = max_abs(commutator(m.source->dirac, p));
    const auto nr = check_norm_restriction(*m.source, p, m.source->algebra.self_adjoint_basis());
    const auto states = default_state_set(m.target->algebra);
    const auto iso = check_isometric(m, states, 1e-3);

    // d(φ*ε_p, φ*ε_q) on the full product against d(ε_p, ε_q) on the circle
    ConnesMetric d2 = ConnesMetric::full(*m.source);
    ConnesMetric d1 = ConnesMetric::full(*m.target);
    const auto pulled = ncg::detail::pulled_back(m, states);
    double pulled_gap = 0.0;
    for (int k = 1; k < n; ++k) {
      const auto lhs = d2.distance(pulled[0], pulled[static_cast<std::size_t>(k)]).value;
      const auto rhs = d1.distance(states[0], states[static_cast<std::size_t>(k)]).value;
      pulled_gap = std::max(pulled_gap, std::abs(lhs.value - rhs.value) / std::max(1.0, rhs.value));
      pulled_gap = std::max(pulled_gap, std::abs(rhs.value - oracle::circle_geodesic(n, k)) / std::max(1.0, rhs.value));
    }
    const double secs = seconds_since(t0);
    o.detail << " n=" << n << ": riem=" << riem << " [D,P]=" << dp << " normres=" << nr.max_gap
             << " iso_pairs=" << iso.pairs.size() << " pulled_gap=" << pulled_gap << " (" << secs << "s)";
    const std::string tag = " n=" + std::to_string(n);
    o.require(riem <= 1e-10, "riemannian" + tag);
    o.require(dp <= 1e-12, "[D2,P]" + tag);
    o.require(nr.max_gap <= 1e-10, "norm restriction" + tag);
    o.require(iso.pass, "isometric" + tag);
    o.require(pulled_gap <= 1e-3, "pulled-back distance identity" + tag);
    if (n == 64) o.require(secs < 120.0, "runtime" + tag);
  }
}

// AC4: N = one circle included as a component of M = two disjoint circles.
void ac4(Outcome& o) {
  const int n = 16;
  const auto circle = build_circle(CircleGrid::flat(n));
  const auto other = build_circle(CircleGrid::flat(n));
  const auto m = disjoint_union(circle, other);
  std::mt19937_64 g(4);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    RealVector h(2 * n);
    for (int i = 0; i < n; ++i) h(i) = nd(g);
    h.tail(n).setConstant(nd(g));
    const double lhs = circle.commutator_norm(h.head(n));
    const double rhs = m.commutator_norm(h);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  ConnesMetric dm = ConnesMetric::full(m.triple);
  ConnesMetric dn = ConnesMetric::full(circle.triple);
  double dist_gap = 0.0;
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const double a = dm.distance(PureState::evaluation(p), PureState::evaluation(q)).value.value;
      const double b = dn.distance(PureState::evaluation(p), PureState::evaluation(q)).value.value;
      dist_gap = std::max(dist_gap, std::abs(a - b) / std::max(1.0, b));
    }
  }
  const double eps = DistanceOptions{}.eps;
  o.detail << " norm_gap=" << worst << " distance_gap=" << dist_gap << " (solver eps " << eps << ")";
  o.require(worst <= 1e-12, "norm equality");
  o.require(dist_gap <= eps, "distance equality");
}

// AC5: circle in torus with the retraction.
void ac5(Outcome& o) {
  const auto rows = hodge_norm_table({64, 128}, 3.0);
  for (std::size_t f = 0; f < 3; ++f) {
    const auto& a = rows[f];
    const auto& b = rows[f + 3];
    o.detail << " " << a.function << ": " << a.rel_gap << " -> " << b.rel_gap;
    o.require(a.rel_gap <= 0.05, "gap at 64 for " + a.function);
    o.require(b.rel_gap < a.rel_gap, "gap decreasing for " + a.function);
  }
  const int n = 64;
  const auto circle = build_circle(CircleGrid::flat(n));
  const auto torus = build_torus({n, n, 3.0, TorusMetric::embedded});
  const RealVector k = circle_function(circle.circle, [](double t) { return std::cos(t); });
  // midpoint against vertex sampling: first-order in the spacing
  const auto lift = verify_gradient_lift(torus, circle, k, circle.circle.spacing(), [](double t) { return -std::sin(t); });
  o.detail << " lift: vertical=" << lift.vertical_residual << " horizontal=" << lift.horizontal_vs_analytic;
  o.require(lift.vertical_residual <= 1e-10, "vertical residual");
  o.require(lift.horizontal_vs_circle <= 1e-10 && lift.horizontal_vs_analytic <= circle.circle.spacing(), "horizontal match");
}

// AC6: unbounded pullback, squared-norm ratio grows like n.
void ac6(Outcome& o) {
  const double phi0 = std::numbers::pi / 2;
  const std::vector<int> ns = {1, 4, 16};
  const int nphi = refined_nphi(phi0, ns, 8);
  const auto rows = unbounded_pullback_demo({64, nphi, 3.0, TorusMetric::embedded}, phi0, ns, [](double t) { return std::cos(t); });
  o.detail << " nphi=" << nphi;
  for (const auto& r : rows) {
    const double flat = r.ratio_flat / rows[0].ratio_flat;
    const double vol = r.ratio_volume / rows[0].ratio_volume;
    o.detail << " n=" << r.n << ": " << flat << "/" << vol << " (" << r.support_cells << " cells)";
    o.require(std::abs(flat - r.n) <= 0.1 * r.n, "flat ratio growth n=" + std::to_string(r.n));
    o.require(std::abs(vol - r.n) <= 0.1 * r.n, "volume ratio growth n=" + std::to_string(r.n));
    o.require(r.support_cells >= 3, "support resolution n=" + std::to_string(r.n));
  }
}

// AC7: derivation dimensions and submanifold algebras.
void ac7(Outcome& o) {
  const auto profiles = oracle::all_profiles(20);
  int bad = 0;
  for (const auto& p : profiles) {
    if (derivation_space(FiniteAlgebra(p)).dimension() != oracle::derivation_dim(p)) ++bad;
  }
  Rng rng(7);
  int not_sub = 0;
  for (int i = 0; i < 50; ++i) {
    const auto phi = random_surjection(rng);
    if (!phi.is_surjective() || !is_submanifold_algebra(phi).is_submanifold) ++not_sub;
  }
  o.detail << " profiles=" << profiles.size() << " dim_mismatches=" << bad << " non_submanifold=" << not_sub << "/50";
  o.require(bad == 0, "derivation dimensions");
  o.require(not_sub == 0, "submanifold algebras");
}

// AC8: implication property suite.
void ac8(Outcome& o) {
  const auto s = run_implications(1, 100, 1e-9, 1e-4);
  o.detail << " tg_cases=" << s.totally_geodesic_cases << " riem_fail=" << s.riemannian_failures
           << " iso_fail=" << s.isometric_failures << " mono_cases=" << s.monotonicity_cases
           << " mono_fail=" << s.monotonicity_failures << " worst_excess=" << s.worst_monotonicity_excess;
  o.require(s.totally_geodesic_cases == 100 && s.riemannian_failures == 0, "TG => Riemannian");
  o.require(s.isometric_failures == 0, "TG and uu* = Id => isometric");
  o.require(s.monotonicity_cases == 100 && s.monotonicity_failures == 0, "monotonicity");
}

// AC9: Clifford-level conditional expectation.
void ac9(Outcome& o) {
  const std::vector<std::pair<std::string, SmoothMorphism>> cases = {{"F3->F2", npoint_morphism(3, chain_x(3))},
                                                                      {"F_ED", f_ed_morphism(Complex(1.0, 0.5))}};
  for (const auto& [name, m] : cases) {
    const auto r = clifford_expectation_check(m);
    o.detail << " " << name << ": idem=" << r.idempotence_residual << " ranks=" << r.rank_pulled_back << "/"
             << r.rank_compressed << "/" << r.rank_joint;
    o.require(r.idempotence_residual <= 1e-12, "idempotence " + name);
    o.require(r.rank_pulled_back == r.rank_compressed && r.rank_joint == r.rank_compressed, "span equality " + name);
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> all = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}};
  std::set<std::string> wanted(argv + 1, argv + argc);
  int failures = 0;
  for (const auto& [name, fn] : all) {
    if (!wanted.empty() && !wanted.count(name)) continue;
    Outcome o;
    const auto t0 = Clock::now();
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failures;
    std::printf("%s %s (%.1fs)%s\n", name.c_str(), o.pass ? "PASS" : "FAIL", seconds_since(t0), o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
