#pragma once

// Connes' distance  d(ρ, σ) = sup { Re(ρ − σ)(a) : a = a*, ‖[D, π(a)]‖ ≤ 1 }
// by cutting planes: the norm ball is the intersection of the half-spaces
// Re⟨u, [D, π(a)] w⟩ ≤ 1 over unit u, w, and each LP iterate that leaves the
// ball contributes the half-spaces of its top singular pairs.

#include "ncg/simplex.hpp"
#include "ncg/states.hpp"
#include "ncg/triple.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncg {

struct ExtendedReal {
  double value = 0.0;
  bool infinite = false;

  static ExtendedReal finite(double v) { return {v, false}; }
  static ExtendedReal infinity() { return {std::numeric_limits<double>::infinity(), true}; }
  bool is_finite() const { return !infinite; }
  std::string str() const { return infinite ? "inf" : std::to_string(value); }
};

struct DistanceOptions {
  double eps = 1e-6;        // relative objective gap
  double eps_feas = 1e-8;   // allowed excess of the commutator norm
  int max_iter = 500;
  int cuts_per_block = 2;   // violated singular pairs turned into cuts per round
  PivotRule rule = PivotRule::dantzig;
};

struct DistanceResult {
  ExtendedReal value;
  AlgebraElement certificate;  // feasible element attaining `value` (a direction of unboundedness for +inf)
  int iterations = 0;
  double upper_bound = 0.0;
};

class IterationLimitError : public std::runtime_error {
 public:
  IterationLimitError(double lower, double upper)
      : std::runtime_error("Connes distance: iteration limit reached with bounds [" + std::to_string(lower) + ", " +
                           std::to_string(upper) + "]"),
        lower_bound(lower),
        upper_bound(upper) {}
  double lower_bound;
  double upper_bound;
};

/// Solver bound to an algebra, its representation, a Dirac operator and a
/// real-linearly independent family of self-adjoint generators. Cuts do not
/// depend on the objective, so the cuts and LP basis are reused across
/// state pairs.
class ConnesMetric {
 public:
  ConnesMetric(const FiniteAlgebra& alg, const Representation& rep, const SparseMatrix& dirac,
               std::vector<AlgebraElement> generators, DistanceOptions opts = {})
      : alg_(alg), opts_(opts), generators_(std::move(generators)) {
    const Eigen::Index h = dirac.rows();
    hilbert_dim_ = static_cast<int>(h);
    const int k = static_cast<int>(generators_.size());
    if (k == 0) throw ShapeError("ConnesMetric: empty generator family");

    coords_.resize(alg.dimension(), k);
    for (int j = 0; j < k; ++j) {
      const AlgebraElement& g = generators_[static_cast<std::size_t>(j)];
      if (max_abs(alg.coordinates(g - g.adjoint())) > 1e-12) throw ShapeError("ConnesMetric: generators must be self-adjoint");
      coords_.col(j) = alg.coordinates(g);
    }

    // Commutators C_j = [D, π(b_j)], kept as one triplet list tagged by j.
    for (int j = 0; j < k; ++j) {
      std::vector<Triplet> entries;
      for (int e = 0; e < alg.dimension(); ++e) {
        const Complex c = coords_(e, j);
        if (c == Complex(0.0)) continue;
        for (const auto& r : rep[e]) entries.emplace_back(r.row, r.col, c * r.value);
      }
      SparseMatrix pi(h, h);
      pi.setFromTriplets(entries.begin(), entries.end());
      SparseMatrix cj = commutator(dirac, pi);
      cj.prune(Complex(0.0), 0.0);
      for (Eigen::Index o = 0; o < cj.outerSize(); ++o) {
        for (SparseMatrix::InnerIterator it(cj, o); it; ++it) {
          terms_.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()), j, it.value()});
        }
      }
    }

    // Gram matrix Re tr(C_j* C_l): the commutator map is injective exactly on
    // the span of its eigenvectors with positive eigenvalue.
    RealMatrix gram = RealMatrix::Zero(k, k);
    {
      std::vector<Triplet> flat;
      flat.reserve(terms_.size());
      for (const auto& t : terms_) flat.emplace_back(static_cast<Eigen::Index>(t.row) * h + t.col, t.j, t.value);
      SparseMatrix m(h * h, k);
      m.setFromTriplets(flat.begin(), flat.end());
      const SparseMatrix mm = SparseMatrix(m.adjoint()) * m;
      gram = to_dense(mm).real();
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(gram);
    const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
    std::vector<int> keep, kernel;
    for (int i = 0; i < k; ++i) {
      if (top > 0.0 && es.eigenvalues()(i) > 1e-12 * top) {
        keep.push_back(i);
      } else {
        kernel.push_back(i);
      }
    }
    basis_.resize(k, static_cast<Eigen::Index>(keep.size()));
    kernel_.resize(k, static_cast<Eigen::Index>(kernel.size()));
    RealVector bounds(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) {
      basis_.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(keep[i]);
      // yᵀΛy = ‖C(y)‖_F² ≤ rank · ‖C(y)‖² ≤ H on the feasible set.
      bounds(static_cast<Eigen::Index>(i)) = 1.5 * std::sqrt(static_cast<double>(h) / es.eigenvalues()(keep[i]));
    }
    for (std::size_t i = 0; i < kernel.size(); ++i) kernel_.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(kernel[i]);

    // LP variables z = y + B live in the box [0, 2B].
    reduced_ = static_cast<int>(keep.size());
    shift_ = bounds;
    if (reduced_ > 0) make_box_lp();
  }

  /// All self-adjoint matrix units of the triple's algebra as generators.
  static ConnesMetric full(const FiniteSpectralTriple& t, DistanceOptions opts = {}) {
    return ConnesMetric(t.algebra, t.rep, t.dirac, t.algebra.self_adjoint_basis(), opts);
  }

  int reduced_dimension() const { return reduced_; }
  int cut_count() const { return cuts_; }
  const DistanceOptions& options() const { return opts_; }

  /// π-image commutator [D, π(Σ x_j b_j)] for generator coefficients x.
  SparseMatrix commutator_of(const RealVector& x) const {
    std::vector<Triplet> t;
    t.reserve(terms_.size());
    for (const auto& e : terms_) {
      if (x(e.j) != 0.0) t.emplace_back(e.row, e.col, x(e.j) * e.value);
    }
    SparseMatrix c(hilbert_dim_, hilbert_dim_);
    c.setFromTriplets(t.begin(), t.end());
    return c;
  }

  AlgebraElement element_of(const RealVector& x) const {
    return alg_.from_coordinates(coords_ * x.cast<Complex>());
  }

  DistanceResult distance(const State& rho, const State& sigma) {
    const Vector w = state_functional(rho, alg_) - state_functional(sigma, alg_);
    RealVector ell(static_cast<Eigen::Index>(generators_.size()));
    for (Eigen::Index j = 0; j < ell.size(); ++j) ell(j) = (w.transpose() * coords_.col(j))(0, 0).real();

    DistanceResult res;
    const double scale = std::max(ell.norm(), 1e-300);
    if (ell.norm() <= 1e-14) {
      res.value = ExtendedReal::finite(0.0);
      res.certificate = alg_.zero();
      return res;
    }
    if (kernel_.cols() > 0) {
      const RealVector lk = kernel_.transpose() * ell;
      if (lk.norm() > 1e-9 * scale) {
        res.value = ExtendedReal::infinity();
        res.upper_bound = std::numeric_limits<double>::infinity();
        res.certificate = element_of(kernel_ * lk / lk.norm());
        return res;
      }
    }
    const RealVector lt = basis_.transpose() * ell;
    lp_->set_objective(lt);
    if (first_solve_) {
      if (lp_->solve() != LpStatus::optimal) throw std::runtime_error("Connes distance: box LP failed");
      first_solve_ = false;
    }

    double best_lb = 0.0;
    RealVector best_x = RealVector::Zero(ell.size());
    double ub = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= opts_.max_iter; ++it) {
      LpStatus st = lp_->solve();
      if (st != LpStatus::optimal) {
        // Accumulated round-off in the tableau; rebuild it from the stored rows.
        lp_->refactor();
        st = lp_->solve();
      }
      if (st != LpStatus::optimal) st = rebuild(lt);
      if (st != LpStatus::optimal) {
        throw std::runtime_error(std::string("Connes distance: cutting-plane LP failed (") + to_string(st) + ")");
      }
      // Cuts whose slack is basic and clearly positive are not touching the
      // current vertex; shedding them keeps the tableau small.
      if (lp_->num_rows() > 10 * reduced_ + 100) lp_->drop_slack_rows(1e-3, reduced_);
      const RealVector y = lp_->solution() - shift_;
      ub = std::min(ub, lt.dot(y));
      const RealVector x = basis_ * y;
      const SparseMatrix comm = commutator_of(x);
      auto pairs = sparse_singular_pairs_above(comm, 0.0, static_cast<std::size_t>(std::max(opts_.cuts_per_block, 1)));
      const double nu = pairs.empty() ? 0.0 : pairs.front().value;
      const double lb = lt.dot(y) / std::max(nu, 1.0);
      if (lb > best_lb) {
        best_lb = lb;
        best_x = x / std::max(nu, 1.0);
      }
      if (nu <= 1.0 + opts_.eps_feas || ub - best_lb <= opts_.eps * std::max(1.0, std::abs(ub))) {
        res.value = ExtendedReal::finite(best_lb);
        res.upper_bound = ub;
        res.iterations = it;
        res.certificate = element_of(best_x);
        return res;
      }
      for (const auto& p : pairs) {
        if (p.value <= 1.0 + opts_.eps_feas) break;
        add_cut(p);
      }
    }
    throw IterationLimitError(best_lb, ub);
  }

 private:
  struct Term {
    int row;
    int col;
    int j;
    Complex value;
  };

  void make_box_lp() {
    lp_ = std::make_unique<DenseSimplex>(reduced_, opts_.rule);
    for (int i = 0; i < reduced_; ++i) {
      RealVector row = RealVector::Zero(reduced_);
      row(i) = 1.0;
      lp_->add_constraint(row, 2.0 * shift_(i));
    }
  }

  // Fresh tableau from the box and the cuts currently in the LP, skipping
  // cuts nearly parallel to one already kept (they make the basis singular).
  // The box is solved by primal simplex from z = 0 and the cuts then return
  // together, repaired by dual simplex from an optimal basis.
  LpStatus rebuild(const RealVector& objective) {
    const std::vector<RealVector> rows(lp_->rows().begin() + reduced_, lp_->rows().end());
    const std::vector<double> rhs(lp_->rhs().begin() + reduced_, lp_->rhs().end());
    make_box_lp();
    lp_->set_objective(objective);
    LpStatus st = lp_->solve();
    std::vector<RealVector> kept;
    for (std::size_t i = 0; i < rows.size() && st == LpStatus::optimal; ++i) {
      RealVector dir(reduced_ + 1);
      dir << rows[i], rhs[i];
      dir.normalize();
      bool duplicate = false;
      for (const auto& k : kept) duplicate = duplicate || std::abs(k.dot(dir)) > 1.0 - 1e-10;
      if (duplicate) continue;
      kept.push_back(dir);
      lp_->add_constraint(rows[i], rhs[i]);
    }
    if (st == LpStatus::optimal) st = lp_->solve();
    return st;
  }

  void add_cut(const SingularPair& p) {
    RealVector hvec = RealVector::Zero(static_cast<Eigen::Index>(generators_.size()));
    for (const auto& t : terms_) hvec(t.j) += (std::conj(p.left(t.row)) * t.value * p.right(t.col)).real();
    const RealVector g = basis_.transpose() * hvec;
    const double rhs = 1.0 + g.dot(shift_);
    lp_->add_constraint(g, rhs);
    ++cuts_;
  }

  FiniteAlgebra alg_;
  DistanceOptions opts_;
  std::vector<AlgebraElement> generators_;
  Matrix coords_;  // algebra coordinates of each generator (columns)
  std::vector<Term> terms_;
  int hilbert_dim_ = 0;
  RealMatrix basis_;   // generator space → injective directions
  RealMatrix kernel_;  // directions with zero commutator
  RealVector shift_;
  int reduced_ = 0;
  int cuts_ = 0;
  bool first_solve_ = true;
  std::unique_ptr<DenseSimplex> lp_;
};

inline DistanceResult connes_distance(const FiniteSpectralTriple& t, const State& rho, const State& sigma,
                                      DistanceOptions opts = {}) {
  return ConnesMetric::full(t, opts).distance(rho, sigma);
}

/// Distance with the supremum restricted to span(S).
inline DistanceResult connes_distance_restricted(const FiniteSpectralTriple& t, const std::vector<AlgebraElement>& s,
                                                 const State& rho, const State& sigma, DistanceOptions opts = {}) {
  if (s.empty()) throw ShapeError("restricted distance: empty family");
  RealMatrix real(2 * t.algebra.dimension(), static_cast<Eigen::Index>(s.size()));
  for (std::size_t j = 0; j < s.size(); ++j) {
    const Vector c = t.algebra.coordinates(s[j]);
    real.col(static_cast<Eigen::Index>(j)) << c.real(), c.imag();
  }
  Eigen::JacobiSVD<RealMatrix> svd(real);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-8 * sv(0)) throw ShapeError("restricted distance: family is linearly dependent");
  return ConnesMetric(t.algebra, t.rep, t.dirac, s, opts).distance(rho, sigma);
}

/// Distance for the compressed Dirac operator P D P.
inline DistanceResult compressed_distance(const FiniteSpectralTriple& t, const SparseMatrix& p, const State& rho,
                                          const State& sigma, DistanceOptions opts = {}) {
  if (!is_projection(p)) throw PreconditionError("compressed distance: P is not an orthogonal projection");
  const SparseMatrix pdp = p * t.dirac * p;
  return ConnesMetric(t.algebra, t.rep, pdp, t.algebra.self_adjoint_basis(), opts).distance(rho, sigma);
}

struct GridSpec {
  double lo = -2.0;
  double hi = 2.0;
  double step = 0.01;
};

/// Exhaustive grid search over self-adjoint a with a_0 = 0 (constants lie in
/// the commutator kernel). Commutative algebras of dimension ≤ 4 only.
inline double brute_force_distance(const FiniteSpectralTriple& t, const State& rho, const State& sigma, GridSpec grid = {}) {
  const auto& alg = t.algebra;
  if (!alg.is_commutative() || alg.dimension() > 4) throw ShapeError("brute force: needs a commutative algebra of dimension <= 4");
  if (grid.step <= 0.0 || grid.hi < grid.lo) throw ShapeError("brute force: bad grid");
  const Vector w = state_functional(rho, alg) - state_functional(sigma, alg);
  const int free = alg.dimension() - 1;
  const long steps = static_cast<long>(std::floor((grid.hi - grid.lo) / grid.step + 1e-9)) + 1;
  long total = 1;
  for (int i = 0; i < free; ++i) total *= steps;
  double best = 0.0;
  Vector a = Vector::Zero(alg.dimension());
  for (long idx = 0; idx < total; ++idx) {
    long rest = idx;
    for (int i = 0; i < free; ++i) {
      a(i + 1) = grid.lo + static_cast<double>(rest % steps) * grid.step;
      rest /= steps;
    }
    const double obj = (w.transpose() * a)(0, 0).real();
    if (obj <= best) continue;
    if (operator_norm(commutator(t.dirac, t.represent_coordinates(a))) <= 1.0 + 1e-12) best = obj;
  }
  return best;
}

}  // namespace ncg
