#pragma once

// Morphisms (φ, u): T1 ← T2 with φ: A2 → A1 and u: H2 → H1, the subtriple
// conditions, and the compression machinery around P = u*u.

#include "ncg/derivations.hpp"
#include "ncg/distance.hpp"
#include "ncg/finite_examples.hpp"

#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ncg {

class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct SmoothMorphism {
  BlockHomomorphism phi;  // source.algebra → target.algebra
  SparseMatrix u;         // target.hilbert_dim × source.hilbert_dim
  std::shared_ptr<const FiniteSpectralTriple> source;  // T2
  std::shared_ptr<const FiniteSpectralTriple> target;  // T1

  SmoothMorphism() = default;
  SmoothMorphism(BlockHomomorphism p, SparseMatrix map, FiniteSpectralTriple t2, FiniteSpectralTriple t1)
      : phi(std::move(p)),
        u(std::move(map)),
        source(std::make_shared<const FiniteSpectralTriple>(std::move(t2))),
        target(std::make_shared<const FiniteSpectralTriple>(std::move(t1))) {}

  SparseMatrix projection() const { return SparseMatrix(SparseMatrix(u.adjoint()) * u); }

  void check_shapes() const {
    if (!source || !target) throw ShapeError("morphism: missing source or target triple");
    if (u.rows() != target->hilbert_dim || u.cols() != source->hilbert_dim) {
      throw ShapeError("morphism: u must be " + detail::shape_string(target->hilbert_dim, source->hilbert_dim) + ", got " +
                       detail::shape_string(u.rows(), u.cols()));
    }
    if (phi.source().block_dims() != source->algebra.block_dims() || phi.target().block_dims() != target->algebra.block_dims()) {
      throw ShapeError("morphism: phi does not map the source algebra onto the target algebra");
    }
  }
};

struct CheckResult {
  bool pass = false;
  double residual = 0.0;
  int worst_basis = -1;  // algebra basis index (source algebra) attaining the residual
  std::string note;
};

/// u π₂(e_k) − π₁(φ(e_k)) u for every matrix unit e_k of A2.
inline CheckResult check_smooth_morphism(const SmoothMorphism& m, double tau = 1e-9) {
  m.check_shapes();
  const auto& t2 = *m.source;
  const auto& t1 = *m.target;
  CheckResult r;
  for (int k = 0; k < t2.algebra.dimension(); ++k) {
    const AlgebraElement e = t2.algebra.basis_element(k);
    const SparseMatrix lhs = m.u * t2.rep.image(k);
    const SparseMatrix rhs = t1.represent(m.phi.apply(e)) * m.u;
    const double res = operator_norm(SparseMatrix(lhs - rhs));
    if (res > r.residual) {
      r.residual = res;
      r.worst_basis = k;
    }
  }
  r.pass = r.residual <= tau;
  r.note = "finite dimension: smoothness reduces to the intertwining condition";
  if (max_abs(m.u) == 0.0) r.note += "; u = 0 intertwines trivially (degenerate)";
  if (!r.pass) {
    const auto idx = t2.algebra.basis_index(r.worst_basis);
    r.note = "intertwining fails at basis element " + std::to_string(r.worst_basis) + " (block " + std::to_string(idx.block) +
             ", entry " + std::to_string(idx.row) + "," + std::to_string(idx.col) + ")";
  }
  return r;
}

struct EmbeddingResult {
  bool pass = false;
  bool surjective = false;
  SubmanifoldReport submanifold;
};

inline EmbeddingResult check_embedding(const SmoothMorphism& m) {
  m.check_shapes();
  EmbeddingResult r;
  const Matrix lin = m.phi.linear_map();
  r.surjective = detail::numerical_rank(lin) == m.phi.target().dimension() && m.phi.is_surjective();
  if (!r.surjective) return r;
  r.submanifold = is_submanifold_algebra(m.phi);
  r.pass = r.submanifold.is_submanifold;
  return r;
}

/// u[D₂, π₂(e_k)] − [D₁, π₁(φ(e_k))]u over the matrix units of A2.
inline CheckResult check_riemannian(const SmoothMorphism& m, double tau = 1e-9) {
  m.check_shapes();
  const auto& t2 = *m.source;
  const auto& t1 = *m.target;
  CheckResult r;
  for (int k = 0; k < t2.algebra.dimension(); ++k) {
    const SparseMatrix lhs = m.u * commutator(t2.dirac, t2.rep.image(k));
    const SparseMatrix rhs = t1.dirac_commutator(m.phi.apply(t2.algebra.basis_element(k))) * m.u;
    const double res = operator_norm(SparseMatrix(lhs - rhs));
    if (res > r.residual) {
      r.residual = res;
      r.worst_basis = k;
    }
  }
  r.pass = r.residual <= tau;
  return r;
}

/// ‖u D₂ − D₁ u‖.
inline CheckResult check_totally_geodesic(const SmoothMorphism& m, double tau = 1e-9) {
  m.check_shapes();
  CheckResult r;
  r.residual = operator_norm(SparseMatrix(m.u * m.source->dirac - m.target->dirac * m.u));
  r.pass = r.residual <= tau;
  return r;
}

/// max_k ‖[π₂(e_k), P]‖.
inline CheckResult check_p_commutes_algebra(const SmoothMorphism& m, double tau = 1e-9) {
  m.check_shapes();
  const SparseMatrix p = m.projection();
  CheckResult r;
  for (int k = 0; k < m.source->algebra.dimension(); ++k) {
    const double res = operator_norm(commutator(m.source->rep.image(k), p));
    if (res > r.residual) {
      r.residual = res;
      r.worst_basis = k;
    }
  }
  r.pass = r.residual <= tau;
  return r;
}

// ---------------------------------------------------------------------------
// Distances over state sets

struct StatePairResult {
  int i = 0;
  int j = 0;
  ExtendedReal lhs;  // distance on the source side (pulled-back states)
  ExtendedReal rhs;  // distance on the target triple
  double gap = 0.0;  // |lhs − rhs| / max(1, |rhs|), 0 when both are infinite
};

struct MetricCheck {
  bool pass = false;
  std::vector<StatePairResult> pairs;
  int worst = -1;  // index into pairs
  std::string state_set;
  std::string note;
};

namespace detail {

inline double extended_gap(const ExtendedReal& a, const ExtendedReal& b) {
  if (a.infinite || b.infinite) return (a.infinite && b.infinite) ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(a.value - b.value) / std::max(1.0, std::abs(b.value));
}

inline std::string describe_states(const std::vector<State>& states) {
  std::ostringstream os;
  os << states.size() << " states: ";
  for (std::size_t i = 0; i < states.size(); ++i) os << (i ? ", " : "") << states[i].describe();
  return os.str();
}

// Distance table of T1 over all unordered pairs of the state set, in the
// order (0,1), (0,2), ..., (1,2), ...
inline std::vector<ExtendedReal> pair_distances(ConnesMetric& metric, const std::vector<State>& states) {
  std::vector<ExtendedReal> out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) out.push_back(metric.distance(states[i], states[j]).value);
  }
  return out;
}

inline MetricCheck compare_tables(const std::vector<State>& states, const std::vector<ExtendedReal>& lhs,
                                  const std::vector<ExtendedReal>& rhs, double eps) {
  MetricCheck c;
  c.pass = true;
  c.state_set = describe_states(states);
  std::size_t idx = 0;
  double worst = -1.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j, ++idx) {
      StatePairResult p{static_cast<int>(i), static_cast<int>(j), lhs[idx], rhs[idx], extended_gap(lhs[idx], rhs[idx])};
      if (p.gap > eps) c.pass = false;
      if (p.gap > worst) {
        worst = p.gap;
        c.worst = static_cast<int>(c.pairs.size());
      }
      c.pairs.push_back(p);
    }
  }
  return c;
}

inline std::vector<State> pulled_back(const SmoothMorphism& m, const std::vector<State>& states) {
  std::vector<State> out;
  for (const auto& s : states) out.push_back(pullback_state(m.phi, s).state);
  return out;
}

}  // namespace detail

/// d_{D₂}(φ*ρ, φ*σ) = d_{D₁}(ρ, σ) over the state set (states on A1).
inline MetricCheck check_connes_isometric(const SmoothMorphism& m, const std::vector<State>& states, double eps = 1e-4,
                                          DistanceOptions opts = {}) {
  m.check_shapes();
  ConnesMetric d1 = ConnesMetric::full(*m.target, opts);
  ConnesMetric d2 = ConnesMetric::full(*m.source, opts);
  const auto rhs = detail::pair_distances(d1, states);
  const auto lhs = detail::pair_distances(d2, detail::pulled_back(m, states));
  return detail::compare_tables(states, lhs, rhs, eps);
}

/// d_{PD₂P}(φ*ρ, φ*σ) = d_{D₁}(ρ, σ); needs u partial isometry with uu* = Id.
inline MetricCheck check_isometric(const SmoothMorphism& m, const std::vector<State>& states, double eps = 1e-4,
                                   DistanceOptions opts = {}) {
  m.check_shapes();
  const auto pi = is_partial_isometry(m.u);
  if (!pi.is_partial_isometry) {
    throw PreconditionError("check_isometric: u is not a partial isometry (residual " + std::to_string(pi.residual) + ")");
  }
  if (!pi.is_coisometry) {
    throw PreconditionError("check_isometric: u u* != Id (residual " + std::to_string(pi.coisometry_residual) + ")");
  }
  const SparseMatrix p = m.projection();
  const SparseMatrix pdp = p * m.source->dirac * p;
  ConnesMetric d1 = ConnesMetric::full(*m.target, opts);
  ConnesMetric d2(m.source->algebra, m.source->rep, pdp, m.source->algebra.self_adjoint_basis(), opts);
  const auto rhs = detail::pair_distances(d1, states);
  const auto lhs = detail::pair_distances(d2, detail::pulled_back(m, states));
  return detail::compare_tables(states, lhs, rhs, eps);
}

// ---------------------------------------------------------------------------
// Dirac decomposition and norm restriction

struct DiracSplit {
  SparseMatrix compressed;  // P D P
  SparseMatrix normal;      // (1 − P) D (1 − P)
  double commutator_norm = 0.0;
  double split_residual = 0.0;
};

inline DiracSplit dirac_decompose(const FiniteSpectralTriple& t2, const SparseMatrix& p, double tau = 1e-9) {
  if (p.rows() != t2.hilbert_dim || p.cols() != t2.hilbert_dim) throw ShapeError("dirac_decompose: P has wrong size");
  if (!is_projection(p, tau)) throw PreconditionError("dirac_decompose: P is not an orthogonal projection");
  DiracSplit s;
  s.commutator_norm = operator_norm(commutator(t2.dirac, p));
  if (s.commutator_norm > tau) {
    throw PreconditionError("dirac_decompose: [D, P] != 0 (norm " + std::to_string(s.commutator_norm) + ")");
  }
  const SparseMatrix q = SparseMatrix(sparse_identity(p.rows()) - p);
  s.compressed = p * t2.dirac * p;
  s.normal = q * t2.dirac * q;
  s.split_residual = operator_norm(SparseMatrix(t2.dirac - s.compressed - s.normal));
  if (s.split_residual > tau) throw PreconditionError("dirac_decompose: D != PDP + (1-P)D(1-P)");
  return s;
}

struct NormRestrictionRow {
  int basis = 0;
  double restricted = 0.0;  // ‖[D, π(b)]‖ on the range of P
  double compressed = 0.0;  // ‖[PDP, π(b)]‖
};

struct NormRestrictionReport {
  bool pass = false;
  double max_gap = 0.0;
  std::vector<NormRestrictionRow> rows;
};

/// ‖[D₂, π₂(b)]‖_{PH} = ‖[PD₂P, π₂(b)]‖ for every given self-adjoint b.
inline NormRestrictionReport check_norm_restriction(const FiniteSpectralTriple& t2, const SparseMatrix& p,
                                                    const std::vector<AlgebraElement>& basis, double tau = 1e-9) {
  if (!is_projection(p)) throw PreconditionError("norm restriction: P is not an orthogonal projection");
  const double dp = operator_norm(commutator(t2.dirac, p));
  if (dp > tau) throw PreconditionError("norm restriction: [D, P] != 0 (norm " + std::to_string(dp) + ")");
  const SparseMatrix pdp = p * t2.dirac * p;
  NormRestrictionReport r;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const SparseMatrix pib = t2.represent(basis[k]);
    const double bp = operator_norm(commutator(pib, p));
    if (bp > tau) throw PreconditionError("norm restriction: [pi(b), P] != 0 for basis " + std::to_string(k));
    NormRestrictionRow row;
    row.basis = static_cast<int>(k);
    row.restricted = operator_norm(SparseMatrix(commutator(t2.dirac, pib) * p));
    row.compressed = operator_norm(commutator(pdp, pib));
    r.max_gap = std::max(r.max_gap, std::abs(row.restricted - row.compressed));
    r.rows.push_back(row);
  }
  r.pass = r.max_gap <= tau;
  return r;
}

/// max_b |‖[PD₂P, π₂(b)]‖ − ‖[D₁, π₁(φ(b))]‖| over the self-adjoint basis of A2.
inline double norm_equality_gap(const SmoothMorphism& m) {
  const SparseMatrix p = m.projection();
  const SparseMatrix pdp = p * m.source->dirac * p;
  double gap = 0.0;
  for (const auto& b : m.source->algebra.self_adjoint_basis()) {
    const double lhs = operator_norm(commutator(pdp, m.source->represent(b)));
    const double rhs = operator_norm(m.target->dirac_commutator(m.phi.apply(b)));
    gap = std::max(gap, std::abs(lhs - rhs));
  }
  return gap;
}

// ---------------------------------------------------------------------------
// Clifford-level conditional expectation

struct CliffordExpectationReport {
  bool pass = false;
  double multiplicative_residual = 0.0;  // ‖u(ST)u* − (uSu*)(uTu*)‖ over basis pairs of Cl₂
  double star_residual = 0.0;
  double idempotence_residual = 0.0;     // ‖E(E(T)) − E(T)‖
  double unit_residual = 0.0;            // ‖E(1) − P‖
  int rank_pulled_back = 0;              // dim span(u* Cl₁ u)
  int rank_compressed = 0;               // dim span(P Cl₂ P)
  int rank_joint = 0;                    // dim of the sum of both spans
  std::string note;
};

namespace detail {

inline int span_rank(const std::vector<Matrix>& ops, double drop) {
  std::vector<Matrix> basis;
  for (const auto& m : ops) hs_extend(basis, m, drop);
  return static_cast<int>(basis.size());
}

}  // namespace detail

/// T ↦ uTu* on Cl(T2), E(T) = PTP, and span(u* Cl₁ u) = span(P Cl₂ P).
/// Needs uu* = Id and the Riemannian condition.
inline CliffordExpectationReport clifford_expectation_check(const SmoothMorphism& m, double tau = 1e-9) {
  m.check_shapes();
  const auto pi = is_partial_isometry(m.u, tau);
  if (!pi.is_coisometry) throw PreconditionError("clifford expectation: u u* != Id");
  if (!check_riemannian(m, tau).pass) throw PreconditionError("clifford expectation: morphism is not Riemannian");

  const Matrix u = to_dense(m.u);
  const Matrix ustar = u.adjoint();
  const Matrix p = ustar * u;
  const CliffordAlgebra cl2 = clifford_algebra(*m.source);
  const CliffordAlgebra cl1 = clifford_algebra(*m.target);

  CliffordExpectationReport r;
  std::vector<Matrix> images;
  for (const auto& s : cl2.basis) images.push_back(u * s * ustar);
  for (std::size_t i = 0; i < cl2.basis.size(); ++i) {
    r.star_residual = std::max(r.star_residual, operator_norm(Matrix(u * cl2.basis[i].adjoint() * ustar - images[i].adjoint())));
    for (std::size_t j = 0; j < cl2.basis.size(); ++j) {
      const Matrix lhs = u * cl2.basis[i] * cl2.basis[j] * ustar;
      r.multiplicative_residual = std::max(r.multiplicative_residual, operator_norm(Matrix(lhs - images[i] * images[j])));
    }
  }
  std::vector<Matrix> compressed, pulled;
  for (const auto& s : cl2.basis) {
    const Matrix e = p * s * p;
    r.idempotence_residual = std::max(r.idempotence_residual, operator_norm(Matrix(p * e * p - e)));
    compressed.push_back(e);
  }
  r.unit_residual = operator_norm(Matrix(p * Matrix::Identity(p.rows(), p.cols()) * p - p));
  for (const auto& s : cl1.basis) pulled.push_back(ustar * s * u);
  const double drop = 1e-9;
  r.rank_compressed = detail::span_rank(compressed, drop);
  r.rank_pulled_back = detail::span_rank(pulled, drop);
  std::vector<Matrix> joint = compressed;
  joint.insert(joint.end(), pulled.begin(), pulled.end());
  r.rank_joint = detail::span_rank(joint, drop);
  r.note = "span identity checked as u* Cl1 u = P Cl2 P inside B(H2)";
  r.pass = r.multiplicative_residual <= tau && r.star_residual <= tau && r.idempotence_residual <= tau &&
           r.unit_residual <= tau && r.rank_compressed == r.rank_pulled_back && r.rank_joint == r.rank_compressed;
  return r;
}

/// ‖u* D₁ u − P D₂ P‖: unitary equivalence of the compressed triple.
inline double compressed_equivalence_residual(const SmoothMorphism& m) {
  const SparseMatrix ustar = m.u.adjoint();
  const SparseMatrix p = m.projection();
  return operator_norm(SparseMatrix(ustar * m.target->dirac * m.u - p * m.source->dirac * p));
}

// ---------------------------------------------------------------------------
// Classification

struct ClassifyOptions {
  double tau = 1e-9;
  double eps = 1e-4;
  DistanceOptions distance;
  bool metric_checks = true;  // skip the distance tables when false
};

struct ClassificationReport {
  bool smooth_morphism = false;
  bool embedding = false;
  bool connes_isometric = false;
  bool riemannian = false;
  bool totally_geodesic = false;
  bool isometric = false;
  bool coisometry = false;
  bool p_commutes_dirac = false;
  double smooth_residual = 0.0;
  double riemannian_residual = 0.0;
  double totally_geodesic_residual = 0.0;
  double connes_gap = 0.0;
  double isometric_gap = 0.0;
  double dirac_p_commutator = 0.0;
  double norm_equality_gap = 0.0;
  std::string state_set;
  std::vector<std::string> notes;
};

inline ClassificationReport classify(const SmoothMorphism& m, const std::vector<State>& states, const ClassifyOptions& o = {}) {
  m.check_shapes();
  ClassificationReport r;
  r.state_set = detail::describe_states(states);

  const CheckResult smooth = check_smooth_morphism(m, o.tau);
  r.smooth_morphism = smooth.pass;
  r.smooth_residual = smooth.residual;
  r.notes.push_back(smooth.note);

  const EmbeddingResult emb = check_embedding(m);
  r.embedding = smooth.pass && emb.pass;
  if (!emb.surjective) r.notes.push_back("phi is not surjective");

  const CheckResult riem = check_riemannian(m, o.tau);
  r.riemannian = riem.pass;
  r.riemannian_residual = riem.residual;
  const CheckResult tg = check_totally_geodesic(m, o.tau);
  r.totally_geodesic = tg.pass;
  r.totally_geodesic_residual = tg.residual;

  const auto pi = is_partial_isometry(m.u, o.tau);
  r.coisometry = pi.is_coisometry;
  const SparseMatrix p = m.projection();
  r.dirac_p_commutator = operator_norm(commutator(m.source->dirac, p));
  r.p_commutes_dirac = r.dirac_p_commutator <= o.tau;
  r.norm_equality_gap = norm_equality_gap(m);

  if (o.metric_checks && emb.surjective) {
    ConnesMetric d1 = ConnesMetric::full(*m.target, o.distance);
    const auto base = detail::pair_distances(d1, states);
    const auto pulled = detail::pulled_back(m, states);
    {
      ConnesMetric d2 = ConnesMetric::full(*m.source, o.distance);
      const MetricCheck c = detail::compare_tables(states, detail::pair_distances(d2, pulled), base, o.eps);
      r.connes_isometric = c.pass;
      r.connes_gap = c.worst >= 0 ? c.pairs[static_cast<std::size_t>(c.worst)].gap : 0.0;
    }
    if (pi.is_coisometry) {
      const SparseMatrix pdp = p * m.source->dirac * p;
      ConnesMetric d2(m.source->algebra, m.source->rep, pdp, m.source->algebra.self_adjoint_basis(), o.distance);
      const MetricCheck c = detail::compare_tables(states, detail::pair_distances(d2, pulled), base, o.eps);
      r.isometric = c.pass;
      r.isometric_gap = c.worst >= 0 ? c.pairs[static_cast<std::size_t>(c.worst)].gap : 0.0;
    } else {
      r.notes.push_back("isometric: u is not a co-isometric partial isometry, condition not applicable");
    }
  } else if (!o.metric_checks) {
    r.notes.push_back("metric checks skipped");
  }

  // Implications that must hold whatever the tolerances.
  if (r.smooth_morphism && r.totally_geodesic && !r.riemannian) {
    throw InconsistencyError("classify: totally geodesic but not Riemannian (tolerance misconfiguration)");
  }
  if (o.metric_checks && emb.surjective) {
    if (r.smooth_morphism && r.totally_geodesic && r.coisometry && !r.isometric) {
      throw InconsistencyError("classify: totally geodesic with uu* = Id but not isometric");
    }
    if (r.smooth_morphism && r.riemannian && r.coisometry && r.p_commutes_dirac && r.norm_equality_gap <= o.tau &&
        !r.isometric) {
      throw InconsistencyError("classify: Riemannian with [D2,P] = 0 and norm equality but not isometric");
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Standard morphisms

/// F_N → F_{N−1}: φ drops a_N, u keeps the F_{N−1} summands (the first
/// (N−1)(N−2) coordinates). The x values of F_{N−1} are the leading ones.
inline SmoothMorphism npoint_morphism(int n, const std::vector<Complex>& offdiag) {
  if (n < 3) throw ShapeError("npoint_morphism: N must be >= 3");
  FiniteSpectralTriple tn = build_npoint(n, offdiag);
  const std::vector<Complex> head(offdiag.begin(), offdiag.begin() + (n - 1) * (n - 2) / 2);
  FiniteSpectralTriple tm = build_npoint(n - 1, head);
  const int rows = tm.hilbert_dim;
  SparseMatrix u(rows, tn.hilbert_dim);
  std::vector<Triplet> e;
  for (int i = 0; i < rows; ++i) e.emplace_back(i, i, 1.0);
  u.setFromTriplets(e.begin(), e.end());
  BlockHomomorphism phi = BlockHomomorphism::drop_last(tn.algebra);
  return SmoothMorphism(std::move(phi), std::move(u), std::move(tn), std::move(tm));
}

inline SmoothMorphism identity_morphism(const FiniteSpectralTriple& t) {
  return SmoothMorphism(BlockHomomorphism::identity(t.algebra), sparse_identity(t.hilbert_dim), t, t);
}

/// v = [1₂ | 0], the 2×4 coordinate projection onto the first two F_ED slots.
inline SparseMatrix f_ed_v() {
  SparseMatrix v(2, 4);
  v.insert(0, 0) = 1.0;
  v.insert(1, 1) = 1.0;
  return v;
}

/// T_even × F_ED → T_even × (ℂ, ℂ², 0): φ(f₁, f₂) = f₁, u = Id ⊗ v.
/// T_even must be commutative and graded.
inline SmoothMorphism almost_commutative_morphism(const FiniteSpectralTriple& even, Complex d) {
  if (!even.algebra.is_commutative()) throw ShapeError("almost_commutative_morphism: even factor must be commutative");
  FiniteSpectralTriple t2 = product_triple(even, build_f_ed(d));
  FiniteSpectralTriple t1 = product_triple(even, build_trivial(2));
  std::vector<Route> routes;
  for (int i = 0; i < t1.algebra.num_blocks(); ++i) routes.push_back({i, 2 * i, std::nullopt});
  BlockHomomorphism phi(t2.algebra, t1.algebra, std::move(routes));
  SparseMatrix u = tensor(sparse_identity(even.hilbert_dim), f_ed_v());
  return SmoothMorphism(std::move(phi), std::move(u), std::move(t2), std::move(t1));
}

/// Finite part alone: F_ED → (ℂ, ℂ², 0) with u = v.
inline SmoothMorphism f_ed_morphism(Complex d) {
  FiniteSpectralTriple t2 = build_f_ed(d);
  FiniteSpectralTriple t1 = build_trivial(2);
  BlockHomomorphism phi(t2.algebra, t1.algebra, {{0, 0, std::nullopt}});
  return SmoothMorphism(std::move(phi), f_ed_v(), std::move(t2), std::move(t1));
}

}  // namespace ncg
