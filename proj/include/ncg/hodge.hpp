#pragma once

// Discrete Hodge–de Rham triples on periodic grids.
//
// Forms live on cells (vertices, edges, faces) with metric-weighted inner
// products; d is the lowest-order difference operator. Everything is written
// in the orthonormal frame d̃ = W_{k+1}^{1/2} d W_k^{-1/2}, so D = d̃ + d̃* is
// Hermitian exactly. Functions act on a k-cell through its base vertex
// (edge tail, lower-left face corner).

#include "ncg/finite_examples.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncg {

class RefinementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CircleGrid {
  int n = 0;
  std::vector<double> metric;  // g(θ_i) per vertex; empty means g = 1

  double spacing() const { return 2.0 * std::numbers::pi / n; }
  double g(int i) const { return metric.empty() ? 1.0 : metric[static_cast<std::size_t>(i)]; }

  static CircleGrid flat(int n) { return {n, {}}; }
  static CircleGrid with_metric(int n, const std::function<double(double)>& g) {
    CircleGrid c{n, {}};
    for (int i = 0; i < n; ++i) c.metric.push_back(g(i * c.spacing()));
    return c;
  }
};

enum class TorusMetric { embedded, flat };

inline std::string to_string(TorusMetric m) { return m == TorusMetric::flat ? "flat" : "embedded"; }

struct TorusGrid {
  int ntheta = 0;
  int nphi = 0;
  double c = 3.0;
  TorusMetric metric = TorusMetric::embedded;

  double htheta() const { return 2.0 * std::numbers::pi / ntheta; }
  double hphi() const { return 2.0 * std::numbers::pi / nphi; }
  /// √det g; g_φφ = (c − sin θ)² on the embedded torus, 1 on the flat one.
  double volume(double theta) const { return metric == TorusMetric::flat ? 1.0 : c - std::sin(theta); }
  int vertex(int i, int j) const { return ((i % ntheta + ntheta) % ntheta) * nphi + (j % nphi + nphi) % nphi; }
};

struct DiscreteHodgeTriple {
  enum class Kind { circle, torus, disjoint_union };
  Kind kind = Kind::circle;
  FiniteSpectralTriple triple;
  std::vector<int> degree_dims;  // sizes of the form-degree summands, in Hilbert order
  SparseMatrix d0;               // orthonormal frame
  SparseMatrix d1;
  SparseMatrix d0_raw;           // plain differences, before weighting
  SparseMatrix d1_raw;
  CircleGrid circle;
  TorusGrid torus;
  std::vector<int> component_vertices;  // disjoint unions: vertex count per component
  std::vector<int> component_hilbert;

  int vertices() const { return triple.algebra.dimension(); }
  double commutator_norm(const RealVector& f) const { return operator_norm(triple.dirac_commutator(function_element(f))); }
};

namespace detail {

inline SparseMatrix from_triplets(Eigen::Index rows, Eigen::Index cols, const std::vector<Triplet>& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

inline SparseMatrix weighted(const SparseMatrix& raw, const RealVector& w_to, const RealVector& w_from) {
  Vector left = w_to.cwiseSqrt().cast<Complex>();
  Vector right = w_from.cwiseSqrt().cwiseInverse().cast<Complex>();
  return SparseMatrix(sparse_diagonal(left) * raw * sparse_diagonal(right));
}

// D = d̃ + d̃* on the graded sum of form degrees, from the blocks d̃_k.
inline SparseMatrix hodge_dirac(const std::vector<int>& dims, const std::vector<const SparseMatrix*>& ds) {
  std::vector<int> offsets{0};
  for (int d : dims) offsets.push_back(offsets.back() + d);
  std::vector<Triplet> t;
  for (std::size_t k = 0; k < ds.size(); ++k) {
    const SparseMatrix& d = *ds[k];
    for (Eigen::Index o = 0; o < d.outerSize(); ++o) {
      for (SparseMatrix::InnerIterator it(d, o); it; ++it) {
        const Eigen::Index r = offsets[k + 1] + it.row();
        const Eigen::Index c = offsets[k] + it.col();
        t.emplace_back(r, c, it.value());
        t.emplace_back(c, r, std::conj(it.value()));
      }
    }
  }
  return from_triplets(offsets.back(), offsets.back(), t);
}

inline SparseMatrix degree_grading(const std::vector<int>& dims) {
  int total = 0;
  for (int d : dims) total += d;
  Vector g(total);
  int pos = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    for (int i = 0; i < dims[k]; ++i) g(pos++) = (k % 2 == 0) ? 1.0 : -1.0;
  }
  return sparse_diagonal(g);
}

// Functions on vertices acting on every cell through its base vertex.
inline Representation cell_representation(int vertices, const std::vector<std::vector<int>>& base_vertex) {
  std::vector<std::vector<RepEntry>> images(static_cast<std::size_t>(vertices));
  int pos = 0;
  for (const auto& deg : base_vertex) {
    for (int v : deg) {
      images[static_cast<std::size_t>(v)].push_back({pos, pos, 1.0});
      ++pos;
    }
  }
  Representation rep(pos);
  for (auto& img : images) rep.push_back(std::move(img));
  return rep;
}

}  // namespace detail

/// Circle: 0-forms on n vertices, 1-forms on the n edges i → i+1.
inline DiscreteHodgeTriple build_circle(const CircleGrid& grid) {
  if (grid.n < 3) throw ShapeError("circle grid needs n >= 3");
  if (!grid.metric.empty() && static_cast<int>(grid.metric.size()) != grid.n) throw ShapeError("circle metric has wrong length");
  for (int i = 0; i < grid.n; ++i) {
    if (!(grid.g(i) > 0.0)) throw ShapeError("circle metric must be positive");
  }
  const int n = grid.n;
  const double h = grid.spacing();
  std::vector<Triplet> t;
  RealVector w0(n), w1(n);
  for (int e = 0; e < n; ++e) {
    t.emplace_back(e, (e + 1) % n, 1.0 / h);
    t.emplace_back(e, e, -1.0 / h);
    w0(e) = std::sqrt(grid.g(e)) * h;
    const double ge = 0.5 * (grid.g(e) + grid.g((e + 1) % n));
    w1(e) = h / std::sqrt(ge);
  }
  DiscreteHodgeTriple out;
  out.kind = DiscreteHodgeTriple::Kind::circle;
  out.circle = grid;
  out.degree_dims = {n, n};
  out.d0_raw = detail::from_triplets(n, n, t);
  out.d0 = detail::weighted(out.d0_raw, w1, w0);
  std::vector<int> verts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) verts[static_cast<std::size_t>(i)] = i;
  out.triple = FiniteSpectralTriple(FiniteAlgebra::commutative(n), 2 * n, detail::cell_representation(n, {verts, verts}),
                                    detail::hodge_dirac(out.degree_dims, {&out.d0}),
                                    detail::degree_grading(out.degree_dims));
  return out;
}

/// Torus [0-forms | θ-edges | φ-edges | faces]; vertex (i, j) ↦ i·nφ + j.
inline DiscreteHodgeTriple build_torus(const TorusGrid& grid) {
  if (grid.ntheta < 3 || grid.nphi < 3) throw ShapeError("torus grid needs at least 3 cells per direction");
  if (grid.metric == TorusMetric::embedded && !(grid.c > 1.0)) throw ShapeError("torus needs c > 1");
  const int nt = grid.ntheta, np = grid.nphi, v = nt * np;
  const double ht = grid.htheta(), hp = grid.hphi(), area = ht * hp;
  std::vector<Triplet> t0, t1;
  RealVector w0(v), wt(v), wp(v), wf(v);
  for (int i = 0; i < nt; ++i) {
    const double th = i * ht, mid = th + 0.5 * ht;
    for (int j = 0; j < np; ++j) {
      const int k = grid.vertex(i, j);
      // θ-edge k: (i, j) → (i+1, j); φ-edge k: (i, j) → (i, j+1)
      t0.emplace_back(k, grid.vertex(i + 1, j), 1.0 / ht);
      t0.emplace_back(k, k, -1.0 / ht);
      t0.emplace_back(v + k, grid.vertex(i, j + 1), 1.0 / hp);
      t0.emplace_back(v + k, k, -1.0 / hp);
      // face k: ∂_θ α_φ − ∂_φ α_θ
      t1.emplace_back(k, v + grid.vertex(i + 1, j), 1.0 / ht);
      t1.emplace_back(k, v + k, -1.0 / ht);
      t1.emplace_back(k, grid.vertex(i, j + 1), -1.0 / hp);
      t1.emplace_back(k, k, 1.0 / hp);
      w0(k) = grid.volume(th) * area;
      wt(k) = grid.volume(mid) * area;
      wp(k) = area / grid.volume(th);
      wf(k) = area / grid.volume(mid);
    }
  }
  RealVector w1(2 * v);
  w1 << wt, wp;
  DiscreteHodgeTriple out;
  out.kind = DiscreteHodgeTriple::Kind::torus;
  out.torus = grid;
  out.degree_dims = {v, v, v, v};
  out.d0_raw = detail::from_triplets(2 * v, v, t0);
  out.d1_raw = detail::from_triplets(v, 2 * v, t1);
  out.d0 = detail::weighted(out.d0_raw, w1, w0);
  out.d1 = detail::weighted(out.d1_raw, wf, w1);
  std::vector<int> verts(static_cast<std::size_t>(v));
  for (int k = 0; k < v; ++k) verts[static_cast<std::size_t>(k)] = k;
  const SparseMatrix d1_embedded = [&] {
    // d̃1 as a map from the full 1-form block: columns already span θ- and φ-edges.
    return out.d1;
  }();
  // Degrees as three summands for D: Ω0 → Ω1 → Ω2, with Ω1 = θ ⊕ φ edges.
  const SparseMatrix dirac = detail::hodge_dirac({v, 2 * v, v}, {&out.d0, &d1_embedded});
  Vector grading(4 * v);
  grading << Vector::Ones(v), -Vector::Ones(2 * v), Vector::Ones(v);
  out.triple = FiniteSpectralTriple(FiniteAlgebra::commutative(v), 4 * v,
                                    detail::cell_representation(v, {verts, verts, verts, verts}), dirac,
                                    sparse_diagonal(grading));
  return out;
}

/// Samples f(θ_i) on a circle grid.
inline RealVector circle_function(const CircleGrid& g, const std::function<double(double)>& f) {
  RealVector v(g.n);
  for (int i = 0; i < g.n; ++i) v(i) = f(i * g.spacing());
  return v;
}

/// Samples f(θ_i, φ_j) on a torus grid.
inline RealVector torus_function(const TorusGrid& g, const std::function<double(double, double)>& f) {
  RealVector v(g.ntheta * g.nphi);
  for (int i = 0; i < g.ntheta; ++i) {
    for (int j = 0; j < g.nphi; ++j) v(g.vertex(i, j)) = f(i * g.htheta(), j * g.hphi());
  }
  return v;
}

/// f*(h) for f(θ) = (θ, 0): the φ = 0 slice.
inline RealVector pullback_function(const TorusGrid& torus, const CircleGrid& circle, const RealVector& h) {
  if (torus.ntheta != circle.n) throw ShapeError("pullback: circle and torus grids do not match");
  if (h.size() != torus.ntheta * torus.nphi) throw ShapeError("pullback: function has wrong length");
  RealVector out(circle.n);
  for (int i = 0; i < circle.n; ++i) out(i) = h(torus.vertex(i, 0));
  return out;
}

/// F*(k) for the retraction F(θ, φ) = θ: constant extension along φ.
inline RealVector retraction_pullback(const TorusGrid& torus, const CircleGrid& circle, const RealVector& k) {
  if (torus.ntheta != circle.n) throw ShapeError("retraction: circle and torus grids do not match");
  if (k.size() != circle.n) throw ShapeError("retraction: function has wrong length");
  RealVector out(torus.ntheta * torus.nphi);
  for (int i = 0; i < torus.ntheta; ++i) {
    for (int j = 0; j < torus.nphi; ++j) out(torus.vertex(i, j)) = k(i);
  }
  return out;
}

struct NormEqualityReport {
  double norm_n = 0.0;  // ‖[D_N, f*h]‖
  double norm_m = 0.0;  // ‖[D_M, F*f*h]‖
  double rel_gap = 0.0;
  bool pass = false;
};

/// Compares ‖[D_N, f*(h)]‖ on the circle with ‖[D_M, F*(f*(h))]‖ on the torus.
inline NormEqualityReport verify_commutator_norm_equality(const DiscreteHodgeTriple& circle, const DiscreteHodgeTriple& torus,
                                                          const RealVector& h, double tau_rel) {
  NormEqualityReport r;
  const RealVector k = pullback_function(torus.torus, circle.circle, h);
  r.norm_n = circle.commutator_norm(k);
  r.norm_m = torus.commutator_norm(retraction_pullback(torus.torus, circle.circle, k));
  const double scale = std::max(r.norm_n, r.norm_m);
  r.rel_gap = scale == 0.0 ? 0.0 : std::abs(r.norm_n - r.norm_m) / scale;
  r.pass = r.rel_gap <= tau_rel;
  return r;
}

struct GradientLiftReport {
  double vertical_residual = 0.0;         // max |φ-component of grad F*k|
  double horizontal_vs_circle = 0.0;      // max |θ-component − circle gradient|
  double horizontal_vs_analytic = 0.0;    // max |θ-component − k'(edge midpoint)|, if k' given
  double tolerance = 0.0;
  bool pass = false;
};

/// grad_M(F*k) = g^{-1} d(F*k): its φ-part must vanish and its θ-part
/// (g^{θθ} = 1) must push forward to grad_N k.
inline GradientLiftReport verify_gradient_lift(const DiscreteHodgeTriple& torus, const DiscreteHodgeTriple& circle,
                                               const RealVector& k, double tau,
                                               const std::function<double(double)>& derivative = nullptr) {
  GradientLiftReport r;
  r.tolerance = tau;
  const auto& tg = torus.torus;
  const int v = tg.ntheta * tg.nphi;
  const RealVector lifted = retraction_pullback(tg, circle.circle, k);
  const Vector grad = torus.d0_raw * lifted.cast<Complex>();
  const Vector grad_n = circle.d0_raw * k.cast<Complex>();
  for (int i = 0; i < tg.ntheta; ++i) {
    for (int j = 0; j < tg.nphi; ++j) {
      const int e = tg.vertex(i, j);
      r.vertical_residual = std::max(r.vertical_residual, std::abs(grad(v + e)));
      r.horizontal_vs_circle = std::max(r.horizontal_vs_circle, std::abs(grad(e) - grad_n(i)));
      if (derivative) {
        const double mid = (i + 0.5) * tg.htheta();
        r.horizontal_vs_analytic = std::max(r.horizontal_vs_analytic, std::abs(grad(e).real() - derivative(mid)));
      }
    }
  }
  r.pass = r.vertical_residual <= 1e-10 && r.horizontal_vs_circle <= tau && r.horizontal_vs_analytic <= tau;
  return r;
}

/// M ⊔ N: direct sum of algebras, Hilbert spaces, Diracs and gradings.
inline DiscreteHodgeTriple disjoint_union(const DiscreteHodgeTriple& a, const DiscreteHodgeTriple& b) {
  const auto& ta = a.triple;
  const auto& tb = b.triple;
  DiscreteHodgeTriple out;
  out.kind = DiscreteHodgeTriple::Kind::disjoint_union;
  out.triple = direct_sum_triple(ta, tb);
  out.degree_dims = a.degree_dims;
  out.degree_dims.insert(out.degree_dims.end(), b.degree_dims.begin(), b.degree_dims.end());
  out.component_vertices = {a.vertices(), b.vertices()};
  out.component_hilbert = {ta.hilbert_dim, tb.hilbert_dim};
  return out;
}

struct ImmersionReport {
  double max_residual = 0.0;
  int worst_sample = -1;
  bool pass = false;
};

/// Pull-back metric check  t^a t^b g'_ab(f(x)) = g(x)  for a sampled closed
/// curve f: S¹ → M (2-dim), with central-difference tangents on the periodic
/// parameter grid and angle unwrapping.
inline ImmersionReport check_riemannian_immersion(const std::vector<double>& params,
                                                  const std::vector<std::array<double, 2>>& image,
                                                  const std::function<double(double)>& g_n,
                                                  const std::function<Eigen::Matrix2d(double, double)>& g_m, double tau) {
  const std::size_t n = params.size();
  if (n < 3 || image.size() != n) throw ShapeError("immersion: need matching samples, at least 3");
  const double two_pi = 2.0 * std::numbers::pi;
  auto unwrap = [two_pi](double d) { return d - two_pi * std::round(d / two_pi); };
  ImmersionReport r;
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t prev = (s + n - 1) % n, next = (s + 1) % n;
    const double dx = unwrap(params[next] - params[prev]);
    if (dx == 0.0) throw ShapeError("immersion: repeated parameter samples");
    Eigen::Vector2d t;
    for (int a = 0; a < 2; ++a) t(a) = unwrap(image[next][static_cast<std::size_t>(a)] - image[prev][static_cast<std::size_t>(a)]) / dx;
    if (t.norm() < 1e-12) throw PreconditionError("immersion: degenerate tangent at sample " + std::to_string(s));
    const double pulled = t.dot(g_m(image[s][0], image[s][1]) * t);
    const double res = std::abs(pulled - g_n(params[s]));
    if (res > r.max_residual) {
      r.max_residual = res;
      r.worst_sample = static_cast<int>(s);
    }
  }
  r.pass = r.max_residual <= tau;
  return r;
}

inline Eigen::Matrix2d torus_metric(const TorusGrid& g, double theta) {
  Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
  m(1, 1) = g.volume(theta) * g.volume(theta);
  return m;
}

struct PullbackRow {
  int n = 0;
  int support_cells = 0;
  double norm_sq_circle = 0.0;       // ‖f*(h g_n)‖² on S¹
  double norm_sq_h_circle = 0.0;     // ‖h‖² on S¹
  double norm_sq_torus_flat = 0.0;   // ‖h g_n‖² with dθ dφ
  double norm_sq_torus_volume = 0.0; // ‖h g_n‖² with (c − sin θ) dθ dφ
  double ratio_flat = 0.0;           // circle / torus (flat)
  double ratio_volume = 0.0;
};

/// g_n(φ) = √(n cos(nπφ / 2φ₀)) for |φ| < φ₀/n, zero elsewhere. The bump is
/// taken symmetric about φ = 0, which gives ∫ g_n² dφ = 4φ₀/π for every n.
inline double bump(int n, double phi0, double phi) {
  const double a = std::abs(phi);
  if (a >= phi0 / n) return 0.0;
  return std::sqrt(n * std::cos(n * std::numbers::pi * a / (2.0 * phi0)));
}

/// Squared L² norms of h·g_n on the torus and of its restriction to φ = 0, by
/// midpoint quadrature on an (ntheta × nphi) grid centred on φ = 0.
inline std::vector<PullbackRow> unbounded_pullback_demo(const TorusGrid& torus, double phi0, const std::vector<int>& n_list,
                                                        const std::function<double(double)>& h, int min_cells = 3) {
  if (phi0 <= 0.0 || phi0 > std::numbers::pi) throw ShapeError("pullback demo: phi0 must lie in (0, pi]");
  const double ht = torus.htheta(), hp = torus.hphi();
  double h_sq = 0.0, h_sq_vol = 0.0;
  for (int i = 0; i < torus.ntheta; ++i) {
    const double th = (i + 0.5) * ht;
    h_sq += h(th) * h(th) * ht;
    h_sq_vol += h(th) * h(th) * torus.volume(th) * ht;
  }
  std::vector<PullbackRow> rows;
  for (int n : n_list) {
    if (n < 1) throw ShapeError("pullback demo: n must be >= 1");
    PullbackRow r;
    r.n = n;
    r.support_cells = static_cast<int>(std::floor(phi0 / n / hp));
    if (r.support_cells < min_cells) {
      throw RefinementError("pullback demo: support of g_" + std::to_string(n) + " spans " + std::to_string(r.support_cells) +
                            " cells, need " + std::to_string(min_cells) + "; refine nphi");
    }
    double bump_sq = 0.0;
    for (int j = 0; j < torus.nphi; ++j) {
      const double phi = -std::numbers::pi + (j + 0.5) * hp;
      const double b = bump(n, phi0, phi);
      bump_sq += b * b * hp;
    }
    r.norm_sq_h_circle = h_sq;
    r.norm_sq_circle = h_sq * bump(n, phi0, 0.0) * bump(n, phi0, 0.0);
    r.norm_sq_torus_flat = h_sq * bump_sq;
    r.norm_sq_torus_volume = h_sq_vol * bump_sq;
    r.ratio_flat = r.norm_sq_circle / r.norm_sq_torus_flat;
    r.ratio_volume = r.norm_sq_circle / r.norm_sq_torus_volume;
    rows.push_back(r);
  }
  return rows;
}

/// Smallest nphi (a multiple of 8) for which every bump spans `cells` cells.
inline int refined_nphi(double phi0, const std::vector<int>& n_list, int cells) {
  int nmax = 1;
  for (int n : n_list) nmax = std::max(nmax, n);
  const double needed = cells * nmax * 2.0 * std::numbers::pi / phi0;
  return 8 * static_cast<int>(std::ceil(needed / 8.0));
}

}  // namespace ncg
