#pragma once

// Pure states, finite convex combinations of them, and pull-backs along
// block-routing homomorphisms.

#include "ncg/homomorphism.hpp"

#include <string>
#include <vector>

namespace ncg {

struct PureState {
  enum class Kind { evaluation, vector };
  Kind kind = Kind::evaluation;
  int block = 0;
  Vector xi;  // unit vector for Kind::vector

  static PureState evaluation(int block) { return {Kind::evaluation, block, Vector::Ones(1)}; }
  static PureState vector_state(int block, Vector unit) { return {Kind::vector, block, std::move(unit)}; }

  void check(const FiniteAlgebra& a) const {
    if (block < 0 || block >= a.num_blocks()) throw ShapeError("state: block index out of range");
    if (kind == Kind::evaluation) {
      if (a.block_dim(block) != 1) throw ShapeError("state: evaluation state needs a 1x1 block");
      return;
    }
    if (xi.size() != a.block_dim(block)) throw ShapeError("state: vector length does not match its block");
    if (std::abs(xi.norm() - 1.0) > 1e-12) throw ShapeError("state: vector must have unit norm");
  }

  std::string describe() const {
    if (kind == Kind::evaluation) return "eval(" + std::to_string(block) + ")";
    std::string s = "vec(" + std::to_string(block) + ";";
    for (Eigen::Index i = 0; i < xi.size(); ++i) {
      s += (i ? "," : "") + std::to_string(xi(i).real());
      if (xi(i).imag() != 0.0) s += (xi(i).imag() > 0 ? "+" : "") + std::to_string(xi(i).imag()) + "i";
    }
    return s + ")";
  }
};

/// Finite convex combination Σ w_k ρ_k of pure states.
struct State {
  std::vector<std::pair<double, PureState>> terms;

  State() = default;
  State(PureState p) { terms.emplace_back(1.0, std::move(p)); }  // NOLINT: implicit on purpose

  bool is_pure() const { return terms.size() == 1 && std::abs(terms[0].first - 1.0) < 1e-15; }

  void check(const FiniteAlgebra& a) const {
    if (terms.empty()) throw ShapeError("state: empty convex combination");
    double total = 0.0;
    for (const auto& [w, p] : terms) {
      if (w < 0.0) throw ShapeError("state: negative weight");
      p.check(a);
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ShapeError("state: weights must sum to 1");
  }

  std::string describe() const {
    if (is_pure()) return terms[0].second.describe();
    std::string s;
    for (const auto& [w, p] : terms) s += (s.empty() ? "" : " + ") + std::to_string(w) + "*" + p.describe();
    return s;
  }
};

/// Coefficients w with ρ(a) = Σ_k w_k a_k in matrix-unit coordinates.
inline Vector state_functional(const State& s, const FiniteAlgebra& a) {
  s.check(a);
  Vector w = Vector::Zero(a.dimension());
  for (const auto& [weight, p] : s.terms) {
    const int n = a.block_dim(p.block);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) w(a.basis_position(p.block, i, j)) += weight * std::conj(p.xi(i)) * p.xi(j);
    }
  }
  return w;
}

inline Complex evaluate(const State& s, const FiniteAlgebra& alg, const AlgebraElement& a) {
  alg.check_shape(a);
  Complex total = 0.0;
  for (const auto& [w, p] : s.terms) {
    p.check(alg);
    const Matrix& blk = a.blocks[static_cast<std::size_t>(p.block)];
    total += w * (p.xi.adjoint() * blk * p.xi)(0, 0);
  }
  return total;
}

/// State a ↦ tr(ρ_b a_b) on block b for a density matrix ρ_b, written as the
/// convex combination of its eigenvector states.
inline State state_from_density(const FiniteAlgebra& alg, int block, const Matrix& density) {
  const int n = alg.block_dim(block);
  if (density.rows() != n || density.cols() != n) throw ShapeError("density matrix does not match its block");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(density));
  if (es.eigenvalues().minCoeff() < -1e-12) throw ShapeError("density matrix is not positive");
  const double tr = es.eigenvalues().sum();
  if (std::abs(tr - 1.0) > 1e-12) throw ShapeError("density matrix must have unit trace");
  State s;
  for (int k = 0; k < n; ++k) {
    const double w = es.eigenvalues()(k);
    if (w <= 1e-14) continue;
    Vector v = es.eigenvectors().col(k);
    s.terms.emplace_back(w, n == 1 ? PureState::evaluation(block) : PureState::vector_state(block, v.normalized()));
  }
  double total = 0.0;
  for (const auto& t : s.terms) total += t.first;
  for (auto& t : s.terms) t.first /= total;
  return s;
}

/// Every evaluation state and every standard-basis vector state.
inline std::vector<State> default_state_set(const FiniteAlgebra& a) {
  std::vector<State> out;
  for (int b = 0; b < a.num_blocks(); ++b) {
    const int n = a.block_dim(b);
    if (n == 1) {
      out.emplace_back(PureState::evaluation(b));
      continue;
    }
    for (int i = 0; i < n; ++i) out.emplace_back(PureState::vector_state(b, Vector::Unit(n, i)));
  }
  return out;
}

struct PulledBackState {
  State state;
  bool purity_guaranteed = true;  // false when φ is not surjective
};

/// φ*ρ = ρ∘φ. A pure state on target block t becomes the vector state U*ξ on
/// the routed source block; purity is only guaranteed for surjective φ.
inline PulledBackState pullback_state(const BlockHomomorphism& phi, const State& rho) {
  rho.check(phi.target());
  PulledBackState out;
  out.purity_guaranteed = phi.is_surjective();
  for (const auto& [w, p] : rho.terms) {
    const Route& r = phi.route(p.block);
    if (phi.source().block_dim(r.source_block) == 1) {
      out.state.terms.emplace_back(w, PureState::evaluation(r.source_block));
      continue;
    }
    Vector xi = r.conjugation ? Vector(r.conjugation->adjoint() * p.xi) : p.xi;
    out.state.terms.emplace_back(w, PureState::vector_state(r.source_block, xi.normalized()));
  }
  return out;
}

}  // namespace ncg
