#pragma once

// Unital *-homomorphisms between finite algebras, given as block routings:
// target block t receives source block s, optionally conjugated by a unitary,
// φ(a)_t = U a_s U*.

#include "ncg/algebra.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ncg {

class HomomorphismError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Route {
  int target_block = 0;
  int source_block = 0;
  std::optional<Matrix> conjugation;
};

class BlockHomomorphism {
 public:
  BlockHomomorphism() = default;

  BlockHomomorphism(FiniteAlgebra source, FiniteAlgebra target, std::vector<Route> routing)
      : source_(std::move(source)), target_(std::move(target)), by_target_(static_cast<std::size_t>(target_.num_blocks())) {
    for (auto& r : routing) {
      if (r.target_block < 0 || r.target_block >= target_.num_blocks()) throw HomomorphismError("route: target block out of range");
      if (r.source_block < 0 || r.source_block >= source_.num_blocks()) throw HomomorphismError("route: source block out of range");
      const int n = target_.block_dim(r.target_block);
      if (source_.block_dim(r.source_block) != n) {
        throw HomomorphismError("route " + std::to_string(r.source_block) + " -> " + std::to_string(r.target_block) +
                                ": block sizes differ");
      }
      if (r.conjugation) {
        const Matrix& u = *r.conjugation;
        if (u.rows() != n || u.cols() != n) throw HomomorphismError("route: conjugation has wrong size");
        if (max_abs(Matrix(u.adjoint() * u - Matrix::Identity(n, n))) > 1e-10) {
          throw HomomorphismError("route: conjugation is not unitary");
        }
      }
      auto& slot = by_target_[static_cast<std::size_t>(r.target_block)];
      if (slot) throw HomomorphismError("route: target block " + std::to_string(r.target_block) + " routed twice");
      slot = r;
    }
    for (std::size_t t = 0; t < by_target_.size(); ++t) {
      if (!by_target_[t]) throw HomomorphismError("route: target block " + std::to_string(t) + " is not covered (not unital)");
    }
  }

  /// Projection onto all but the last `dropped` blocks.
  static BlockHomomorphism drop_last(const FiniteAlgebra& source, int dropped = 1) {
    std::vector<int> dims(source.block_dims().begin(), source.block_dims().end() - dropped);
    std::vector<Route> routes;
    for (int b = 0; b < static_cast<int>(dims.size()); ++b) routes.push_back({b, b, std::nullopt});
    return BlockHomomorphism(source, FiniteAlgebra(dims), routes);
  }

  static BlockHomomorphism identity(const FiniteAlgebra& a) {
    std::vector<Route> routes;
    for (int b = 0; b < a.num_blocks(); ++b) routes.push_back({b, b, std::nullopt});
    return BlockHomomorphism(a, a, routes);
  }

  const FiniteAlgebra& source() const { return source_; }
  const FiniteAlgebra& target() const { return target_; }
  const Route& route(int target_block) const { return *by_target_.at(static_cast<std::size_t>(target_block)); }

  std::vector<Route> routing() const {
    std::vector<Route> out;
    for (const auto& r : by_target_) out.push_back(*r);
    return out;
  }

  AlgebraElement apply(const AlgebraElement& a) const {
    source_.check_shape(a);
    AlgebraElement out;
    for (const auto& r : by_target_) {
      const Matrix& blk = a.blocks[static_cast<std::size_t>(r->source_block)];
      out.blocks.push_back(r->conjugation ? Matrix(*r->conjugation * blk * r->conjugation->adjoint()) : blk);
    }
    return out;
  }

  /// Complex matrix of φ in the matrix-unit coordinates (dim B × dim A).
  Matrix linear_map() const {
    Matrix m = Matrix::Zero(target_.dimension(), source_.dimension());
    for (int k = 0; k < source_.dimension(); ++k) m.col(k) = target_.coordinates(apply(source_.basis_element(k)));
    return m;
  }

  /// Onto exactly when no source block feeds two target blocks.
  bool is_surjective() const {
    std::set<int> seen;
    for (const auto& r : by_target_) {
      if (!seen.insert(r->source_block).second) return false;
    }
    return true;
  }

  /// Source blocks not routed anywhere: their matrix units span ker φ.
  std::vector<int> unrouted_source_blocks() const {
    std::set<int> used;
    for (const auto& r : by_target_) used.insert(r->source_block);
    std::vector<int> out;
    for (int b = 0; b < source_.num_blocks(); ++b) {
      if (!used.count(b)) out.push_back(b);
    }
    return out;
  }

 private:
  FiniteAlgebra source_;
  FiniteAlgebra target_;
  std::vector<std::optional<Route>> by_target_;
};

struct HomomorphismCheck {
  bool linear_shape_ok = true;
  bool multiplicative = true;
  bool star_preserving = true;
  bool unital = true;
  double residual = 0.0;
  std::optional<std::pair<int, int>> failing_pair;
  bool ok() const { return linear_shape_ok && multiplicative && star_preserving && unital; }
};

/// Verifies a raw coordinate matrix claiming to be a unital *-homomorphism on
/// the multiplication table of the source basis.
inline HomomorphismCheck verify_homomorphism(const Matrix& phi, const FiniteAlgebra& source, const FiniteAlgebra& target,
                                             double tol = 1e-10) {
  HomomorphismCheck c;
  if (phi.rows() != target.dimension() || phi.cols() != source.dimension()) {
    c.linear_shape_ok = false;
    return c;
  }
  auto image = [&](int k) { return target.from_coordinates(phi.col(k)); };
  for (int i = 0; i < source.dimension(); ++i) {
    const AlgebraElement pi = image(i);
    for (int j = 0; j < source.dimension(); ++j) {
      AlgebraElement lhs = pi * image(j);
      const auto prod = source.basis_product(i, j);
      if (prod) lhs = lhs - image(*prod);
      const double r = max_abs(target.coordinates(lhs));
      c.residual = std::max(c.residual, r);
      if (r > tol && c.multiplicative) {
        c.multiplicative = false;
        c.failing_pair = std::make_pair(i, j);
      }
    }
    const double s = max_abs(target.coordinates(pi.adjoint() - image(source.basis_adjoint(i))));
    c.residual = std::max(c.residual, s);
    if (s > tol) c.star_preserving = false;
  }
  const Vector one = phi * source.coordinates(source.identity());
  const double u = max_abs(Matrix(one - target.coordinates(target.identity())));
  c.residual = std::max(c.residual, u);
  if (u > tol) c.unital = false;
  return c;
}

}  // namespace ncg
