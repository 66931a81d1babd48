#pragma once

// Finite-dimensional C*-algebras ⊕ M_{n_i}(ℂ) and their elements.
//
// The fixed basis of an algebra is the list of matrix units E^{(b)}_{pq},
// ordered by block and then row-major inside the block. Coordinates of an
// element are its entries in that basis.

#include "ncg/operator_core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ncg {

struct AlgebraElement {
  std::vector<Matrix> blocks;

  AlgebraElement adjoint() const {
    AlgebraElement out;
    out.blocks.reserve(blocks.size());
    for (const auto& b : blocks) out.blocks.push_back(b.adjoint());
    return out;
  }
};

inline AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.blocks.size() != b.blocks.size()) throw ShapeError("element sum: block count mismatch");
  AlgebraElement out = a;
  for (std::size_t i = 0; i < a.blocks.size(); ++i) {
    if (a.blocks[i].rows() != b.blocks[i].rows()) throw ShapeError("element sum: block size mismatch");
    out.blocks[i] += b.blocks[i];
  }
  return out;
}

inline AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.blocks.size() != b.blocks.size()) throw ShapeError("element difference: block count mismatch");
  AlgebraElement out = a;
  for (std::size_t i = 0; i < a.blocks.size(); ++i) {
    if (a.blocks[i].rows() != b.blocks[i].rows()) throw ShapeError("element difference: block size mismatch");
    out.blocks[i] -= b.blocks[i];
  }
  return out;
}

inline AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.blocks.size() != b.blocks.size()) throw ShapeError("element product: block count mismatch");
  AlgebraElement out;
  out.blocks.reserve(a.blocks.size());
  for (std::size_t i = 0; i < a.blocks.size(); ++i) {
    if (a.blocks[i].cols() != b.blocks[i].rows()) throw ShapeError("element product: block size mismatch");
    out.blocks.push_back(a.blocks[i] * b.blocks[i]);
  }
  return out;
}

inline AlgebraElement operator*(Complex s, const AlgebraElement& a) {
  AlgebraElement out = a;
  for (auto& b : out.blocks) b *= s;
  return out;
}

class FiniteAlgebra {
 public:
  struct BasisIndex {
    int block;
    int row;
    int col;
  };

  FiniteAlgebra() = default;

  explicit FiniteAlgebra(std::vector<int> block_dims) : dims_(std::move(block_dims)) {
    if (dims_.empty()) throw ShapeError("FiniteAlgebra: at least one block required");
    offsets_.reserve(dims_.size());
    int offset = 0;
    for (int n : dims_) {
      if (n < 1) throw ShapeError("FiniteAlgebra: block dimensions must be >= 1");
      offsets_.push_back(offset);
      offset += n * n;
    }
    dimension_ = offset;
  }

  /// ℂ^n: n one-dimensional blocks.
  static FiniteAlgebra commutative(int n) { return FiniteAlgebra(std::vector<int>(static_cast<std::size_t>(n), 1)); }

  const std::vector<int>& block_dims() const { return dims_; }
  int num_blocks() const { return static_cast<int>(dims_.size()); }
  int block_dim(int b) const { return dims_.at(static_cast<std::size_t>(b)); }
  int dimension() const { return dimension_; }
  int block_offset(int b) const { return offsets_.at(static_cast<std::size_t>(b)); }

  bool is_commutative() const {
    for (int n : dims_) {
      if (n != 1) return false;
    }
    return true;
  }

  BasisIndex basis_index(int k) const {
    if (k < 0 || k >= dimension_) throw ShapeError("basis index out of range");
    int b = num_blocks() - 1;
    while (offsets_[static_cast<std::size_t>(b)] > k) --b;
    const int n = dims_[static_cast<std::size_t>(b)];
    const int local = k - offsets_[static_cast<std::size_t>(b)];
    return {b, local / n, local % n};
  }

  int basis_position(int block, int row, int col) const {
    return block_offset(block) + row * block_dim(block) + col;
  }

  /// E_pq E_rs = δ_qr E_ps; empty when the product vanishes.
  std::optional<int> basis_product(int i, int j) const {
    const auto a = basis_index(i);
    const auto b = basis_index(j);
    if (a.block != b.block || a.col != b.row) return std::nullopt;
    return basis_position(a.block, a.row, b.col);
  }

  int basis_adjoint(int i) const {
    const auto a = basis_index(i);
    return basis_position(a.block, a.col, a.row);
  }

  AlgebraElement zero() const {
    AlgebraElement z;
    z.blocks.reserve(dims_.size());
    for (int n : dims_) z.blocks.push_back(Matrix::Zero(n, n));
    return z;
  }

  AlgebraElement identity() const {
    AlgebraElement z;
    z.blocks.reserve(dims_.size());
    for (int n : dims_) z.blocks.push_back(Matrix::Identity(n, n));
    return z;
  }

  AlgebraElement basis_element(int k) const {
    const auto idx = basis_index(k);
    AlgebraElement e = zero();
    e.blocks[static_cast<std::size_t>(idx.block)](idx.row, idx.col) = 1.0;
    return e;
  }

  Vector coordinates(const AlgebraElement& a) const {
    check_shape(a);
    Vector c(dimension_);
    for (int b = 0; b < num_blocks(); ++b) {
      const int n = block_dim(b);
      for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) c(basis_position(b, p, q)) = a.blocks[static_cast<std::size_t>(b)](p, q);
      }
    }
    return c;
  }

  AlgebraElement from_coordinates(const Vector& c) const {
    if (c.size() != dimension_) throw ShapeError("from_coordinates: length mismatch");
    AlgebraElement a = zero();
    for (int b = 0; b < num_blocks(); ++b) {
      const int n = block_dim(b);
      for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) a.blocks[static_cast<std::size_t>(b)](p, q) = c(basis_position(b, p, q));
      }
    }
    return a;
  }

  /// Real basis of the self-adjoint part: per block, diagonal units E_pp, then
  /// for p<q the pair E_pq + E_qp and i(E_pq − E_qp).
  std::vector<AlgebraElement> self_adjoint_basis() const {
    std::vector<AlgebraElement> out;
    out.reserve(static_cast<std::size_t>(dimension_));
    for (int b = 0; b < num_blocks(); ++b) {
      const int n = block_dim(b);
      for (int p = 0; p < n; ++p) {
        AlgebraElement e = zero();
        e.blocks[static_cast<std::size_t>(b)](p, p) = 1.0;
        out.push_back(std::move(e));
      }
      for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
          AlgebraElement re = zero();
          re.blocks[static_cast<std::size_t>(b)](p, q) = 1.0;
          re.blocks[static_cast<std::size_t>(b)](q, p) = 1.0;
          out.push_back(std::move(re));
          AlgebraElement im = zero();
          im.blocks[static_cast<std::size_t>(b)](p, q) = Complex(0.0, 1.0);
          im.blocks[static_cast<std::size_t>(b)](q, p) = Complex(0.0, -1.0);
          out.push_back(std::move(im));
        }
      }
    }
    return out;
  }

  void check_shape(const AlgebraElement& a) const {
    if (static_cast<int>(a.blocks.size()) != num_blocks()) throw ShapeError("element has wrong number of blocks");
    for (int b = 0; b < num_blocks(); ++b) {
      const auto& m = a.blocks[static_cast<std::size_t>(b)];
      if (m.rows() != block_dim(b) || m.cols() != block_dim(b)) throw ShapeError("element block has wrong size");
    }
  }

  friend bool operator==(const FiniteAlgebra& a, const FiniteAlgebra& b) { return a.dims_ == b.dims_; }

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;
  int dimension_ = 0;
};

/// Element of a commutative algebra ℂ^n from real values.
inline AlgebraElement function_element(const RealVector& values) {
  AlgebraElement a;
  a.blocks.reserve(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i) a.blocks.push_back(Matrix::Constant(1, 1, values(i)));
  return a;
}

inline std::string describe_block_dims(const std::vector<int>& dims) {
  std::string s = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "," : "") + std::to_string(dims[i]);
  return s + "]";
}

}  // namespace ncg
