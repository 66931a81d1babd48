#pragma once

// Independent reference computations. Nothing here calls into the solver
// paths under test; they use closed forms, brute force or plain loops.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline double two_point(double x) { return 1.0 / std::abs(x); }

// Commutative N-point: each pair (j,k) contributes |x_jk| |f_j − f_k| to the
// commutator norm, so the distance is the shortest path with edge lengths
// 1/|x_jk| (edges with x = 0 are absent).
inline std::vector<std::vector<double>> npoint_distances(int n, const std::vector<Complex>& x) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  int idx = 0;
  for (int k = 1; k < n; ++k) {
    for (int j = 0; j < k; ++j, ++idx) {
      const double a = std::abs(x[static_cast<std::size_t>(idx)]);
      if (a > 0) d[j][k] = d[k][j] = 1.0 / a;
    }
  }
  for (int i = 0; i < n; ++i) d[i][i] = 0.0;
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][m] + d[m][j]);
  return d;
}

inline double circle_geodesic(int n, int k) {
  const double h = 2.0 * std::numbers::pi / n;
  k = ((k % n) + n) % n;
  return std::min(k, n - k) * h;
}

inline int derivation_dim(const std::vector<int>& dims) {
  int s = 0;
  for (int n : dims) s += n * n - 1;
  return s;
}

// Every multiset of block sizes with Σ n² ≤ limit, sizes non-increasing.
inline void profiles(int limit, int max_size, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (!cur.empty()) out.push_back(cur);
  for (int n = max_size; n >= 1; --n) {
    if (n * n > limit) continue;
    cur.push_back(n);
    profiles(limit - n * n, n, cur, out);
    cur.pop_back();
  }
}

inline std::vector<std::vector<int>> all_profiles(int limit) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  profiles(limit, limit, cur, out);
  return out;
}

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out = CMat::Zero(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Largest singular value by power iteration on A*A.
inline double power_norm(const CMat& a, int iters = 3000) {
  if (a.size() == 0) return 0.0;
  std::mt19937 g(7);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v(a.cols());
  for (int i = 0; i < v.size(); ++i) v(i) = Complex(nd(g), nd(g));
  double lam = 0.0;
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXcd w = a.adjoint() * (a * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    lam = nw / v.norm();
    v = w / nw;
  }
  return std::sqrt(lam);
}

// max c'x over {A x <= b, x >= 0} by enumerating every vertex. Only for a
// handful of variables; returns -inf when the set is empty.
inline double lp_vertex_max(const RMat& a, const RVec& b, const RVec& c) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(a.rows());
  RMat all(m + n, n);
  RVec rhs(m + n);
  all.topRows(m) = a;
  rhs.head(m) = b;
  all.bottomRows(n) = -RMat::Identity(n, n);
  rhs.tail(n).setZero();
  const int total = m + n;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> pick(n);
  std::vector<bool> mask(total, false);
  std::fill(mask.begin(), mask.begin() + n, true);
  do {
    int k = 0;
    for (int i = 0; i < total; ++i)
      if (mask[i]) pick[k++] = i;
    RMat s(n, n);
    RVec r(n);
    for (int i = 0; i < n; ++i) {
      s.row(i) = all.row(pick[i]);
      r(i) = rhs(pick[i]);
    }
    Eigen::FullPivLU<RMat> lu(s);
    if (lu.rank() < n) continue;
    const RVec x = lu.solve(r);
    if (((all * x - rhs).array() > 1e-9).any()) continue;
    best = std::max(best, c.dot(x));
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

}  // namespace oracle
