#pragma once

// Dense complex linear algebra at desk scale (dimensions <= 64): inner
// products, adjoints, projections, one-sided Jacobi SVD and fractional
// diagonal powers.  Everything is a plain value type; operations are pure.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "bicarleman/errors.hpp"

namespace bicarleman {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// <a,b> = sum a_i conj(b_i); linear in the first argument.
inline Complex inner(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size())
    throw dimension_error("inner: length mismatch " + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()));
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * std::conj(b[i]);
  return acc;
}

inline double norm(const ComplexVector& a) {
  double acc = 0.0;
  for (const Complex& z : a) acc += std::norm(z);
  return std::sqrt(acc);
}

inline ComplexVector operator+(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw dimension_error("vector add: length mismatch");
  ComplexVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline ComplexVector operator-(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw dimension_error("vector sub: length mismatch");
  ComplexVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline ComplexVector operator*(Complex c, const ComplexVector& a) {
  ComplexVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, Complex{0.0, 0.0}) {}

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex{1.0, 0.0};
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  bool finite() const {
    for (const Complex& z : a_)
      if (!is_finite(z)) return false;
    return true;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  ComplexVector apply(const ComplexVector& x) const {
    if (x.size() != cols_) throw dimension_error("matrix apply: dimension mismatch");
    ComplexVector y(rows_, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < rows_; ++i) {
      Complex acc{0.0, 0.0};
      for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
      y[i] = acc;
    }
    return y;
  }

  ComplexVector column(std::size_t j) const {
    ComplexVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  ComplexVector row(std::size_t i) const {
    ComplexVector r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
    return r;
  }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw dimension_error("matmul: dimension mismatch");
    ComplexMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        Complex aik = a(i, k);
        if (aik == Complex{0.0, 0.0}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw dimension_error("matrix add: shape mismatch");
    ComplexMatrix c(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.a_.size(); ++i) c.a_[i] = a.a_[i] + b.a_[i];
    return c;
  }

  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw dimension_error("matrix sub: shape mismatch");
    ComplexMatrix c(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.a_.size(); ++i) c.a_[i] = a.a_[i] - b.a_[i];
    return c;
  }

  friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Complex> a_;
};

inline double max_abs(const ComplexMatrix& m) {
  double mx = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) mx = std::max(mx, std::abs(m(i, j)));
  return mx;
}

inline double frobenius(const ComplexMatrix& m) {
  double acc = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) acc += std::norm(m(i, j));
  return std::sqrt(acc);
}

// Diagonal 0/1 projection onto the coordinates in `indices`.
inline ComplexMatrix projector(const std::set<std::size_t>& indices, std::size_t dim) {
  for (std::size_t idx : indices)
    if (idx >= dim)
      throw dimension_error("projector: index " + std::to_string(idx) +
                            " out of range for dim " + std::to_string(dim));
  ComplexMatrix e(dim, dim);
  for (std::size_t idx : indices) e(idx, idx) = Complex{1.0, 0.0};
  return e;
}

// Schmidt (singular value) decomposition data: M = sum s_n <.,p_n> q_n.
struct SchmidtSystem {
  std::vector<double> singular_values;       // non-increasing, >= 0
  std::vector<ComplexVector> left_vectors;   // q_n, orthonormal
  std::vector<ComplexVector> right_vectors;  // p_n, orthonormal

  std::size_t size() const { return singular_values.size(); }

  // Count of singular values above the clamping threshold.
  std::size_t rank() const {
    std::size_t r = 0;
    for (double s : singular_values)
      if (s > 0.0) ++r;
    return r;
  }
};

namespace detail {

// Deterministic orthonormal completion: repeatedly orthogonalize the
// canonical basis vector with the largest residual against the accumulated
// set (some canonical vector always keeps residual >= sqrt(deficit/dim),
// so the greedy choice cannot run dry).  Ties break toward lower indices.
inline void complete_orthonormal(std::vector<ComplexVector>& vecs, std::size_t count,
                                 std::size_t dim) {
  while (vecs.size() < count) {
    ComplexVector best;
    double best_norm = -1.0;
    for (std::size_t e = 0; e < dim; ++e) {
      ComplexVector cand(dim, Complex{0.0, 0.0});
      cand[e] = Complex{1.0, 0.0};
      for (const ComplexVector& q : vecs) {
        Complex proj = inner(cand, q);
        for (std::size_t i = 0; i < dim; ++i) cand[i] -= proj * q[i];
      }
      double n = norm(cand);
      if (n > best_norm + 1e-12) {
        best_norm = n;
        best = std::move(cand);
      }
    }
    if (best_norm < 1e-8)
      throw numerical_error("orthonormal completion: no canonical direction left");
    // re-orthogonalize once for numerical cleanliness
    for (const ComplexVector& q : vecs) {
      Complex proj = inner(best, q);
      for (std::size_t i = 0; i < dim; ++i) best[i] -= proj * q[i];
    }
    double n = norm(best);
    for (std::size_t i = 0; i < dim; ++i) best[i] /= n;
    vecs.push_back(std::move(best));
  }
}

// Rotate (q, p) by a common phase so the largest-magnitude entry of q is
// real positive.  Leaves s q p* unchanged.
inline void normalize_phase(ComplexVector& q, ComplexVector& p) {
  std::size_t best = 0;
  double mag = -1.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    double m = std::abs(q[i]);
    if (m > mag + 1e-14 * (1.0 + mag)) {
      mag = m;
      best = i;
    }
  }
  if (mag <= 0.0) return;
  Complex ph = q[best] / mag;  // unit modulus
  Complex inv = std::conj(ph);
  for (Complex& z : q) z *= inv;
  for (Complex& z : p) z *= inv;
}

}  // namespace detail

// One-sided Jacobi on the columns of M (equivalently, Jacobi diagonalization
// of M*M).  Sweeps until the off-diagonal Frobenius mass of the implicit
// Gram matrix falls below 1e-14 relative to its total mass.  Singular values
// below 1e-12 * s_1 are clamped to exact zero and their left vectors filled
// by deterministic orthonormal completion.
inline SchmidtSystem svd(const ComplexMatrix& M, int max_sweeps = 64) {
  if (!M.finite()) throw dimension_error("svd: non-finite entries");
  const std::size_t n = M.rows(), m = M.cols();
  ComplexMatrix A = M;
  ComplexMatrix V = ComplexMatrix::identity(m);

  const double conv_tol = 1e-14;
  bool converged = (m <= 1);
  double last_off = 0.0;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    double off2 = 0.0, total2 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      double d = 0.0;
      for (std::size_t r = 0; r < n; ++r) d += std::norm(A(r, j));
      total2 += d * d;
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        double gii = 0.0, gjj = 0.0;
        Complex gij{0.0, 0.0};
        for (std::size_t r = 0; r < n; ++r) {
          gii += std::norm(A(r, i));
          gjj += std::norm(A(r, j));
          gij += std::conj(A(r, i)) * A(r, j);
        }
        double off = std::abs(gij);
        off2 += 2.0 * off * off;
        if (off == 0.0) continue;
        double theta = 0.5 * std::atan2(2.0 * off, gii - gjj);
        double c = std::cos(theta), s = std::sin(theta);
        Complex ph = gij / off;  // e^{i arg g_ij}
        Complex sp = s * std::conj(ph), sm = s * ph;
        for (std::size_t r = 0; r < n; ++r) {
          Complex ai = A(r, i), aj = A(r, j);
          A(r, i) = c * ai + sp * aj;
          A(r, j) = -sm * ai + c * aj;
        }
        for (std::size_t r = 0; r < m; ++r) {
          Complex vi = V(r, i), vj = V(r, j);
          V(r, i) = c * vi + sp * vj;
          V(r, j) = -sm * vi + c * vj;
        }
      }
    }
    last_off = std::sqrt(off2);
    if (last_off <= conv_tol * std::max(std::sqrt(total2), 1e-300)) converged = true;
  }
  if (!converged)
    throw numerical_error("svd: Jacobi sweeps did not converge, off-diagonal mass " +
                          std::to_string(last_off));

  // Column norms are the singular values; sort non-increasing.
  std::vector<double> sv(m);
  for (std::size_t j = 0; j < m; ++j) {
    double acc = 0.0;
    for (std::size_t r = 0; r < n; ++r) acc += std::norm(A(r, j));
    sv[j] = std::sqrt(acc);
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sv[a] > sv[b]; });

  const std::size_t count = std::min(n, m);
  SchmidtSystem sys;
  sys.singular_values.reserve(count);
  sys.left_vectors.reserve(count);
  sys.right_vectors.reserve(count);
  double s1 = m > 0 ? sv[order[0]] : 0.0;
  double clamp = 1e-12 * s1;
  for (std::size_t t = 0; t < count; ++t) {
    std::size_t j = order[t];
    double s = sv[j] <= clamp ? 0.0 : sv[j];
    sys.singular_values.push_back(s);
    sys.right_vectors.push_back(V.column(j));
    if (s > 0.0) {
      ComplexVector q(n);
      for (std::size_t r = 0; r < n; ++r) q[r] = A(r, j) / sv[j];
      sys.left_vectors.push_back(std::move(q));
    } else {
      sys.left_vectors.emplace_back();  // fill below
    }
  }
  // Orthonormal completion for clamped columns.
  std::vector<ComplexVector> filled;
  for (std::size_t t = 0; t < count; ++t)
    if (sys.singular_values[t] > 0.0) filled.push_back(sys.left_vectors[t]);
  std::size_t positive = filled.size();
  detail::complete_orthonormal(filled, count, n);
  for (std::size_t t = 0, z = positive; t < count; ++t)
    if (sys.singular_values[t] == 0.0) sys.left_vectors[t] = filled[z++];

  for (std::size_t t = 0; t < count; ++t)
    detail::normalize_phase(sys.left_vectors[t], sys.right_vectors[t]);
  return sys;
}

// sum s_n^exponent <.,p_n> q_n as a matrix.  Exponent 1 reconstructs the
// decomposed matrix.
inline ComplexMatrix fractional_power_operator(const SchmidtSystem& sys, double exponent) {
  if (!(exponent > 0.0))
    throw config_error("fractional_power_operator: exponent must be positive");
  if (sys.size() == 0) return ComplexMatrix();
  const std::size_t n = sys.left_vectors[0].size();
  const std::size_t m = sys.right_vectors[0].size();
  ComplexMatrix out(n, m);
  for (std::size_t t = 0; t < sys.size(); ++t) {
    double w = sys.singular_values[t] > 0.0 ? std::pow(sys.singular_values[t], exponent) : 0.0;
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      Complex qi = w * sys.left_vectors[t][i];
      if (qi == Complex{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < m; ++j) out(i, j) += qi * std::conj(sys.right_vectors[t][j]);
    }
  }
  return out;
}

inline ComplexMatrix reconstruct(const SchmidtSystem& sys) {
  if (sys.size() == 0) return ComplexMatrix();
  return fractional_power_operator(sys, 1.0);
}

}  // namespace bicarleman
