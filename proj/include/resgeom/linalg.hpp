#pragma once

// Dense numeric substrate: symmetric eigendecomposition (Householder
// tridiagonalization followed by implicit-shift QL), LU determinants,
// the Laplacian pseudoinverse and a general symmetric pseudoinverse.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "resgeom/errors.hpp"

namespace resgeom {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Threshold knobs shared by the validation routines. All are relative to a
/// scale taken from the matrix being checked.
struct Tolerances {
  double laplacian = 1e-9;         // symmetry, sign and row sums, times max |Q_ii|
  double zero_eigenvalue = 1e-10;  // mu is zero iff mu <= this * mu_max
  double angle = 1e-9;             // dihedral sign dead-band, times max (M+)_ii
  double metric_slack = 1e-12;     // triangle inequality slack, times max entry

  static Tolerances uniform(double tol) {
    Tolerances t;
    t.laplacian = tol;
    t.angle = tol;
    t.metric_slack = tol;
    return t;
  }
};

// ---------------------------------------------------------------------------
// Canonical vectors and small helpers

inline Vector ones(Index n) { return Vector::Ones(n); }

inline Vector basis(Index n, Index i) {
  if (i < 0 || i >= n) throw Error(ErrorCode::IndexOutOfRange, "basis index " + std::to_string(i));
  Vector e = Vector::Zero(n);
  e(i) = 1.0;
  return e;
}

/// I - uu^T/n, the projector onto the complement of the constant vector.
inline Matrix centering_projector(Index n) {
  return Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
}

inline Matrix center(const Matrix& a) {
  const Matrix p = centering_projector(a.rows());
  return p * a * p;
}

inline double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::NonSquare, std::string(what) + " is " + std::to_string(a.rows()) + "x" +
                                          std::to_string(a.cols()));
  }
}

inline void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) throw Error(ErrorCode::NonFiniteEntry, std::string(what) + " has a non-finite entry");
}

/// Restrict a matrix to the given rows and columns (in the given order).
inline Matrix submatrix(const Matrix& a, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out(static_cast<Index>(r), static_cast<Index>(c)) = a(rows[r], cols[c]);
  return out;
}

// ---------------------------------------------------------------------------
// SymmetricMatrix

/// Square matrix that is exactly symmetric. Input must already be symmetric
/// to 1e-12 relative; the residual asymmetry is averaged away.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;

  explicit SymmetricMatrix(const Matrix& a) {
    require_square(a, "matrix");
    require_finite(a, "matrix");
    const double scale = std::max(max_abs(a), 1.0e-300);
    const double skew = max_abs(a - a.transpose());
    if (skew > 1e-12 * scale) {
      throw Error(ErrorCode::Asymmetric, "asymmetry " + std::to_string(skew) + " exceeds 1e-12 relative");
    }
    data_ = 0.5 * (a + a.transpose());
  }

  Index order() const noexcept { return data_.rows(); }
  const Matrix& matrix() const noexcept { return data_; }
  double operator()(Index i, Index j) const { return data_(i, j); }

 private:
  Matrix data_;
};

// ---------------------------------------------------------------------------
// Eigendecomposition

/// Eigenvalues in descending order, eigenvectors as matching orthonormal
/// columns. For a Laplacian the zero eigenvalue is last.
struct EigenDecomposition {
  Vector values;
  Matrix vectors;
};

namespace detail {

// Householder reduction of a symmetric matrix to tridiagonal form. On exit
// v holds the accumulated orthogonal transform, d the diagonal and e the
// subdiagonal (e(0) unused).
inline void tridiagonalize(Matrix& v, Vector& d, Vector& e) {
  const Index n = v.rows();
  for (Index j = 0; j < n; ++j) d(j) = v(n - 1, j);

  for (Index i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (Index k = 0; k < i; ++k) scale += std::abs(d(k));
    if (scale == 0.0) {
      e(i) = d(i - 1);
      for (Index j = 0; j < i; ++j) {
        d(j) = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (Index k = 0; k < i; ++k) {
        d(k) /= scale;
        h += d(k) * d(k);
      }
      double f = d(i - 1);
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e(i) = scale * g;
      h -= f * g;
      d(i - 1) = f - g;
      for (Index j = 0; j < i; ++j) e(j) = 0.0;

      for (Index j = 0; j < i; ++j) {
        f = d(j);
        v(j, i) = f;
        g = e(j) + v(j, j) * f;
        for (Index k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d(k);
          e(k) += v(k, j) * f;
        }
        e(j) = g;
      }
      f = 0.0;
      for (Index j = 0; j < i; ++j) {
        e(j) /= h;
        f += e(j) * d(j);
      }
      const double hh = f / (h + h);
      for (Index j = 0; j < i; ++j) e(j) -= hh * d(j);
      for (Index j = 0; j < i; ++j) {
        f = d(j);
        g = e(j);
        for (Index k = j; k <= i - 1; ++k) v(k, j) -= (f * e(k) + g * d(k));
        d(j) = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d(i) = h;
  }

  // Accumulate transformations.
  for (Index i = 0; i < n - 1; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d(i + 1);
    if (h != 0.0) {
      for (Index k = 0; k <= i; ++k) d(k) = v(k, i + 1) / h;
      for (Index j = 0; j <= i; ++j) {
        double g = 0.0;
        for (Index k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (Index k = 0; k <= i; ++k) v(k, j) -= g * d(k);
      }
    }
    for (Index k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (Index j = 0; j < n; ++j) {
    d(j) = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e(0) = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e), applying rotations to v.
inline void tridiagonal_ql(Matrix& v, Vector& d, Vector& e, int max_sweeps_per_value) {
  const Index n = v.rows();
  for (Index i = 1; i < n; ++i) e(i - 1) = e(i);
  e(n - 1) = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  for (Index l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d(l)) + std::abs(e(l)));
    Index m = l;
    while (m < n) {
      if (std::abs(e(m)) <= eps * tst1) break;
      ++m;
    }

    if (m > l) {
      int iter = 0;
      do {
        if (++iter > max_sweeps_per_value) {
          throw Error(ErrorCode::NoConvergence, "QL iteration budget exceeded at index " + std::to_string(l));
        }
        double g = d(l);
        double p = (d(l + 1) - g) / (2.0 * e(l));
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d(l) = e(l) / (p + r);
        d(l + 1) = e(l) * (p + r);
        const double dl1 = d(l + 1);
        double h = g - d(l);
        for (Index i = l + 2; i < n; ++i) d(i) -= h;
        f += h;

        p = d(m);
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e(l + 1);
        double s = 0.0, s2 = 0.0;
        for (Index i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e(i);
          h = c * p;
          r = std::hypot(p, e(i));
          e(i + 1) = s * r;
          s = e(i) / r;
          c = p / r;
          p = c * d(i) - s * g;
          d(i + 1) = h + s * (c * g + s * d(i));
          for (Index k = 0; k < n; ++k) {
            h = v(k, i + 1);
            v(k, i + 1) = s * v(k, i) + c * h;
            v(k, i) = c * v(k, i) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e(l) / dl1;
        e(l) = s * p;
        d(l) = c * p;
      } while (std::abs(e(l)) > eps * tst1);
    }
    d(l) += f;
    e(l) = 0.0;
  }
}

}  // namespace detail

/// Symmetric eigendecomposition, eigenvalues descending.
inline EigenDecomposition eigh(const SymmetricMatrix& a, int max_sweeps_per_value = 60) {
  const Index n = a.order();
  EigenDecomposition out;
  if (n == 0) return out;
  if (n == 1) {
    out.values = Vector::Constant(1, a(0, 0));
    out.vectors = Matrix::Identity(1, 1);
    return out;
  }

  Matrix v = a.matrix();
  Vector d(n), e(n);
  detail::tridiagonalize(v, d, e);
  detail::tridiagonal_ql(v, d, e, max_sweeps_per_value);

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return d(x) > d(y); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.values(k) = d(order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

inline EigenDecomposition eigh(const Matrix& a) { return eigh(SymmetricMatrix(a)); }

/// Number of eigenvalues with mu <= rel * mu_max (mu_max taken in magnitude).
inline Index count_zero_eigenvalues(const Vector& values, double rel) {
  if (values.size() == 0) return 0;
  const double top = values.cwiseAbs().maxCoeff();
  const double threshold = rel * top;
  Index zeros = 0;
  for (Index k = 0; k < values.size(); ++k)
    if (std::abs(values(k)) <= threshold) ++zeros;
  return top == 0.0 ? values.size() : zeros;
}

// ---------------------------------------------------------------------------
// Determinants

/// sign * exp(log_abs); sign is 0 for an exactly singular matrix.
struct LogDeterminant {
  int sign = 0;
  double log_abs = 0.0;

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

/// LU with partial pivoting, accumulating log|det| so large bordered
/// matrices do not overflow.
inline LogDeterminant log_determinant(const Matrix& a) {
  require_square(a, "determinant argument");
  require_finite(a, "determinant argument");
  const Index n = a.rows();
  Matrix lu = a;
  LogDeterminant out{1, 0.0};
  for (Index k = 0; k < n; ++k) {
    Index pivot = k;
    for (Index i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(pivot, k))) pivot = i;
    if (lu(pivot, k) == 0.0) return {0, 0.0};
    if (pivot != k) {
      lu.row(k).swap(lu.row(pivot));
      out.sign = -out.sign;
    }
    const double p = lu(k, k);
    if (p < 0) out.sign = -out.sign;
    out.log_abs += std::log(std::abs(p));
    for (Index i = k + 1; i < n; ++i) {
      const double factor = lu(i, k) / p;
      if (factor == 0.0) continue;
      lu.block(i, k + 1, 1, n - k - 1) -= factor * lu.block(k, k + 1, 1, n - k - 1);
    }
  }
  return out;
}

inline double determinant(const Matrix& a) { return log_determinant(a).value(); }

// ---------------------------------------------------------------------------
// Pseudoinverses

/// Pseudoinverse of a matrix whose kernel is exactly span{u}:
/// (A + uu^T/n)^{-1} - uu^T/n.
inline Matrix laplacian_pseudoinverse(const Matrix& q) {
  require_square(q, "Laplacian");
  const Index n = q.rows();
  const double inv_n = 1.0 / static_cast<double>(n);
  const Matrix shifted = q + Matrix::Constant(n, n, inv_n);

  Eigen::LDLT<Matrix> ldlt(shifted);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::SingularShift, "LDLT of shifted matrix failed");
  const Vector pivots = ldlt.vectorD();
  const double largest = pivots.cwiseAbs().maxCoeff();
  if (!(pivots.minCoeff() > 1e-13 * largest)) {
    throw Error(ErrorCode::SingularShift, "shifted matrix is numerically singular or indefinite");
  }
  Matrix inv = ldlt.solve(Matrix::Identity(n, n));
  inv.array() -= inv_n;
  return 0.5 * (inv + inv.transpose());
}

/// Pseudoinverse via eigendecomposition, for a symmetric PSD matrix with a
/// one-dimensional kernel. A second zero eigenvalue raises RankDeficient.
inline Matrix pseudoinverse_rank_deficient_by_one(const SymmetricMatrix& a, double zero_rel = 1e-10) {
  const EigenDecomposition ed = eigh(a);
  const Index n = a.order();
  if (n == 1) return Matrix::Zero(1, 1);
  const Index zeros = count_zero_eigenvalues(ed.values, zero_rel);
  if (zeros != 1) {
    throw Error(ErrorCode::RankDeficient, std::to_string(zeros) + " zero eigenvalues, expected exactly one");
  }
  Matrix out = Matrix::Zero(n, n);
  const double threshold = zero_rel * ed.values.cwiseAbs().maxCoeff();
  for (Index k = 0; k < n; ++k) {
    if (std::abs(ed.values(k)) <= threshold) continue;
    out.noalias() += (1.0 / ed.values(k)) * ed.vectors.col(k) * ed.vectors.col(k).transpose();
  }
  return 0.5 * (out + out.transpose());
}

/// Squared distances from a centered Gram matrix: D_ij = M_ii + M_jj - 2 M_ij.
inline Matrix squared_distances_from_gram(const Matrix& gram) {
  const Index n = gram.rows();
  const Vector g = gram.diagonal();
  Matrix d = g * Vector::Ones(n).transpose() + Vector::Ones(n) * g.transpose() - 2.0 * gram;
  d.diagonal().setZero();
  return 0.5 * (d + d.transpose());
}

}  // namespace resgeom
