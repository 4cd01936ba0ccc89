#pragma once

// Effective resistances and Fiedler's block identity
//
//   -1/2 [0 u^T; u Omega] * [4R^2 -2r^T; -2r Q] = I
//
// relating a Laplacian Q to its resistance matrix Omega through the
// circumcenter coordinates r and circumradius R of the associated simplex.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "resgeom/errors.hpp"
#include "resgeom/graph.hpp"
#include "resgeom/linalg.hpp"

namespace resgeom {

/// Symmetric, zero diagonal, positive off-diagonal; the squared edge lengths
/// of the simplex of a Laplacian.
class ResistanceMatrix {
 public:
  explicit ResistanceMatrix(Matrix omega) : omega_(std::move(omega)) {}

  Index order() const noexcept { return omega_.rows(); }
  const Matrix& matrix() const noexcept { return omega_; }
  double operator()(Index i, Index j) const { return omega_(i, j); }

 private:
  Matrix omega_;
};

/// Diagonal of the pseudoinverse (zeta), circumcenter coordinates (r) and
/// circumradius (R).
struct FiedlerBlocks {
  Vector zeta;
  Vector r;
  double radius = 0.0;
};

/// Max-abs residuals of the two products of the bordered blocks.
struct IdentityResidual {
  double ab = 0.0;
  double ba = 0.0;

  double max() const { return std::max(ab, ba); }
};

inline void require_index(Index n, Index i) {
  if (i < 0 || i >= n) {
    throw Error(ErrorCode::IndexOutOfRange, "node index " + std::to_string(i) + " outside 0.." + std::to_string(n - 1));
  }
}

/// (e_i - e_j)^T Q+ (e_i - e_j).
inline double effective_resistance(const LaplacianMatrix& q, Index i, Index j) {
  require_index(q.order(), i);
  require_index(q.order(), j);
  if (i == j) return 0.0;
  const Matrix& p = q.pseudoinverse();
  return p(i, i) + p(j, j) - 2.0 * p(i, j);
}

/// Omega = zeta u^T + u zeta^T - 2 Q+.
inline ResistanceMatrix resistance_matrix(const LaplacianMatrix& q) {
  return ResistanceMatrix(squared_distances_from_gram(q.pseudoinverse()));
}

namespace detail {

// Blocks for any symmetric `lap` with kernel span{u}, given diag of its
// pseudoinverse. Shared by the Laplacian and the general (Gram) case.
inline FiedlerBlocks blocks_from(const Matrix& lap, const Vector& zeta) {
  const Index n = lap.rows();
  const double inv_n = 1.0 / static_cast<double>(n);
  FiedlerBlocks fb;
  fb.zeta = zeta;
  fb.r = 0.5 * (lap * zeta) + Vector::Constant(n, inv_n);
  const double r2 = 0.5 * zeta.dot(fb.r + Vector::Constant(n, inv_n));
  fb.radius = std::sqrt(std::max(r2, 0.0));
  return fb;
}

inline Matrix bordered(double corner, const Vector& border, const Matrix& body) {
  const Index n = body.rows();
  Matrix out(n + 1, n + 1);
  out(0, 0) = corner;
  out.block(0, 1, 1, n) = border.transpose();
  out.block(1, 0, n, 1) = border;
  out.block(1, 1, n, n) = body;
  return out;
}

inline IdentityResidual identity_residual(const Matrix& lap, const Matrix& dist, const FiedlerBlocks& fb) {
  const Index n = lap.rows();
  const Matrix a = -0.5 * detail::bordered(0.0, Vector::Ones(n), dist);
  const Matrix b = detail::bordered(4.0 * fb.radius * fb.radius, -2.0 * fb.r, lap);
  const Matrix id = Matrix::Identity(n + 1, n + 1);
  return {max_abs(a * b - id), max_abs(b * a - id)};
}

}  // namespace detail

inline FiedlerBlocks fiedler_blocks(const LaplacianMatrix& q) {
  return detail::blocks_from(q.matrix(), q.pseudoinverse().diagonal());
}

/// The Cayley-Menger matrix [0 u^T; u D].
inline Matrix cayley_menger_matrix(const Matrix& d) {
  require_square(d, "distance matrix");
  return detail::bordered(0.0, Vector::Ones(d.rows()), d);
}

/// [4R^2 -2r^T; -2r Q], the inverse of -1/2 times the Cayley-Menger matrix of Omega.
inline Matrix fiedler_inverse_block(const LaplacianMatrix& q) {
  const FiedlerBlocks fb = fiedler_blocks(q);
  return detail::bordered(4.0 * fb.radius * fb.radius, -2.0 * fb.r, q.matrix());
}

inline IdentityResidual verify_fiedler_identity(const LaplacianMatrix& q) {
  const FiedlerBlocks fb = fiedler_blocks(q);
  return detail::identity_residual(q.matrix(), resistance_matrix(q).matrix(), fb);
}

/// Same identity for an arbitrary simplex: `gram_pinv` is its canonical
/// pseudoinverse Gram matrix (PSD, kernel span{u}, sign pattern free) and
/// `dist` its squared distance matrix.
inline IdentityResidual verify_identity_general(const Matrix& gram_pinv, const Matrix& dist,
                                                const Tolerances& tol = {}) {
  const SymmetricMatrix mdag(gram_pinv);
  if (dist.rows() != mdag.order() || dist.cols() != mdag.order()) {
    throw Error(ErrorCode::DimensionMismatch, "distance matrix does not match the Gram matrix order");
  }
  const Matrix gram = pseudoinverse_rank_deficient_by_one(mdag, tol.zero_eigenvalue);
  const FiedlerBlocks fb = detail::blocks_from(mdag.matrix(), gram.diagonal());
  return detail::identity_residual(mdag.matrix(), dist, fb);
}

/// Overload deriving the squared distances from the Gram matrix itself.
inline IdentityResidual verify_identity_general(const Matrix& gram_pinv, const Tolerances& tol = {}) {
  const SymmetricMatrix mdag(gram_pinv);
  const Matrix gram = pseudoinverse_rank_deficient_by_one(mdag, tol.zero_eigenvalue);
  return verify_identity_general(gram_pinv, squared_distances_from_gram(gram), tol);
}

/// Omega^{-1} = -1/2 (Q - r r^T / R^2).
inline Matrix inverse_resistance_matrix(const LaplacianMatrix& q) {
  const FiedlerBlocks fb = fiedler_blocks(q);
  Matrix out = -0.5 * (q.matrix() - fb.r * fb.r.transpose() / (fb.radius * fb.radius));
  return 0.5 * (out + out.transpose());
}

// ---------------------------------------------------------------------------
// Metric checks

enum class MetricMode { plain, sqrt };

struct TriangleViolation {
  // d(i,k) > d(i,j) + d(j,k) by `excess`
  Index i = 0, j = 0, k = 0;
  double excess = 0.0;
};

struct MetricReport {
  MetricMode mode = MetricMode::plain;
  bool indiscernibles = false;  // off-diagonal entries strictly positive
  bool symmetric = false;
  std::size_t triples_checked = 0;
  std::size_t violations = 0;
  std::optional<TriangleViolation> worst;
  double slack = 0.0;

  bool passed() const { return indiscernibles && symmetric && violations == 0; }
};

/// Exhaustive check over every ordered triple of distinct indices.
inline MetricReport check_metric(const Matrix& d_in, MetricMode mode, const Tolerances& tol = {}) {
  require_square(d_in, "distance matrix");
  require_finite(d_in, "distance matrix");
  const Index n = d_in.rows();
  const double scale = max_abs(d_in);
  const double exact = 1e-12 * std::max(scale, 1e-300);
  if (max_abs(d_in - d_in.transpose()) > exact) throw Error(ErrorCode::Asymmetric, "distance matrix is not symmetric");
  if (n > 0 && d_in.diagonal().cwiseAbs().maxCoeff() > exact) {
    throw Error(ErrorCode::NonZeroDiagonal, "distance matrix has a non-zero diagonal entry");
  }

  Matrix d = 0.5 * (d_in + d_in.transpose());
  d.diagonal().setZero();
  if (mode == MetricMode::sqrt) {
    if (d.minCoeff() < 0.0) throw Error(ErrorCode::NegativeEntry, "square root of a negative distance");
    d = d.cwiseSqrt();
  }

  MetricReport rep;
  rep.mode = mode;
  rep.symmetric = true;
  rep.slack = tol.metric_slack * max_abs(d);
  rep.indiscernibles = true;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j && !(d(i, j) > 0.0)) rep.indiscernibles = false;

  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      for (Index k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        ++rep.triples_checked;
        const double excess = d(i, k) - d(i, j) - d(j, k);
        if (excess > rep.slack) {
          ++rep.violations;
          if (!rep.worst || excess > rep.worst->excess) rep.worst = TriangleViolation{i, j, k, excess};
        }
      }
    }
  }
  return rep;
}

}  // namespace resgeom
