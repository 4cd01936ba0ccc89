#pragma once

// Simplex geometry on the other side of the Laplacian correspondence.
//
// A simplex on n vertices is held as an (n-1) x n vertex matrix S. It is only
// defined up to rotation, reflection and translation, so comparisons go
// through the canonical Gram matrix M = P S^T S P (P the centering projector)
// or the squared distance matrix, never through raw coordinates.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "resgeom/errors.hpp"
#include "resgeom/graph.hpp"
#include "resgeom/linalg.hpp"
#include "resgeom/resistance.hpp"

namespace resgeom {

class SimplexEmbedding {
 public:
  explicit SimplexEmbedding(Matrix vertices) : s_(std::move(vertices)) {}

  Index vertex_count() const noexcept { return s_.cols(); }
  Index dimension() const noexcept { return s_.rows(); }
  const Matrix& vertices() const noexcept { return s_; }
  Vector vertex(Index i) const { return s_.col(i); }
  Vector centroid() const { return s_.rowwise().mean(); }

 private:
  Matrix s_;
};

/// Canonical Gram matrix of a simplex and its pseudoinverse.
class GramPair {
 public:
  /// From a canonical Gram matrix M (centered, PSD, rank n-1).
  static GramPair from_gram(const Matrix& m, const Tolerances& tol = {}) {
    const SymmetricMatrix sym(m);
    return GramPair(sym.matrix(), invert(sym, tol));
  }

  /// From a canonical pseudoinverse Gram matrix M+ (e.g. a Laplacian).
  static GramPair from_pseudoinverse(const Matrix& mdag, const Tolerances& tol = {}) {
    const SymmetricMatrix sym(mdag);
    return GramPair(invert(sym, tol), sym.matrix());
  }

  Index order() const noexcept { return m_.rows(); }
  const Matrix& gram() const noexcept { return m_; }
  const Matrix& pseudoinverse() const noexcept { return mdag_; }

 private:
  GramPair(Matrix m, Matrix mdag) : m_(std::move(m)), mdag_(std::move(mdag)) {}

  static Matrix invert(const SymmetricMatrix& a, const Tolerances& tol) {
    const Index n = a.order();
    if (n < 2) throw Error(ErrorCode::FaceTooSmall, "a Gram pair needs at least 2 vertices");
    const double scale = std::max(max_abs(a.matrix()), 1e-300);
    if ((a.matrix() * Vector::Ones(n)).cwiseAbs().maxCoeff() > 1e-9 * scale) {
      throw Error(ErrorCode::RankDeficient, "Gram matrix is not centered (Mu != 0)");
    }
    try {
      return pseudoinverse_rank_deficient_by_one(a, tol.zero_eigenvalue);
    } catch (const Error& e) {
      throw Error(ErrorCode::DegenerateSimplex, e.what());
    }
  }

  Matrix m_;
  Matrix mdag_;
};

enum class AngleKind { acute, right, obtuse };

inline const char* to_string(AngleKind k) {
  switch (k) {
    case AngleKind::acute: return "acute";
    case AngleKind::right: return "right";
    case AngleKind::obtuse: return "obtuse";
  }
  return "?";
}

/// Dihedral angle between the facets opposite vertices i and j.
struct DihedralAngle {
  Index i = 0;
  Index j = 0;
  double cosine = 0.0;  // cos(pi - phi_ij)
  double angle = 0.0;   // phi_ij in radians
  AngleKind kind = AngleKind::right;
};

struct AngleClassification {
  double tolerance = 0.0;
  std::vector<DihedralAngle> pairs;  // i < j, lexicographic

  std::size_t count(AngleKind k) const {
    return static_cast<std::size_t>(std::count_if(pairs.begin(), pairs.end(), [k](const auto& p) { return p.kind == k; }));
  }

  const DihedralAngle* find(Index i, Index j) const {
    if (i > j) std::swap(i, j);
    for (const auto& p : pairs)
      if (p.i == i && p.j == j) return &p;
    return nullptr;
  }
};

/// Vertex coordinates (s_i)_k = (z_k)_i / sqrt(mu_k) from the nonzero
/// eigenpairs of Q; the Gram matrix S^T S is Q+.
inline SimplexEmbedding embed_from_laplacian(const LaplacianMatrix& q) {
  const EigenDecomposition ed = eigh(SymmetricMatrix(q.matrix()));
  const Index n = q.order();
  Matrix s(n - 1, n);
  for (Index k = 0; k + 1 < n; ++k) s.row(k) = ed.vectors.col(k).transpose() / std::sqrt(ed.values(k));
  return SimplexEmbedding(std::move(s));
}

/// Canonical Gram pair of any representative vertex matrix (one column per
/// vertex, any number of rows).
inline GramPair canonical_gram(const Matrix& vertices, const Tolerances& tol = {}) {
  require_finite(vertices, "vertex matrix");
  const Index n = vertices.cols();
  if (n < 2) throw Error(ErrorCode::DegenerateSimplex, "a simplex needs at least 2 vertices");
  if (vertices.rows() < n - 1) {
    throw Error(ErrorCode::DegenerateSimplex, std::to_string(n) + " vertices cannot be affinely independent in " +
                                                  std::to_string(vertices.rows()) + " dimensions");
  }
  const Matrix m = center(vertices.transpose() * vertices);
  return GramPair::from_gram(m, tol);
}

inline GramPair canonical_gram(const SimplexEmbedding& s, const Tolerances& tol = {}) {
  return canonical_gram(s.vertices(), tol);
}

inline AngleClassification dihedral_angles(const GramPair& gp, const Tolerances& tol = {}) {
  const Matrix& p = gp.pseudoinverse();
  const Index n = gp.order();
  AngleClassification out;
  out.tolerance = tol.angle * p.diagonal().cwiseAbs().maxCoeff();
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      DihedralAngle a;
      a.i = i;
      a.j = j;
      a.cosine = p(i, j) / std::sqrt(p(i, i) * p(j, j));
      a.angle = std::numbers::pi - std::acos(std::clamp(a.cosine, -1.0, 1.0));
      if (p(i, j) > out.tolerance) {
        a.kind = AngleKind::obtuse;
      } else if (p(i, j) < -out.tolerance) {
        a.kind = AngleKind::acute;
      } else {
        a.kind = AngleKind::right;
      }
      out.pairs.push_back(a);
    }
  }
  return out;
}

inline bool is_hyperacute(const GramPair& gp, const Tolerances& tol = {}) {
  return dihedral_angles(gp, tol).count(AngleKind::obtuse) == 0;
}

// ---------------------------------------------------------------------------
// Faces

/// Checks an ordered vertex subset against n; returns it as an index list.
inline std::vector<Index> checked_subset(const std::vector<Index>& subset, Index n) {
  if (subset.empty()) throw Error(ErrorCode::EmptySubset, "vertex subset is empty");
  std::set<Index> seen;
  for (Index v : subset) {
    if (v < 0 || v >= n) {
      throw Error(ErrorCode::IndexOutOfRange, "index " + std::to_string(v) + " outside 0.." + std::to_string(n - 1));
    }
    if (!seen.insert(v).second) throw Error(ErrorCode::DuplicateIndex, "index " + std::to_string(v) + " repeated");
  }
  return subset;
}

/// Squared distances of the face on `subset`: the corresponding submatrix.
inline Matrix face_distance(const Matrix& d, const std::vector<Index>& subset) {
  require_square(d, "distance matrix");
  const auto v = checked_subset(subset, d.rows());
  return submatrix(d, v, v);
}

/// Canonical Gram pair of the face on `subset`: the centered submatrix of M.
inline GramPair face_gram(const GramPair& gp, const std::vector<Index>& subset, const Tolerances& tol = {}) {
  const auto v = checked_subset(subset, gp.order());
  if (v.size() < 2) throw Error(ErrorCode::FaceTooSmall, "a face Gram needs at least 2 vertices");
  return GramPair::from_gram(center(submatrix(gp.gram(), v, v)), tol);
}

// ---------------------------------------------------------------------------
// Circumsphere and volume

struct CircumsphereReport {
  Vector center;         // S r
  double radius = 0.0;   // R
  double max_deviation = 0.0;  // max_i | |Sr - s_i| - R |

  bool passed(double rel = 1e-8) const { return max_deviation <= rel * radius; }
};

inline CircumsphereReport circumsphere_check(const SimplexEmbedding& s, const FiedlerBlocks& fb) {
  if (fb.r.size() != s.vertex_count()) {
    throw Error(ErrorCode::DimensionMismatch, "circumcenter coordinates do not match the vertex count");
  }
  CircumsphereReport rep;
  rep.center = s.vertices() * fb.r;
  rep.radius = fb.radius;
  for (Index i = 0; i < s.vertex_count(); ++i) {
    const double dist = (rep.center - s.vertices().col(i)).norm();
    rep.max_deviation = std::max(rep.max_deviation, std::abs(dist - fb.radius));
  }
  return rep;
}

/// Volume from the Cayley-Menger determinant:
///   vol^2 = (-1)^n det[0 u^T; u D] / ((n-1)!^2 2^(n-1)).
inline double cayley_menger_volume(const Matrix& d) {
  require_square(d, "distance matrix");
  require_finite(d, "distance matrix");
  const Index n = d.rows();
  if (n < 2) throw Error(ErrorCode::DegenerateDistanceMatrix, "need at least 2 vertices");

  const LogDeterminant det = log_determinant(cayley_menger_matrix(d));
  const int sign = (n % 2 == 0 ? 1 : -1) * det.sign;
  const double nm1 = static_cast<double>(n - 1);
  const double log_denominator = 2.0 * std::lgamma(nm1 + 1.0) + nm1 * std::log(2.0);
  const double log_vol2 = det.log_abs - log_denominator;

  // Reference: a regular simplex whose squared edge is the largest entry.
  const double top = max_abs(d);
  const double log_reference = top > 0.0 ? nm1 * std::log(top) + std::log(static_cast<double>(n)) - log_denominator
                                         : -std::numeric_limits<double>::infinity();
  if (sign <= 0 || log_vol2 <= std::log(1e-12) + log_reference) {
    throw Error(ErrorCode::DegenerateDistanceMatrix,
                "squared volume is not positive (degenerate or non-Euclidean distances)");
  }
  return std::exp(0.5 * log_vol2);
}

}  // namespace resgeom
