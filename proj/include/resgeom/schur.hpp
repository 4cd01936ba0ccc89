#pragma once

// Kron reduction: the Schur complement Q/V^c = Q_VV - Q_VVc Q_VcVc^{-1} Q_VcV
// of a Laplacian onto a kept node set V. The result is again a Laplacian and
// preserves effective resistances among the kept nodes.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "resgeom/errors.hpp"
#include "resgeom/graph.hpp"
#include "resgeom/linalg.hpp"
#include "resgeom/resistance.hpp"

namespace resgeom {

/// Kept and eliminated index sets of an n-node matrix, both in order.
class Partition {
 public:
  Partition(Index n, const std::vector<Index>& kept) : kept_(kept) {
    if (kept.empty()) throw Error(ErrorCode::EmptyKeptSet, "no nodes kept");
    std::vector<bool> in(static_cast<std::size_t>(n), false);
    for (Index v : kept) {
      if (v < 0 || v >= n) {
        throw Error(ErrorCode::IndexOutOfRange, "index " + std::to_string(v) + " outside 0.." + std::to_string(n - 1));
      }
      if (in[static_cast<std::size_t>(v)]) throw Error(ErrorCode::DuplicateIndex, "index " + std::to_string(v) + " repeated");
      in[static_cast<std::size_t>(v)] = true;
    }
    for (Index v = 0; v < n; ++v)
      if (!in[static_cast<std::size_t>(v)]) eliminated_.push_back(v);
  }

  const std::vector<Index>& kept() const noexcept { return kept_; }
  const std::vector<Index>& eliminated() const noexcept { return eliminated_; }

  Matrix kept_block(const Matrix& q) const { return submatrix(q, kept_, kept_); }
  Matrix coupling_block(const Matrix& q) const { return submatrix(q, kept_, eliminated_); }
  Matrix eliminated_block(const Matrix& q) const { return submatrix(q, eliminated_, eliminated_); }

 private:
  std::vector<Index> kept_;
  std::vector<Index> eliminated_;
};

struct Reduction {
  LaplacianMatrix laplacian;
  std::size_t clamped = 0;  // rounding-level positive off-diagonals set to 0
};

namespace detail {

// Symmetrize, zero out positive off-diagonals at rounding level, and rebuild
// the diagonal from the off-diagonal row sums.
inline std::size_t canonicalize_laplacian(Matrix& q) {
  const Index n = q.rows();
  q = 0.5 * (q + q.transpose()).eval();
  double scale = q.diagonal().cwiseAbs().maxCoeff();
  if (scale == 0.0) scale = 1.0;
  const double limit = 1e-12 * scale;
  std::size_t clamped = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && q(i, j) > 0.0) {
        if (q(i, j) > limit) {
          throw Error(ErrorCode::InternalConsistency, "reduction produced a positive off-diagonal entry");
        }
        q(i, j) = 0.0;
        ++clamped;
      }
    }
  }
  for (Index i = 0; i < n; ++i) {
    double off = 0.0;
    for (Index j = 0; j < n; ++j)
      if (j != i) off += q(i, j);
    q(i, i) = -off;
  }
  return clamped / 2;
}

}  // namespace detail

/// One-shot reduction with a Cholesky solve on the eliminated block, which
/// is positive definite for a connected graph.
inline Reduction schur_complement_detailed(const LaplacianMatrix& q, const std::vector<Index>& kept) {
  const Partition part(q.order(), kept);
  if (part.eliminated().empty()) return {LaplacianMatrix::unchecked(part.kept_block(q.matrix())), 0};

  const Matrix qvv = part.kept_block(q.matrix());
  const Matrix qvc = part.coupling_block(q.matrix());
  const Matrix qcc = part.eliminated_block(q.matrix());
  Eigen::LLT<Matrix> llt(qcc);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::InternalConsistency, "eliminated block is not positive definite");
  }
  Matrix reduced = qvv - qvc * llt.solve(Matrix(qvc.transpose()));
  const std::size_t clamped = detail::canonicalize_laplacian(reduced);
  return {LaplacianMatrix::unchecked(std::move(reduced)), clamped};
}

inline LaplacianMatrix schur_complement(const LaplacianMatrix& q, const std::vector<Index>& kept) {
  return schur_complement_detailed(q, kept).laplacian;
}

/// Eliminates one node: Q' + diag(q) - q q^T / d_v, with Q' the Laplacian of
/// the graph without v and q the link weights to v.
inline LaplacianMatrix kron_reduce_single(const LaplacianMatrix& q, Index v) {
  const Index n = q.order();
  require_index(n, v);
  if (n < 3) throw Error(ErrorCode::TooSmall, "single-node elimination needs at least 3 nodes");

  std::vector<Index> rest;
  for (Index i = 0; i < n; ++i)
    if (i != v) rest.push_back(i);
  const Matrix& full = q.matrix();
  Vector w(n - 1);
  for (Index a = 0; a < n - 1; ++a) w(a) = -full(rest[static_cast<std::size_t>(a)], v);
  const double dv = full(v, v);

  Matrix reduced = submatrix(full, rest, rest);  // Q' + diag(q)
  reduced -= w * w.transpose() / dv;
  detail::canonicalize_laplacian(reduced);
  return LaplacianMatrix::unchecked(std::move(reduced));
}

/// Reduction through the pseudoinverse: pinv of the centered submatrix of Q+.
inline LaplacianMatrix schur_via_pinv(const LaplacianMatrix& q, const std::vector<Index>& kept,
                                      const Tolerances& tol = {}) {
  const Partition part(q.order(), kept);
  if (kept.size() < 2) throw Error(ErrorCode::FaceTooSmall, "need at least 2 kept nodes");
  const Matrix sub = center(part.kept_block(q.pseudoinverse()));
  Matrix reduced = pseudoinverse_rank_deficient_by_one(SymmetricMatrix(0.5 * (sub + sub.transpose())), tol.zero_eigenvalue);
  return LaplacianMatrix::unchecked(std::move(reduced));
}

// ---------------------------------------------------------------------------
// Property checks

struct QuotientReport {
  double two_stage_difference = 0.0;    // one-shot vs reduce to V then to W
  double incremental_difference = 0.0;  // one-shot vs single-node eliminations
  std::uint64_t seed = 0;
  std::vector<Index> elimination_order;  // original indices, in the order used

  double max() const { return std::max(two_stage_difference, incremental_difference); }
};

/// Compares Q/(N\W) against [Q/(N\V)]/(V\W) and against eliminating N\W one
/// node at a time in a random order drawn from `seed`.
inline QuotientReport check_quotient(const LaplacianMatrix& q, const std::vector<Index>& inner,
                                     const std::vector<Index>& outer, std::uint64_t seed = 0) {
  const Index n = q.order();
  [[maybe_unused]] const Partition outer_part(n, outer);
  const Partition inner_part(n, inner);
  if (inner.size() < 2) throw Error(ErrorCode::FaceTooSmall, "need at least 2 nodes in the inner set");

  std::vector<Index> inner_positions;
  for (Index w : inner) {
    const auto it = std::find(outer.begin(), outer.end(), w);
    if (it == outer.end()) {
      throw Error(ErrorCode::SubsetViolation, "index " + std::to_string(w) + " is in the inner set but not the outer one");
    }
    inner_positions.push_back(static_cast<Index>(it - outer.begin()));
  }

  QuotientReport rep;
  rep.seed = seed;
  const LaplacianMatrix direct = schur_complement(q, inner);
  const LaplacianMatrix staged = schur_complement(schur_complement(q, outer), inner_positions);
  rep.two_stage_difference = max_abs(direct.matrix() - staged.matrix());

  rep.elimination_order = inner_part.eliminated();
  std::mt19937_64 rng(seed);
  std::shuffle(rep.elimination_order.begin(), rep.elimination_order.end(), rng);

  std::vector<Index> alive(static_cast<std::size_t>(n));
  std::iota(alive.begin(), alive.end(), Index{0});
  LaplacianMatrix current = q;
  for (Index v : rep.elimination_order) {
    const auto pos = std::find(alive.begin(), alive.end(), v) - alive.begin();
    current = kron_reduce_single(current, static_cast<Index>(pos));
    alive.erase(alive.begin() + pos);
  }
  std::vector<Index> final_positions;
  for (Index w : inner)
    final_positions.push_back(static_cast<Index>(std::find(alive.begin(), alive.end(), w) - alive.begin()));
  const Matrix incremental = submatrix(current.matrix(), final_positions, final_positions);
  rep.incremental_difference = max_abs(direct.matrix() - incremental);
  return rep;
}

struct ResistancePreservationReport {
  double max_difference = 0.0;  // max |Omega(Q/V^c)_ab - Omega(Q)_{V[a]V[b]}|
  std::size_t clamped = 0;
};

inline ResistancePreservationReport check_resistance_preservation(const LaplacianMatrix& q,
                                                                  const std::vector<Index>& kept) {
  if (kept.size() < 2) throw Error(ErrorCode::FaceTooSmall, "need at least 2 kept nodes");
  const Reduction red = schur_complement_detailed(q, kept);
  const Matrix reduced_omega = resistance_matrix(red.laplacian).matrix();
  const Matrix restricted = submatrix(resistance_matrix(q).matrix(), kept, kept);
  return {max_abs(reduced_omega - restricted), red.clamped};
}

}  // namespace resgeom
