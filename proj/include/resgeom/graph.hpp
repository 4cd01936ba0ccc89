#pragma once

// Weighted graphs, their Laplacian matrices, and the translation between the
// two. A Laplacian here is a symmetric matrix with non-positive off-diagonal
// entries, zero row sums, and a connected off-diagonal pattern.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "resgeom/errors.hpp"
#include "resgeom/linalg.hpp"

namespace resgeom {

struct Link {
  Index i = 0;  // i < j
  Index j = 0;
  double weight = 0.0;

  friend bool operator==(const Link&, const Link&) = default;
};

namespace detail {

// Union-find would do too; a BFS over the adjacency list is enough here.
inline bool connected(Index n, const std::vector<Link>& links) {
  if (n <= 1) return true;
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n));
  for (const Link& l : links) {
    adj[static_cast<std::size_t>(l.i)].push_back(l.j);
    adj[static_cast<std::size_t>(l.j)].push_back(l.i);
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<Index> stack{0};
  seen[0] = true;
  Index reached = 1;
  while (!stack.empty()) {
    const Index x = stack.back();
    stack.pop_back();
    for (Index y : adj[static_cast<std::size_t>(x)]) {
      if (!seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = true;
        ++reached;
        stack.push_back(y);
      }
    }
  }
  return reached == n;
}

}  // namespace detail

/// Connected graph with positive link weights. Parallel links are merged by
/// summing their weights; links are stored with i < j, sorted.
class WeightedGraph {
 public:
  WeightedGraph(std::vector<std::string> labels, const std::vector<Link>& links) : labels_(std::move(labels)) {
    const Index n = node_count();
    if (n < 2) throw Error(ErrorCode::TooFewNodes, "graph needs at least 2 nodes, got " + std::to_string(n));

    std::map<std::pair<Index, Index>, double> merged;
    for (const Link& l : links) {
      if (l.i < 0 || l.j < 0 || l.i >= n || l.j >= n) {
        throw Error(ErrorCode::IndexOutOfRange, "link endpoint outside 0.." + std::to_string(n - 1));
      }
      if (l.i == l.j) throw Error(ErrorCode::SelfLoop, "self-loop on node " + labels_[static_cast<std::size_t>(l.i)]);
      if (!std::isfinite(l.weight) || !(l.weight > 0.0)) {
        throw Error(ErrorCode::NonPositiveWeight, "link weight " + std::to_string(l.weight));
      }
      merged[{std::min(l.i, l.j), std::max(l.i, l.j)}] += l.weight;
    }
    links_.reserve(merged.size());
    for (const auto& [key, w] : merged) links_.push_back({key.first, key.second, w});

    if (!detail::connected(n, links_)) throw Error(ErrorCode::Disconnected, "graph is not connected");
  }

  Index node_count() const noexcept { return static_cast<Index>(labels_.size()); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<Link>& links() const noexcept { return links_; }

  std::optional<Index> index_of(std::string_view label) const {
    for (std::size_t k = 0; k < labels_.size(); ++k)
      if (labels_[k] == label) return static_cast<Index>(k);
    return std::nullopt;
  }

  std::vector<double> degrees() const {
    std::vector<double> d(labels_.size(), 0.0);
    for (const Link& l : links_) {
      d[static_cast<std::size_t>(l.i)] += l.weight;
      d[static_cast<std::size_t>(l.j)] += l.weight;
    }
    return d;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<Link> links_;
};

// ---------------------------------------------------------------------------
// Edge-list parsing

inline WeightedGraph parse_graph(std::string_view text) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, Index> index;
  std::vector<Link> links;

  auto intern = [&](const std::string& label) {
    auto it = index.find(label);
    if (it != index.end()) return it->second;
    const Index id = static_cast<Index>(labels.size());
    labels.push_back(label);
    index.emplace(label, id);
    return id;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    std::vector<std::string> fields;
    std::istringstream in{std::string(line)};
    for (std::string tok; in >> tok;) fields.push_back(tok);
    if (fields.empty() || fields.front().front() == '#') continue;

    const std::string where = "line " + std::to_string(line_no);
    if (fields.size() != 3) {
      throw Error(ErrorCode::SyntaxError, where + ": expected '<label_a> <label_b> <weight>', got " +
                                              std::to_string(fields.size()) + " fields");
    }
    const std::string& w = fields[2];
    double weight = 0.0;
    const auto [end, ec] = std::from_chars(w.data(), w.data() + w.size(), weight);
    if (ec != std::errc() || end != w.data() + w.size() || !std::isfinite(weight)) {
      throw Error(ErrorCode::SyntaxError, where + ": weight '" + w + "' is not a finite decimal number");
    }
    if (!(weight > 0.0)) throw Error(ErrorCode::NonPositiveWeight, where + ": weight " + w);
    if (fields[0] == fields[1]) throw Error(ErrorCode::SelfLoop, where + ": self-loop on " + fields[0]);

    const Index a = intern(fields[0]);
    const Index b = intern(fields[1]);
    links.push_back({a, b, weight});
  }
  return WeightedGraph(std::move(labels), links);
}

// ---------------------------------------------------------------------------
// Validation

/// Outcome of checking the Laplacian properties of a square matrix. The
/// combinatorial properties are symmetric, nonpositive_offdiagonal,
/// zero_row_sums and irreducible; the spectral ones are
/// positive_semidefinite, single_zero_eigenvalue and constant_null_vector.
struct ValidationReport {
  bool symmetric = false;
  bool nonpositive_offdiagonal = false;
  bool zero_row_sums = false;
  bool irreducible = false;
  bool positive_semidefinite = false;
  bool single_zero_eigenvalue = false;
  bool constant_null_vector = false;

  double scale = 0.0;              // max |A_ii| (or max |A_ij| when the diagonal vanishes)
  double entry_tolerance = 0.0;    // laplacian tolerance * scale
  double eigen_threshold = 0.0;    // zero_eigenvalue tolerance * mu_max
  double max_asymmetry = 0.0;
  double max_positive_offdiagonal = 0.0;
  double max_abs_row_sum = 0.0;
  Vector eigenvalues;  // of the symmetric part, descending

  /// Verdict from the combinatorial properties.
  bool verdict() const { return symmetric && nonpositive_offdiagonal && zero_row_sums && irreducible; }

  /// Verdict from the sign property plus the spectral properties.
  bool spectral_verdict() const {
    return nonpositive_offdiagonal && positive_semidefinite && single_zero_eigenvalue && constant_null_vector;
  }

  /// The two characterizations must agree on every input.
  bool consistent() const { return verdict() == spectral_verdict(); }

  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    if (!symmetric) out.emplace_back("(i) symmetric");
    if (!nonpositive_offdiagonal) out.emplace_back("(ii) non-positive off-diagonal");
    if (!zero_row_sums) out.emplace_back("(iii) zero row/column sums");
    if (!irreducible) out.emplace_back("(iv) irreducible");
    if (!positive_semidefinite) out.emplace_back("(i)sigma positive semidefinite");
    if (!single_zero_eigenvalue) out.emplace_back("(ii)sigma single zero eigenvalue");
    if (!constant_null_vector) out.emplace_back("(iii)sigma constant null vector");
    return out;
  }
};

inline ValidationReport validate_laplacian(const Matrix& a, const Tolerances& tol = {}) {
  require_square(a, "matrix");
  require_finite(a, "matrix");
  const Index n = a.rows();
  ValidationReport rep;

  double scale = n > 0 ? a.diagonal().cwiseAbs().maxCoeff() : 0.0;
  if (scale == 0.0) scale = max_abs(a);
  if (scale == 0.0) scale = 1.0;
  rep.scale = scale;
  rep.entry_tolerance = tol.laplacian * scale;
  const double eps = rep.entry_tolerance;

  rep.max_asymmetry = max_abs(a - a.transpose());
  rep.symmetric = rep.max_asymmetry <= eps;

  double max_pos = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j) max_pos = std::max(max_pos, a(i, j));
  rep.max_positive_offdiagonal = max_pos;
  rep.nonpositive_offdiagonal = max_pos <= eps;

  const double row = n > 0 ? a.rowwise().sum().cwiseAbs().maxCoeff() : 0.0;
  const double col = n > 0 ? a.colwise().sum().cwiseAbs().maxCoeff() : 0.0;
  rep.max_abs_row_sum = std::max(row, col);
  rep.zero_row_sums = rep.max_abs_row_sum <= eps;

  // Irreducibility: the pattern of non-negligible off-diagonal entries
  // (in either triangle) must connect all indices.
  std::vector<Link> pattern;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (std::abs(a(i, j)) > eps || std::abs(a(j, i)) > eps) pattern.push_back({i, j, 1.0});
  rep.irreducible = detail::connected(n, pattern);

  // Spectral checks on the symmetric part; PSD is only meaningful when the
  // matrix is symmetric to begin with.
  const Matrix sym = 0.5 * (a + a.transpose());
  const EigenDecomposition ed = eigh(SymmetricMatrix(sym));
  rep.eigenvalues = ed.values;
  const double mu_max = n > 0 ? ed.values.cwiseAbs().maxCoeff() : 0.0;
  rep.eigen_threshold = tol.zero_eigenvalue * mu_max;
  const double smallest = n > 0 ? ed.values(n - 1) : 0.0;
  rep.positive_semidefinite = rep.symmetric && smallest >= -rep.eigen_threshold;
  rep.single_zero_eigenvalue = n > 0 && count_zero_eigenvalues(ed.values, tol.zero_eigenvalue) == 1;

  if (n > 0) {
    Index k0 = 0;
    for (Index k = 1; k < n; ++k)
      if (std::abs(ed.values(k)) < std::abs(ed.values(k0))) k0 = k;
    const Vector z = ed.vectors.col(k0);
    const double mean = z.mean();
    rep.constant_null_vector = std::abs(ed.values(k0)) <= rep.eigen_threshold &&
                               (z.array() - mean).abs().maxCoeff() <= 1e-6;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// LaplacianMatrix

/// Validated Laplacian. The pseudoinverse is computed on first use and
/// shared between copies; construction and the cache are thread-safe.
class LaplacianMatrix {
 public:
  /// Validates and throws NotALaplacian listing the failed properties.
  static LaplacianMatrix from_matrix(const Matrix& q, const Tolerances& tol = {}) {
    const ValidationReport rep = validate_laplacian(q, tol);
    if (!rep.verdict()) {
      std::string msg;
      for (const auto& f : rep.failures()) msg += (msg.empty() ? "" : ", ") + f;
      throw Error(ErrorCode::NotALaplacian, "failed " + msg);
    }
    return unchecked(0.5 * (q + q.transpose()));
  }

  /// For matrices that are Laplacian by construction.
  static LaplacianMatrix unchecked(Matrix q) { return LaplacianMatrix(std::move(q)); }

  Index order() const noexcept { return q_.rows(); }
  const Matrix& matrix() const noexcept { return q_; }
  double operator()(Index i, Index j) const { return q_(i, j); }

  const Matrix& pseudoinverse() const {
    std::call_once(cache_->once, [this] { cache_->pinv = laplacian_pseudoinverse(q_); });
    return cache_->pinv;
  }

 private:
  struct Cache {
    std::once_flag once;
    Matrix pinv;
  };

  explicit LaplacianMatrix(Matrix q) : q_(std::move(q)), cache_(std::make_shared<Cache>()) {}

  Matrix q_;
  std::shared_ptr<Cache> cache_;
};

inline LaplacianMatrix build_laplacian(const WeightedGraph& g) {
  const Index n = g.node_count();
  Matrix q = Matrix::Zero(n, n);
  for (const Link& l : g.links()) {
    q(l.i, l.j) -= l.weight;
    q(l.j, l.i) -= l.weight;
    q(l.i, l.i) += l.weight;
    q(l.j, l.j) += l.weight;
  }
  return LaplacianMatrix::unchecked(std::move(q));
}

/// Inverse of build_laplacian. Labels are "0".."n-1"; entries smaller in
/// magnitude than the validation tolerance are not links.
inline WeightedGraph graph_from_laplacian(const Matrix& q, const Tolerances& tol = {}) {
  const LaplacianMatrix lap = LaplacianMatrix::from_matrix(q, tol);
  const Index n = lap.order();
  double scale = lap.matrix().diagonal().cwiseAbs().maxCoeff();
  if (scale == 0.0) scale = 1.0;
  std::vector<std::string> labels;
  for (Index i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  std::vector<Link> links;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (-lap(i, j) > tol.laplacian * scale) links.push_back({i, j, -lap(i, j)});
  return WeightedGraph(std::move(labels), links);
}

/// Weighted spanning-tree count: product of the nonzero eigenvalues over n.
inline double spanning_tree_count(const LaplacianMatrix& q) {
  const EigenDecomposition ed = eigh(SymmetricMatrix(q.matrix()));
  const Index n = q.order();
  double product = 1.0;
  for (Index k = 0; k + 1 < n; ++k) product *= ed.values(k);
  return product / static_cast<double>(n);
}

}  // namespace resgeom
