#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "resgeom/schur.hpp"
#include "resgeom/simplex.hpp"

using namespace resgeom;

namespace {

LaplacianMatrix lap(const std::string& edges) { return build_laplacian(parse_graph(edges)); }

const char* kPath = "a b 1\nb c 1";
const char* kTriangle = "a b 1\nb c 1\nc a 1";

Matrix edge_laplacian(double w) {
  Matrix m(2, 2);
  m << w, -w, -w, w;
  return m;
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InternalConsistency;
}

}  // namespace

TEST(SchurComplement, SeriesPath) {
  EXPECT_LE(max_abs(schur_complement(lap(kPath), {0, 2}).matrix() - edge_laplacian(0.5)), 1e-15);
}

TEST(SchurComplement, TriangleKeepTwo) {
  EXPECT_LE(max_abs(schur_complement(lap(kTriangle), {0, 1}).matrix() - edge_laplacian(1.5)), 1e-15);
}

TEST(SchurComplement, KeepAllIsIdentity) {
  const LaplacianMatrix q = lap(kTriangle);
  EXPECT_EQ(schur_complement(q, {0, 1, 2}).matrix(), q.matrix());
  // kept order is respected
  const LaplacianMatrix p = schur_complement(lap("a b 1\nb c 2\nc a 3"), {2, 1, 0});
  EXPECT_DOUBLE_EQ(p(0, 1), -2.0);
  EXPECT_DOUBLE_EQ(p(0, 2), -3.0);
}

TEST(SchurComplement, SingleKeptNode) {
  const LaplacianMatrix r = schur_complement(lap(kTriangle), {1});
  EXPECT_EQ(r.order(), 1);
  EXPECT_EQ(r(0, 0), 0.0);
}

TEST(SchurComplement, Errors) {
  const LaplacianMatrix q = lap(kPath);
  EXPECT_EQ(code_of([&] { schur_complement(q, {}); }), ErrorCode::EmptyKeptSet);
  EXPECT_EQ(code_of([&] { schur_complement(q, {0, 3}); }), ErrorCode::IndexOutOfRange);
  EXPECT_EQ(code_of([&] { schur_complement(q, {1, 1}); }), ErrorCode::DuplicateIndex);
}

TEST(SchurComplement, ClosureOnRandomGraphs) {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 200; ++t) {
    const Index n = 3 + t % 28;
    const LaplacianMatrix q = build_laplacian(oracle::random_connected_graph(rng, n, 0.15));
    const Index k = 2 + static_cast<Index>(rng() % static_cast<std::uint64_t>(n - 1));
    const auto kept = oracle::random_subset(rng, n, k);
    const Reduction red = schur_complement_detailed(q, kept);
    const ValidationReport rep = validate_laplacian(red.laplacian.matrix());
    EXPECT_TRUE(rep.verdict()) << "n=" << n << " |V|=" << k;
    EXPECT_TRUE(rep.consistent());
  }
}

TEST(KronReduceSingle, Examples) {
  EXPECT_LE(max_abs(kron_reduce_single(lap(kPath), 1).matrix() - edge_laplacian(0.5)), 1e-15);
  EXPECT_LE(max_abs(kron_reduce_single(lap(kTriangle), 2).matrix() - edge_laplacian(1.5)), 1e-15);

  const LaplacianMatrix k3 = kron_reduce_single(build_laplacian(oracle::star_graph(4)), 0);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) EXPECT_NEAR(k3(i, j), i == j ? 2.0 / 3.0 : -1.0 / 3.0, 1e-15);
}

TEST(KronReduceSingle, MatchesBlockFormula) {
  std::mt19937_64 rng(73);
  for (int t = 0; t < 50; ++t) {
    const Index n = 3 + t % 20;
    const LaplacianMatrix q = build_laplacian(oracle::random_connected_graph(rng, n));
    const Index v = static_cast<Index>(rng() % static_cast<std::uint64_t>(n));
    std::vector<Index> rest;
    for (Index i = 0; i < n; ++i)
      if (i != v) rest.push_back(i);
    const Matrix a = kron_reduce_single(q, v).matrix();
    EXPECT_LE(max_abs(a - schur_complement(q, rest).matrix()), 1e-12 * max_abs(q.matrix()));
    EXPECT_TRUE(validate_laplacian(a).verdict());
  }
}

TEST(KronReduceSingle, Errors) {
  EXPECT_EQ(code_of([] { kron_reduce_single(lap("a b 1"), 0); }), ErrorCode::TooSmall);
  EXPECT_EQ(code_of([] { kron_reduce_single(lap(kPath), 3); }), ErrorCode::IndexOutOfRange);
}

TEST(SchurViaPinv, Examples) {
  EXPECT_LE(max_abs(schur_via_pinv(lap(kPath), {0, 2}).matrix() - edge_laplacian(0.5)), 1e-14);
  const LaplacianMatrix q = lap("a b 1\nb c 2\nc d 3\nd a 0.5\na c 4");
  EXPECT_LE(max_abs(schur_via_pinv(q, {0, 1, 2, 3}).matrix() - q.matrix()), 1e-9);
  EXPECT_EQ(code_of([&] { schur_via_pinv(q, {1}); }), ErrorCode::FaceTooSmall);
}

TEST(SchurViaPinv, AgreesWithBlockFormula) {
  std::mt19937_64 rng(79);
  {
    const LaplacianMatrix q = build_laplacian(oracle::random_connected_graph(rng, 15));
    const auto kept = oracle::random_subset(rng, 15, 6);
    EXPECT_LE(max_abs(schur_via_pinv(q, kept).matrix() - schur_complement(q, kept).matrix()), 1e-8);
  }
  for (int t = 0; t < 100; ++t) {
    const Index n = 3 + t % 28;
    const LaplacianMatrix q = build_laplacian(oracle::random_connected_graph(rng, n));
    const auto kept = oracle::random_subset(rng, n, 2 + static_cast<Index>(rng() % static_cast<std::uint64_t>(n - 1)));
    const Matrix block = schur_complement(q, kept).matrix();
    EXPECT_LE(max_abs(schur_via_pinv(q, kept).matrix() - block), 1e-8 * max_abs(block));
  }
}

TEST(Quotient, SameSetsGiveZero) {
  const LaplacianMatrix q = lap("a b 1\nb c 2\nc d 3\nd a 0.5");
  const QuotientReport rep = check_quotient(q, {0, 2}, {0, 2});
  EXPECT_EQ(rep.two_stage_difference, 0.0);
  EXPECT_LE(rep.incremental_difference, 1e-14);
}

TEST(Quotient, PathOfFour) {
  const LaplacianMatrix q = build_laplacian(oracle::path_graph(4));
  const QuotientReport rep = check_quotient(q, {0, 3}, {0, 1, 3}, 9);
  EXPECT_LE(rep.max(), 1e-12);
  EXPECT_EQ(rep.seed, 9u);
  EXPECT_EQ(rep.elimination_order.size(), 2u);
  // series of three unit edges
  EXPECT_LE(max_abs(schur_complement(q, {0, 3}).matrix() - edge_laplacian(1.0 / 3.0)), 1e-15);
}

TEST(Quotient, RandomGraphsAndOrders) {
  std::mt19937_64 rng(83);
  for (int t = 0; t < 100; ++t) {
    const Index n = 3 + t % 28;
    const LaplacianMatrix q = build_laplacian(oracle::random_connected_graph(rng, n));
    const Index kv = 2 + static_cast<Index>(rng() % static_cast<std::uint64_t>(n - 1));
    const auto outer = oracle::random_subset(rng, n, kv);
    const auto pos = oracle::random_subset(rng, kv, 2 + static_cast<Index>(rng() % static_cast<std::uint64_t>(kv - 1)));
    std::vector<Index> inner;
    for (Index p : pos) inner.push_back(outer[static_cast<std::size_t>(p)]);
    const QuotientReport rep = check_quotient(q, inner, outer, static_cast<std::uint64_t>(t));
    EXPECT_LE(rep.max(), 1e-9 * max_abs(q.matrix())) << "n=" << n;
  }
}

TEST(Quotient, Errors) {
  const LaplacianMatrix q = build_laplacian(oracle::path_graph(4));
  EXPECT_EQ(code_of([&] { check_quotient(q, {0, 2}, {0, 1, 3}); }), ErrorCode::SubsetViolation);
}

TEST(ResistancePreservation, Examples) {
  EXPECT_LE(check_resistance_preservation(lap(kTriangle), {0, 1}).max_difference, 1e-15);
  EXPECT_NEAR(resistance_matrix(schur_complement(lap(kPath), {0, 2}))(0, 1), 2.0, 1e-14);
  EXPECT_LE(check_resistance_preservation(lap(kPath), {0, 2}).max_difference, 1e-14);
}

TEST(ResistancePreservation, RandomGraphs) {
  std::mt19937_64 rng(89);
  for (int t = 0; t < 150; ++t) {
    const Index n = 3 + t % 28;
    const LaplacianMatrix q = build_laplacian(oracle::random_connected_graph(rng, n));
    const auto kept = oracle::random_subset(rng, n, 2 + static_cast<Index>(rng() % static_cast<std::uint64_t>(n - 1)));
    EXPECT_LE(check_resistance_preservation(q, kept).max_difference, 1e-9);
  }
}

TEST(HyperacuteClosure, FaceGramEqualsReducedLaplacian) {
  std::mt19937_64 rng(97);
  for (int t = 0; t < 60; ++t) {
    const Index n = 3 + t % 15;
    const LaplacianMatrix q = build_laplacian(oracle::random_connected_graph(rng, n));
    const auto kept = oracle::random_subset(rng, n, 2 + static_cast<Index>(rng() % static_cast<std::uint64_t>(n - 1)));
    const GramPair face = face_gram(GramPair::from_pseudoinverse(q.matrix()), kept);
    const Matrix reduced = schur_complement(q, kept).matrix();
    EXPECT_LE(max_abs(face.pseudoinverse() - reduced), 1e-8 * max_abs(reduced));
    EXPECT_EQ(dihedral_angles(face).count(AngleKind::obtuse), 0u);
  }
}
