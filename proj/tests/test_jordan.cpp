#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace wigner;
using wigner::testing::phase_aligned_distance;

namespace {

SuperOperator block_map(int n) {
  return SuperOperator::from_function(n, 2 * n, [n](const Matrix& a) -> Matrix {
    Matrix out = Matrix::Zero(2 * n, 2 * n);
    out.topLeftCorner(n, n) = a;
    out.bottomRightCorner(n, n) = a.transpose();
    return out;
  });
}

Matrix upper_identity(int n) {
  Matrix e = Matrix::Zero(2 * n, 2 * n);
  e.topLeftCorner(n, n) = identity(n);
  return e;
}

}  // namespace

TEST(JordanDecompose, ConjugationIsPurelyHomomorphic) {
  SeededRandomSource rng(1);
  const auto d = jordan_decompose(SuperOperator::conjugation(haar_unitary(4, rng)));
  EXPECT_EQ(d.e1.rank(), 4);
  EXPECT_EQ(d.e2.rank(), 0);
  EXPECT_LE((d.e1.matrix() - identity(4)).norm(), 1e-9);
  EXPECT_EQ(d.center_dim, 1);
}

TEST(JordanDecompose, TransposeIsPurelyAntiHomomorphic) {
  const auto d = jordan_decompose(SuperOperator::transpose(3));
  EXPECT_EQ(d.e1.rank(), 0);
  EXPECT_EQ(d.e2.rank(), 3);
  EXPECT_LE((d.e2.matrix() - identity(3)).norm(), 1e-9);
}

TEST(JordanDecompose, BlockMapRecoversBothSummands) {
  for (int n : {2, 3, 4}) {
    const auto d = jordan_decompose(block_map(n));
    const Matrix upper = upper_identity(n);
    const Matrix lower = identity(2 * n) - upper;
    EXPECT_LE((d.e1.matrix() - upper).norm(), 1e-9) << "n=" << n;
    EXPECT_LE((d.e2.matrix() - lower).norm(), 1e-9) << "n=" << n;
    EXPECT_EQ(d.e1.rank(), n);
    EXPECT_EQ(d.e2.rank(), n);
    EXPECT_NEAR(d.e1.matrix().trace().real(), n, 1e-9);
    EXPECT_LE(d.centrality_residual, 1e-9);
    EXPECT_LE(d.hom_residual, 1e-9);
    EXPECT_LE(d.antihom_residual, 1e-9);
    EXPECT_EQ(d.center_dim, 2);
    EXPECT_EQ(d.algebra_dim, 2 * n * n);
  }
}

TEST(JordanDecompose, RotatedBlockMap) {
  SeededRandomSource rng(2);
  const int n = 3;
  const Matrix w = haar_unitary(2 * n + 1, rng);
  const SuperOperator base = block_map(n);
  const SuperOperator l = SuperOperator::from_function(n, 2 * n + 1, [&](const Matrix& a) -> Matrix {
    Matrix padded = Matrix::Zero(2 * n + 1, 2 * n + 1);
    padded.topLeftCorner(2 * n, 2 * n) = base(a);
    return w * padded * w.adjoint();
  });
  const auto d = jordan_decompose(l);
  Matrix upper = Matrix::Zero(2 * n + 1, 2 * n + 1);
  upper.topLeftCorner(n, n) = identity(n);
  Matrix lower = Matrix::Zero(2 * n + 1, 2 * n + 1);
  lower.block(n, n, n, n) = identity(n);
  EXPECT_LE((d.e1.matrix() - w * upper * w.adjoint()).norm(), 1e-8);
  EXPECT_LE((d.e2.matrix() - w * lower * w.adjoint()).norm(), 1e-8);
}

TEST(JordanDecompose, NonJordanMapIsUnclassifiable) {
  SeededRandomSource rng(3);
  const Matrix b = random_hermitian(3, rng);
  const SuperOperator l = SuperOperator::from_function(3, 3, [&](const Matrix& a) -> Matrix { return b * a * b; });
  try {
    jordan_decompose(l);
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::UnclassifiableSummand || e.code() == ErrorCode::CenterComputationFailure)
        << e.what();
  }
}

TEST(Reconstruct, IdentityGivesScalarImplementer) {
  const SuperOperator l = SuperOperator::identity(4);
  const auto r = reconstruct_implementer(l, jordan_decompose(l));
  EXPECT_EQ(r.verdict, Verdict::unitary);
  ASSERT_TRUE(r.implementer.has_value());
  EXPECT_LE(phase_aligned_distance(*r.implementer, identity(4)), 1e-10);
}

TEST(Reconstruct, UnitaryUpToPhase) {
  SeededRandomSource rng(4);
  for (int n : {2, 3, 5, 7}) {
    const Matrix u0 = haar_unitary(n, rng);
    const SuperOperator l = SuperOperator::conjugation(u0);
    const auto r = reconstruct_implementer(l, jordan_decompose(l));
    EXPECT_EQ(r.verdict, Verdict::unitary);
    EXPECT_LE(r.max_conjugation_residual, 1e-8);
    EXPECT_LE(phase_aligned_distance(*r.implementer, u0), 1e-8);
  }
}

TEST(Reconstruct, AntiUnitaryUpToPhase) {
  SeededRandomSource rng(5);
  for (int n : {2, 4, 6}) {
    const Matrix u0 = haar_unitary(n, rng);
    const SuperOperator l =
        SuperOperator::from_function(n, n, [&](const Matrix& a) -> Matrix { return u0 * a.transpose() * u0.adjoint(); });
    const auto r = reconstruct_implementer(l, jordan_decompose(l));
    EXPECT_EQ(r.verdict, Verdict::antiunitary);
    EXPECT_LE(r.max_conjugation_residual, 1e-8);
    EXPECT_LE(phase_aligned_distance(*r.implementer, u0), 1e-8);
  }
}

TEST(Reconstruct, BlockMapIsMixed) {
  const SuperOperator l = block_map(3);
  const auto r = reconstruct_implementer(l, jordan_decompose(l));
  EXPECT_EQ(r.verdict, Verdict::mixed);
  EXPECT_FALSE(r.implementer.has_value());
}

TEST(Reconstruct, IsometricTarget) {
  SeededRandomSource rng(6);
  const Matrix v = random_isometry(3, 5, rng);
  const SuperOperator l = SuperOperator::conjugation(v);
  const auto r = reconstruct_implementer(l, jordan_decompose(l));
  EXPECT_EQ(r.verdict, Verdict::unitary);
  EXPECT_LE(phase_aligned_distance(*r.implementer, v), 1e-8);
}
