#include <gtest/gtest.h>

#include "sbloc/errors.hpp"
#include "sbloc/linalg.hpp"
#include "support.hpp"

using namespace sbloc;
using sbloc::test::random_matrix;

namespace {

ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

double penrose_defect(const ComplexMatrix& a, const ComplexMatrix& p) {
  const double s = std::max(1.0, a.norm() * p.norm());
  double worst = 0.0;
  worst = std::max(worst, (a * p * a - a).norm() / s);
  worst = std::max(worst, (p * a * p - p).norm() / s);
  worst = std::max(worst, (ComplexMatrix(a * p).adjoint() - a * p).norm() / s);
  worst = std::max(worst, (ComplexMatrix(p * a).adjoint() - p * a).norm() / s);
  return worst;
}

} // namespace

TEST(FrobInner, IdentityTrace) { EXPECT_EQ(frob_inner(identity(2), identity(2)), Complex(2.0, 0.0)); }

TEST(FrobInner, SelfIsSquaredNorm) {
  std::mt19937_64 gen(1);
  const auto a = random_matrix(gen, 4, 3);
  const Complex v = frob_inner(a, a);
  EXPECT_NEAR(v.imag(), 0.0, 1e-12);
  EXPECT_GE(v.real(), 0.0);
  EXPECT_NEAR(v.real(), frob_norm_sq(a), 1e-12);
}

TEST(FrobInner, ConjugateSymmetric) {
  std::mt19937_64 gen(2);
  const auto a = random_matrix(gen, 3, 5);
  const auto b = random_matrix(gen, 3, 5);
  EXPECT_LT(std::abs(frob_inner(a, b) - std::conj(frob_inner(b, a))), 1e-12);
}

TEST(FrobInner, AdjointMovesAcross) {
  std::mt19937_64 gen(3);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_matrix(gen, 3, 3);
    const auto b = random_matrix(gen, 3, 3);
    const auto x = random_matrix(gen, 3, 3);
    const auto y = random_matrix(gen, 3, 3);
    const Complex lhs = frob_inner(a * x * b.adjoint(), y);
    const Complex rhs = frob_inner(x, a.adjoint() * y * b);
    EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(FrobInner, LoopOracle) {
  std::mt19937_64 gen(4);
  const auto a = random_matrix(gen, 3, 4);
  const auto b = random_matrix(gen, 3, 4);
  Complex s = 0.0;
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 4; ++j)
      s += std::conj(a(i, j)) * b(i, j);
  EXPECT_LT(std::abs(frob_inner(a, b) - s), 1e-13);
}

TEST(FrobInner, ShapeMismatch) {
  EXPECT_THROW(frob_inner(ComplexMatrix::Zero(2, 3), ComplexMatrix::Zero(3, 2)), DimensionError);
}

TEST(FrobNorm, Basics) {
  EXPECT_EQ(frob_norm_sq(ComplexMatrix::Zero(3, 3)), 0.0);
  ComplexMatrix m(1, 1);
  m(0, 0) = {3.0, 4.0};
  EXPECT_DOUBLE_EQ(frob_norm_sq(m), 25.0);
}

TEST(FrobNorm, PolarisationIdentity) {
  std::mt19937_64 gen(5);
  const auto a = random_matrix(gen, 4, 4);
  const auto b = random_matrix(gen, 4, 4);
  const double na = frob_norm_sq(a), nb = frob_norm_sq(b), re = frob_inner(a, b).real();
  EXPECT_NEAR(frob_norm_sq(a + b), na + 2 * re + nb, 1e-12 * (na + nb));
  EXPECT_NEAR(frob_norm_sq(a - b), na - 2 * re + nb, 1e-12 * (na + nb));
}

TEST(Hadamard, OnesAndIdentityMask) {
  std::mt19937_64 gen(6);
  const auto a = random_matrix(gen, 3, 3);
  EXPECT_EQ(hadamard(a, ComplexMatrix::Ones(3, 3)), a);
  const auto masked = hadamard(a, identity(3));
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j)
      EXPECT_EQ(masked(i, j), i == j ? a(i, j) : Complex(0.0));
}

TEST(Hadamard, LoopOracleAndShape) {
  std::mt19937_64 gen(7);
  const auto a = random_matrix(gen, 3, 3);
  const auto b = random_matrix(gen, 3, 3);
  const auto h = hadamard(a, b);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j)
      EXPECT_LT(std::abs(h(i, j) - a(i, j) * b(i, j)), 1e-15 * std::abs(a(i, j) * b(i, j)));
  EXPECT_THROW(hadamard(a, ComplexMatrix::Zero(3, 2)), DimensionError);
}

TEST(Matmul, IdentityAdjointAndProductRule) {
  std::mt19937_64 gen(8);
  const auto a = random_matrix(gen, 3, 4);
  const auto b = random_matrix(gen, 4, 2);
  EXPECT_EQ(matmul(identity(3), a), a);
  ComplexMatrix i1(1, 1);
  i1(0, 0) = {0.0, 1.0};
  EXPECT_EQ(adjoint(i1)(0, 0), Complex(0.0, -1.0));
  EXPECT_EQ(adjoint(adjoint(a)), a);
  EXPECT_LT((adjoint(matmul(a, b)) - matmul(adjoint(b), adjoint(a))).norm(), 1e-14 * a.norm() * b.norm());
  EXPECT_THROW(matmul(a, a), DimensionError);
}

TEST(Kron, IdentityAndVec) {
  EXPECT_EQ(kron(identity(2), identity(2)), identity(4));
  ComplexMatrix x(2, 2);
  x << 1.0, 3.0, 2.0, 4.0;
  const auto v = vec(x);
  for (int i = 0; i < 4; ++i)
    EXPECT_EQ(v(i), Complex(i + 1.0));
  EXPECT_EQ(unvec(v, 2, 2), x);
}

TEST(Kron, CongruenceIdentity) {
  std::mt19937_64 gen(9);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_matrix(gen, 4, 4);
    const auto x = random_matrix(gen, 4, 4);
    const ComplexVector lhs = kron(a.conjugate(), a) * vec(x);
    const ComplexVector rhs = vec(a * x * a.adjoint());
    EXPECT_LT((lhs - rhs).norm(), 1e-12 * std::max(1.0, rhs.norm()));
  }
}

TEST(Kron, RealSteeringNeedsNoConjugate) {
  std::mt19937_64 gen(10);
  ComplexMatrix a = random_matrix(gen, 3, 4);
  a = a.real().cast<Complex>();
  const auto x = random_matrix(gen, 4, 4);
  EXPECT_LT((kron(a, a) * vec(x) - vec(a * x * a.adjoint())).norm(), 1e-12 * x.norm() * a.squaredNorm());
}

TEST(Kron, SizeGuard) {
  const ComplexMatrix big = ComplexMatrix::Zero(11, 11);
  EXPECT_THROW(kron(big, big), OversizeError);
  EXPECT_NO_THROW(kron(big, big, 20000));
}

TEST(Pinv, TrivialCases) {
  EXPECT_LT((pinv(identity(3)) - identity(3)).norm(), 1e-15);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 2.0;
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = 0.5;
  EXPECT_LT((pinv(d) - expected).norm(), 1e-15);
}

TEST(Pinv, PenroseConditions) {
  std::mt19937_64 gen(11);
  for (int t = 0; t < 10; ++t) {
    const auto a = random_matrix(gen, 5, 8);
    EXPECT_LT(penrose_defect(a, pinv(a)), 1e-10);
    const ComplexMatrix low = random_matrix(gen, 6, 2) * random_matrix(gen, 2, 5);
    EXPECT_LT(penrose_defect(low, pinv(low)), 1e-10);
  }
}

TEST(CheckSolvable, IdentityIsConsistent) {
  std::mt19937_64 gen(12);
  const auto c = random_matrix(gen, 4, 4);
  const auto s = check_solvable(identity(4), c);
  EXPECT_TRUE(s.consistent);
  EXPECT_LT((s.least_norm_x - c).norm(), 1e-12);
}

TEST(CheckSolvable, ConstructedSystems) {
  std::mt19937_64 gen(13);
  for (int t = 0; t < 10; ++t) {
    const auto a = random_matrix(gen, 3, 6);
    const ComplexMatrix c = a * random_matrix(gen, 6, 6) * a.adjoint();
    const auto s = check_solvable(a, c);
    EXPECT_TRUE(s.consistent);
    EXPECT_LT((a * s.least_norm_x * a.adjoint() - c).norm(), 1e-9 * c.norm());
  }
}

TEST(CheckSolvable, RankDeficientInconsistent) {
  std::mt19937_64 gen(14);
  const ComplexMatrix a = random_matrix(gen, 6, 2) * random_matrix(gen, 2, 5);
  const auto s = check_solvable(a, sbloc::test::random_hermitian_psd(gen, 6));
  EXPECT_FALSE(s.consistent);
  EXPECT_GT(s.relative_residual, 1e-3);
}

TEST(CheckSolvable, SizeGuard) {
  EXPECT_THROW(check_solvable(ComplexMatrix::Zero(2, 65), ComplexMatrix::Zero(2, 2)), OversizeError);
}
