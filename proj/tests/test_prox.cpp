#include <gtest/gtest.h>

#include "sbloc/errors.hpp"
#include "sbloc/prox.hpp"
#include "support.hpp"

using namespace sbloc;
using sbloc::test::random_matrix;

namespace {

// argmin over a uniform grid of lambda*|x| + (x - b)^2 / 2
double scan_1d(double b, double lambda, double step) {
  const double lo = std::min(0.0, b) - 0.1, hi = std::max(0.0, b) + 0.1;
  double best_x = lo, best = std::numeric_limits<double>::infinity();
  for (double x = lo; x <= hi; x += step) {
    const double f = lambda * std::abs(x) + 0.5 * (x - b) * (x - b);
    if (f < best) {
      best = f;
      best_x = x;
    }
  }
  // the grid may straddle zero, which is where the kink lives
  if (lambda * 0.0 + 0.5 * b * b <= best)
    best_x = 0.0;
  return best_x;
}

double entry_objective(Complex x, Complex b, double t) {
  return t * (std::abs(x.real()) + std::abs(x.imag())) + 0.5 * std::norm(x - b);
}

} // namespace

TEST(ShrinkReal, Branches) {
  EXPECT_EQ(shrink_real(0.5, 1.0), 0.0);
  EXPECT_EQ(shrink_real(-3.0, 1.0), -2.0);
  EXPECT_EQ(shrink_real(3.0, 1.0), 2.0);
  EXPECT_EQ(shrink_real(-1.0, 1.0), 0.0);
  EXPECT_EQ(shrink_real(2.5, 0.0), 2.5);
  EXPECT_THROW(shrink_real(1.0, -0.1), ParameterError);
}

TEST(ShrinkReal, GridScanOracle) {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> bd(-2.0, 2.0), ld(0.0, 1.5);
  for (int t = 0; t < 100; ++t) {
    const double b = bd(gen), l = ld(gen);
    EXPECT_NEAR(shrink_real(b, l), scan_1d(b, l, 1e-5), 1e-4) << "b=" << b << " lambda=" << l;
  }
}

TEST(ShrinkComplex, TrivialCases) {
  EXPECT_EQ(shrink_complex(ComplexMatrix(ComplexMatrix::Zero(2, 3)), 0.7), ComplexMatrix(ComplexMatrix::Zero(2, 3)));
  ComplexMatrix b(1, 1);
  b(0, 0) = {2.0, 0.5};
  EXPECT_EQ(shrink_complex(b, 1.0)(0, 0), Complex(1.0, 0.0));
}

TEST(ShrinkComplex, ZeroThresholdIsIdentity) {
  std::mt19937_64 gen(22);
  const auto b = random_matrix(gen, 4, 4);
  EXPECT_EQ(shrink_complex(b, 0.0), b);
  EXPECT_EQ(shrink_complex(b, ThresholdMatrix(4, 4, 0.0)), b);
}

TEST(ShrinkComplex, FirstOrderOptimalityProbe) {
  std::mt19937_64 gen(23);
  const auto b = random_matrix(gen, 3, 3);
  const double t = 0.6;
  const auto x = shrink_complex(b, t);
  const double eps = 1e-6;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double f0 = entry_objective(x.data()[i], b.data()[i], t);
    for (Complex d : {Complex(eps, 0), Complex(-eps, 0), Complex(0, eps), Complex(0, -eps)})
      EXPECT_LE(f0, entry_objective(x.data()[i] + d, b.data()[i], t) + 1e-15);
  }
}

TEST(ShrinkComplex, EntrywiseThresholds) {
  std::mt19937_64 gen(24);
  const auto b = random_matrix(gen, 3, 4);
  RealMatrix tv(3, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Eigen::Index i = 0; i < tv.size(); ++i)
    tv.data()[i] = u(gen);
  const auto x = shrink_complex(b, ThresholdMatrix(tv));
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) {
      EXPECT_EQ(x(i, j).real(), shrink_real(b(i, j).real(), tv(i, j)));
      EXPECT_EQ(x(i, j).imag(), shrink_real(b(i, j).imag(), tv(i, j)));
      EXPECT_EQ(x(i, j), shrink_entry(b(i, j), tv(i, j))); // fused path is bit-identical
    }
}

TEST(ShrinkComplex, Errors) {
  EXPECT_THROW(shrink_complex(ComplexMatrix::Zero(2, 2), ThresholdMatrix(2, 3, 1.0)), DimensionError);
  EXPECT_THROW(shrink_complex(ComplexMatrix(ComplexMatrix::Zero(2, 2)), -1.0), ParameterError);
  EXPECT_THROW(ThresholdMatrix(2, 2, -1.0), ParameterError);
  RealMatrix bad = RealMatrix::Zero(2, 2);
  bad(1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(ThresholdMatrix{bad}, ParameterError);
}

TEST(ShrinkComplex, Properties) {
  std::mt19937_64 gen(25);
  for (int t = 0; t < 50; ++t) {
    const auto b1 = random_matrix(gen, 4, 4);
    const auto b2 = random_matrix(gen, 4, 4);
    const double thr = 0.3 + 0.01 * t;
    // non-expansive
    EXPECT_LE((shrink_complex(b1, thr) - shrink_complex(b2, thr)).norm(), (b1 - b2).norm() + 1e-15);
    // real / imaginary decoupling
    const ComplexMatrix re = b1.real().cast<Complex>();
    const ComplexMatrix im = b1.imag().cast<Complex>();
    const ComplexMatrix recombined = shrink_complex(re, thr) + Complex(0, 1) * shrink_complex(im, thr);
    EXPECT_EQ(shrink_complex(b1, thr), recombined);
    // Hermitian in, Hermitian out
    const ComplexMatrix h = b1 + b1.adjoint();
    const auto s = shrink_complex(h, thr);
    EXPECT_EQ(s, ComplexMatrix(s.adjoint()));
  }
}

TEST(L1Norm, ComponentwiseConvention) {
  ComplexMatrix m(1, 2);
  m << Complex(3, -4), Complex(-1, 0);
  EXPECT_DOUBLE_EQ(l1_norm(m), 8.0);
}
