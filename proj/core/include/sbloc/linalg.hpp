#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "sbloc/errors.hpp"

namespace sbloc {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major. Carries A, C and the unstructured X, D, B.
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Square matrix that is zero off the main diagonal, stored as its diagonal.
struct DiagonalMatrix {
  ComplexVector diag;

  DiagonalMatrix() = default;
  explicit DiagonalMatrix(std::size_t dim) : diag(ComplexVector::Zero(static_cast<Eigen::Index>(dim))) {}
  explicit DiagonalMatrix(ComplexVector d) : diag(std::move(d)) {}

  std::size_t dim() const { return static_cast<std::size_t>(diag.size()); }
  ComplexMatrix to_dense() const;
};

bool all_finite(const ComplexMatrix& a);

/// Matrix scalar product sum_ij conj(a_ij) b_ij, i.e. tr(A^H B).
Complex frob_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// Sum of squared real and imaginary parts.
double frob_norm_sq(const ComplexMatrix& a);

ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

/// Conjugate transpose.
ComplexMatrix adjoint(const ComplexMatrix& a);

/// Default cap on the number of entries kron() will materialise.
inline constexpr std::size_t kKronMaxEntries = 10'000;

/// Kronecker product. Test-scale oracle only; refuses outputs larger than
/// max_entries.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   std::size_t max_entries = kKronMaxEntries);

/// Column-wise stacking into a (rows*cols) x 1 vector.
ComplexVector vec(const ComplexMatrix& x);

/// Inverse of vec() for a given shape.
ComplexMatrix unvec(const ComplexVector& v, std::size_t rows, std::size_t cols);

/// Moore-Penrose inverse through an SVD. Singular values below
/// max(rows, cols) * eps * sigma_max are treated as zero.
ComplexMatrix pinv(const ComplexMatrix& a);

struct Solvability {
  bool consistent = false;
  /// ||A A+ C (A^H)+ A^H - C||_F / ||C||_F (0 when C = 0).
  double relative_residual = 0.0;
  /// A+ C (A^H)+, the Q = 0 member of the general solution.
  ComplexMatrix least_norm_x;
};

inline constexpr std::size_t kSolvableMaxColumns = 64;
inline constexpr double kSolvableTolerance = 1e-8;

/// Decides whether A X A^H = C has an exact solution.
Solvability check_solvable(const ComplexMatrix& a, const ComplexMatrix& c,
                           std::size_t max_columns = kSolvableMaxColumns);

} // namespace sbloc
