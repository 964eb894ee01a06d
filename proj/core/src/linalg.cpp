#include "sbloc/linalg.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace sbloc {

namespace {

std::string shape(const ComplexMatrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError(std::string(op) + ": shape mismatch " + shape(a) + " vs " + shape(b));
}

} // namespace

ComplexMatrix DiagonalMatrix::to_dense() const {
  ComplexMatrix out = ComplexMatrix::Zero(diag.size(), diag.size());
  out.diagonal() = diag;
  return out;
}

bool all_finite(const ComplexMatrix& a) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const Complex z = a.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      return false;
  }
  return true;
}

Complex frob_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "frob_inner");
  return a.conjugate().cwiseProduct(b).sum();
}

double frob_norm_sq(const ComplexMatrix& a) { return a.squaredNorm(); }

ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "hadamard");
  return a.cwiseProduct(b);
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionError("matmul: inner dimensions differ " + shape(a) + " * " + shape(b));
  return a * b;
}

ComplexMatrix adjoint(const ComplexMatrix& a) { return a.adjoint(); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t max_entries) {
  const auto rows = static_cast<std::size_t>(a.rows() * b.rows());
  const auto cols = static_cast<std::size_t>(a.cols() * b.cols());
  if (rows * cols > max_entries)
    throw OversizeError("kron: output " + std::to_string(rows) + "x" + std::to_string(cols) +
                        " exceeds the limit of " + std::to_string(max_entries) + " entries");
  ComplexMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexVector vec(const ComplexMatrix& x) {
  ComplexVector v(x.size());
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      v(k++) = x(i, j);
  return v;
}

ComplexMatrix unvec(const ComplexVector& v, std::size_t rows, std::size_t cols) {
  if (static_cast<std::size_t>(v.size()) != rows * cols)
    throw DimensionError("unvec: length " + std::to_string(v.size()) + " does not match " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  ComplexMatrix x(rows, cols);
  Eigen::Index k = 0;
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i)
      x(i, j) = v(k++);
  return x;
}

ComplexMatrix pinv(const ComplexMatrix& a) {
  if (a.size() == 0)
    return ComplexMatrix(a.cols(), a.rows());
  const Eigen::MatrixXcd dense = a;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(dense, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw NumericalError("pinv: SVD did not converge");
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double cutoff = static_cast<double>(std::max(a.rows(), a.cols())) *
                        std::numeric_limits<double>::epsilon() * sigma_max;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > cutoff)
      inv(i) = 1.0 / sigma(i);
  ComplexMatrix out = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
  return out;
}

Solvability check_solvable(const ComplexMatrix& a, const ComplexMatrix& c,
                           std::size_t max_columns) {
  if (c.rows() != a.rows() || c.cols() != a.rows())
    throw DimensionError("check_solvable: C must be " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.rows()) + ", got " + shape(c));
  if (static_cast<std::size_t>(a.cols()) > max_columns)
    throw OversizeError("check_solvable: " + std::to_string(a.cols()) +
                        " columns exceed the limit of " + std::to_string(max_columns));
  const ComplexMatrix a_pinv = pinv(a);
  const ComplexMatrix ah_pinv = pinv(a.adjoint());
  Solvability out;
  out.least_norm_x = a_pinv * c * ah_pinv;
  const ComplexMatrix reproduced = a * a_pinv * c * ah_pinv * a.adjoint();
  const double c_norm = c.norm();
  const double diff = (reproduced - c).norm();
  out.relative_residual = c_norm > 0.0 ? diff / c_norm : diff;
  out.consistent = diff <= kSolvableTolerance * c_norm;
  return out;
}

} // namespace sbloc
