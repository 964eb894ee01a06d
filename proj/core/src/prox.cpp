#include "sbloc/prox.hpp"

#include <cmath>
#include <string>

namespace sbloc {

namespace {

void check_threshold(double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw ParameterError("shrinkage threshold must be finite and >= 0, got " + std::to_string(t));
}

} // namespace

ThresholdMatrix::ThresholdMatrix(std::size_t rows, std::size_t cols, double value) {
  check_threshold(value);
  values_ = RealMatrix::Constant(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols), value);
}

ThresholdMatrix::ThresholdMatrix(RealMatrix values) : values_(std::move(values)) {
  for (Eigen::Index i = 0; i < values_.size(); ++i)
    check_threshold(values_.data()[i]);
}

ThresholdMatrix ThresholdMatrix::scaled(double factor) const {
  check_threshold(factor);
  ThresholdMatrix out;
  out.values_ = values_ * factor;
  return out;
}

double shrink_real(double b, double lambda) {
  check_threshold(lambda);
  return shrink_entry(Complex(b, 0.0), lambda).real();
}

ComplexMatrix shrink_complex(const ComplexMatrix& b, double threshold) {
  check_threshold(threshold);
  ComplexMatrix out(b.rows(), b.cols());
  for (Eigen::Index i = 0; i < b.size(); ++i)
    out.data()[i] = shrink_entry(b.data()[i], threshold);
  return out;
}

ComplexMatrix shrink_complex(const ComplexMatrix& b, const ThresholdMatrix& thresholds) {
  if (static_cast<std::size_t>(b.rows()) != thresholds.rows() ||
      static_cast<std::size_t>(b.cols()) != thresholds.cols())
    throw DimensionError("shrink_complex: threshold shape does not match the argument");
  ComplexMatrix out(b.rows(), b.cols());
  const double* t = thresholds.values().data();
  for (Eigen::Index i = 0; i < b.size(); ++i)
    out.data()[i] = shrink_entry(b.data()[i], t[i]);
  return out;
}

ComplexVector shrink_complex(const ComplexVector& b, double threshold) {
  check_threshold(threshold);
  ComplexVector out(b.size());
  for (Eigen::Index i = 0; i < b.size(); ++i)
    out(i) = shrink_entry(b(i), threshold);
  return out;
}

double l1_norm(const ComplexMatrix& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    s += std::abs(x.data()[i].real()) + std::abs(x.data()[i].imag());
  return s;
}

double l1_norm(const ComplexVector& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    s += std::abs(x(i).real()) + std::abs(x(i).imag());
  return s;
}

} // namespace sbloc
