#pragma once

#include <cstddef>
#include <vector>

#include "sbloc/linalg.hpp"

namespace sbloc {

/// Entrywise non-negative, finite shrinkage thresholds.
class ThresholdMatrix {
public:
  ThresholdMatrix() = default;
  ThresholdMatrix(std::size_t rows, std::size_t cols, double value);
  explicit ThresholdMatrix(RealMatrix values);

  std::size_t rows() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values_.cols()); }
  double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const RealMatrix& values() const { return values_; }

  /// Copy with every entry multiplied by factor (factor >= 0).
  ThresholdMatrix scaled(double factor) const;

private:
  RealMatrix values_;
};

/// argmin_x lambda |x| + (x - b)^2 / 2 = sgn(b) max(|b| - lambda, 0).
double shrink_real(double b, double lambda);

/// Real and imaginary parts shrunk independently with the same threshold.
/// Caller guarantees threshold >= 0; this is the fused path used by solvers.
inline Complex shrink_entry(Complex b, double threshold) {
  auto s = [threshold](double v) {
    const double mag = (v < 0.0 ? -v : v) - threshold;
    return mag > 0.0 ? (v < 0.0 ? -mag : mag) : 0.0;
  };
  return {s(b.real()), s(b.imag())};
}

ComplexMatrix shrink_complex(const ComplexMatrix& b, double threshold);
ComplexMatrix shrink_complex(const ComplexMatrix& b, const ThresholdMatrix& thresholds);
ComplexVector shrink_complex(const ComplexVector& b, double threshold);

/// l1 norm with the componentwise convention sum |Re| + |Im|.
double l1_norm(const ComplexMatrix& x);
double l1_norm(const ComplexVector& x);

} // namespace sbloc
