#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "sbloc/config_io.hpp"
#include "sbloc/linalg.hpp"

namespace sbloc::test {

inline ComplexMatrix random_matrix(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i)
    m.data()[i] = {n(gen), n(gen)};
  return m;
}

inline ComplexVector random_vector(std::mt19937_64& gen, Eigen::Index size, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  ComplexVector v(size);
  for (Eigen::Index i = 0; i < size; ++i)
    v(i) = {n(gen), n(gen)};
  return v;
}

inline ComplexMatrix random_hermitian_psd(std::mt19937_64& gen, Eigen::Index n) {
  const ComplexMatrix g = random_matrix(gen, n, n);
  return g * g.adjoint();
}

inline std::filesystem::path scenario_path(const std::string& name) {
  return std::filesystem::path(SBLOC_SCENARIO_DIR) / (name + ".json");
}

inline Experiment reference_experiment(const std::string& name = "three_source_noise_free") {
  return load_experiment(scenario_path(name));
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("sbloc_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

} // namespace sbloc::test

namespace sbloc::test {

/// Small scenario for fast statistical tests: 8 mics, 5x5 grid.
inline Scenario toy_scenario(std::size_t sources = 1, double measurement_time = 0.5) {
  Scenario s;
  s.name = "toy";
  s.geometry = sunflower_array(8, 0.2, Vec3::Zero());
  s.grid = FocusGrid{5, 5, 0.02, Vec3(-0.04, -0.04, 0.25), Axis::z};
  s.measurement_time = measurement_time;
  s.band_index = 10;
  const Vec3 spots[] = {{0.0, 0.0, 0.25}, {-0.04, 0.02, 0.25}, {0.04, -0.04, 0.25}};
  for (std::size_t i = 0; i < sources; ++i)
    s.sources.push_back({spots[i], 1.0 - 0.2 * static_cast<double>(i)});
  return s;
}

} // namespace sbloc::test

#include <Eigen/SVD>

#include "sbloc/prox.hpp"

namespace sbloc::test {

/// Accelerated proximal gradient (FISTA with restart) for
///   1/2 ||A X A^H - C||^2 + lambda * sum_ij W_ij (|Re x_ij| + |Im x_ij|).
/// Shares no code with the split Bregman solver beyond the shrink formula.
inline ComplexMatrix reference_prox_gradient(const ComplexMatrix& a, const ComplexMatrix& c, double lambda,
                                             const RealMatrix& w, std::size_t iterations) {
  const Eigen::MatrixXcd dense = a;
  const double s = Eigen::JacobiSVD<Eigen::MatrixXcd>(dense).singularValues()(0);
  const double step = 1.0 / (s * s * s * s);
  const Eigen::Index m = a.cols();
  auto prox = [&](const ComplexMatrix& v) {
    ComplexMatrix out(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) {
        const double t = step * lambda * w(i, j);
        auto soft = [t](double x) { return x > t ? x - t : (x < -t ? x + t : 0.0); };
        out(i, j) = {soft(v(i, j).real()), soft(v(i, j).imag())};
      }
    return out;
  };
  auto objective = [&](const ComplexMatrix& x) {
    double l1 = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      l1 += w.data()[i] * (std::abs(x.data()[i].real()) + std::abs(x.data()[i].imag()));
    return 0.5 * (a * x * a.adjoint() - c).squaredNorm() + lambda * l1;
  };
  ComplexMatrix x = ComplexMatrix::Zero(m, m), y = x;
  double t = 1.0, f_prev = objective(x);
  for (std::size_t k = 0; k < iterations; ++k) {
    const ComplexMatrix g = a.adjoint() * (a * y * a.adjoint() - c) * a;
    const ComplexMatrix x_next = prox(y - step * g);
    const double f = objective(x_next);
    if (f > f_prev) { // restart momentum
      t = 1.0;
      y = x;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x_next + ((t - 1.0) / t_next) * (x_next - x);
    x = x_next;
    t = t_next;
    f_prev = f;
  }
  return x;
}

/// n x m toy problem with C = A X0 A^H for a sparse Hermitian PSD-diagonal X0.
struct ToyProblem {
  ComplexMatrix a, c, x0;
};

inline ToyProblem consistent_toy(std::mt19937_64& gen, Eigen::Index n, Eigen::Index m) {
  ToyProblem p;
  p.a = random_matrix(gen, n, m, 1.0 / std::sqrt(2.0));
  p.x0 = ComplexMatrix::Zero(m, m);
  std::uniform_int_distribution<Eigen::Index> pick(0, m - 1);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int s = 0; s < 2; ++s) {
    const Eigen::Index i = pick(gen);
    p.x0(i, i) = u(gen);
  }
  p.c = p.a * p.x0 * p.a.adjoint();
  return p;
}

} // namespace sbloc::test
