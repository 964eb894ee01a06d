#include "sbloc/forward.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sbloc/rng.hpp"

namespace sbloc {

double CrossSpectralMatrix::hermitian_defect() const {
  const double n = C.norm();
  const double d = (C - C.adjoint()).norm();
  return n > 0.0 ? d / n : d;
}

double CrossSpectralMatrix::min_eigenvalue() const {
  if (C.size() == 0)
    return 0.0;
  const Eigen::MatrixXcd h = C;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("CSM eigenvalue solve did not converge");
  return es.eigenvalues().minCoeff();
}

Complex steering_coeff(const Vec3& focus_point, const Vec3& mic, const Vec3& reference_point,
                       double omega, double c0) {
  const double r = (focus_point - mic).norm();
  const double r0 = (focus_point - reference_point).norm();
  if (!(r > 0.0))
    throw GeometryError("focus point coincides with a microphone");
  if (!(r0 > 0.0))
    throw GeometryError("focus point coincides with the reference point");
  return (r0 / r) * std::polar(1.0, omega * (r0 - r) / c0);
}

ComplexMatrix build_steering_matrix(const ArrayGeometry& geometry, const FocusGrid& grid,
                                    const Vec3& reference_point, double omega, double c0) {
  const auto n = static_cast<Eigen::Index>(geometry.size());
  const auto m = static_cast<Eigen::Index>(grid.size());
  ComplexMatrix a(n, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Vec3 p = grid.point(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < n; ++j)
      a(j, i) = steering_coeff(p, geometry.mic_positions[static_cast<std::size_t>(j)],
                               reference_point, omega, c0);
  }
  return a;
}

ComplexMatrix build_steering_matrix(const Scenario& scenario) {
  return build_steering_matrix(scenario.geometry, scenario.grid, scenario.reference_point(),
                               scenario.omega(), scenario.c0);
}

DiagonalMatrix true_solution(const Scenario& scenario) {
  DiagonalMatrix x(scenario.grid.size());
  for (const auto& src : place_sources(scenario).sources)
    x.diag(static_cast<Eigen::Index>(src.grid_index)) += src.band_power;
  return x;
}

ArrayGeometry perturb_mic_positions(const ArrayGeometry& geometry, double avg_deviation,
                                    std::uint64_t seed, Axis plane_normal) {
  if (avg_deviation < 0.0)
    throw ParameterError("avg_deviation must be >= 0");
  ArrayGeometry out = geometry;
  if (avg_deviation == 0.0)
    return out;
  // |delta| is Rayleigh distributed with mean sigma * sqrt(pi / 2).
  const double sigma = avg_deviation / std::sqrt(0.5 * std::numbers::pi);
  const auto [u, v] = in_plane_axes(plane_normal);
  const CounterRng rng{seed, Stream::mic_position};
  for (std::size_t j = 0; j < out.size(); ++j) {
    const Complex d = rng.normal_pair(0, j, 0) * sigma;
    out.mic_positions[j] += d.real() * u + d.imag() * v;
  }
  return out;
}

ArrayGeometry synthesis_geometry(const Scenario& scenario) {
  if (!scenario.mic_position_error)
    return scenario.geometry;
  return perturb_mic_positions(scenario.geometry, scenario.mic_position_error->avg_deviation,
                               scenario.mic_position_error->seed, scenario.grid.normal);
}

double noise_band_power(const Scenario& scenario) {
  if (!scenario.noise)
    return 0.0;
  return scenario.noise->rms * scenario.noise->rms / scenario.band_count();
}

BlockSynthesizer::BlockSynthesizer(const Scenario& scenario, std::uint64_t seed)
    : seed_(seed), noise_seed_(scenario.noise ? scenario.noise->seed : 0) {
  scenario.validate();
  const auto placement = place_sources(scenario);
  warnings_ = placement.warnings;
  const ArrayGeometry truth = synthesis_geometry(scenario);
  const Vec3 ref = scenario.reference_point();
  const auto n = static_cast<Eigen::Index>(truth.size());
  source_columns_.resize(n, static_cast<Eigen::Index>(placement.sources.size()));
  for (std::size_t s = 0; s < placement.sources.size(); ++s) {
    const auto& src = placement.sources[s];
    for (Eigen::Index j = 0; j < n; ++j)
      source_columns_(j, static_cast<Eigen::Index>(s)) =
          steering_coeff(src.grid_position, truth.mic_positions[static_cast<std::size_t>(j)], ref,
                         scenario.omega(), scenario.c0);
    source_power_.push_back(src.band_power);
  }
  noise_power_ = noise_band_power(scenario);
  blocks_ = welch_block_count(scenario.sample_count(), scenario.fft_block, scenario.overlap);
}

ComplexVector BlockSynthesizer::block(std::size_t k) const {
  Eigen::MatrixXcd out(channels(), 1);
  fill(k, out);
  return out.col(0);
}

void BlockSynthesizer::fill(std::size_t first, Eigen::Ref<Eigen::MatrixXcd> out) const {
  const CounterRng amp{seed_, Stream::source_amplitudes};
  const CounterRng noise{noise_seed_, Stream::noise};
  const Eigen::Index n = source_columns_.rows();
  const Eigen::Index sources = source_columns_.cols();
  if (out.rows() != n)
    throw DimensionError("BlockSynthesizer::fill: output needs " + std::to_string(n) + " rows");
  ComplexVector x(sources);
  for (Eigen::Index col = 0; col < out.cols(); ++col) {
    const std::size_t k = first + static_cast<std::size_t>(col);
    for (Eigen::Index s = 0; s < sources; ++s)
      x(s) = amp.complex_normal(k, static_cast<std::uint64_t>(s), 0,
                                source_power_[static_cast<std::size_t>(s)]);
    if (sources > 0)
      out.col(col).noalias() = source_columns_ * x;
    else
      out.col(col).setZero();
    if (noise_power_ > 0.0)
      for (Eigen::Index j = 0; j < n; ++j)
        out(j, col) += noise.complex_normal(k, static_cast<std::uint64_t>(j), 0, noise_power_);
  }
}

ComplexMatrix synthesize_block_spectra(const Scenario& scenario, std::uint64_t seed) {
  const BlockSynthesizer synth(scenario, seed);
  Eigen::MatrixXcd out(synth.channels(), synth.block_count());
  synth.fill(0, out);
  return out;
}

CrossSpectralMatrix estimate_csm(const Scenario& scenario, std::uint64_t seed) {
  const BlockSynthesizer synth(scenario, seed);
  const auto n = static_cast<Eigen::Index>(synth.channels());
  const std::size_t total = synth.block_count();
  constexpr std::size_t batch = 256;

  // Lower triangle accumulated in a fixed block order.
  Eigen::MatrixXcd lower = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd blocks(n, static_cast<Eigen::Index>(batch));
  for (std::size_t first = 0; first < total; first += batch) {
    const auto count = static_cast<Eigen::Index>(std::min(batch, total - first));
    auto view = blocks.leftCols(count);
    synth.fill(first, view);
    lower.selfadjointView<Eigen::Lower>().rankUpdate(view);
  }

  CrossSpectralMatrix csm;
  csm.C.resize(n, n);
  const double scale = 1.0 / static_cast<double>(total);
  for (Eigen::Index j = 0; j < n; ++j) {
    csm.C(j, j) = Complex(lower(j, j).real() * scale, 0.0);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const Complex v = lower(i, j) * scale;
      csm.C(i, j) = v;
      csm.C(j, i) = std::conj(v);
    }
  }
  csm.band_centre = scenario.band_centre();
  csm.block_count = total;
  csm.seed = seed;
  return csm;
}

} // namespace sbloc
