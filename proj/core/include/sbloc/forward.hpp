#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sbloc/linalg.hpp"
#include "sbloc/scenario.hpp"

namespace sbloc {

/// Hermitian n x n band matrix with its metadata.
struct CrossSpectralMatrix {
  ComplexMatrix C;
  double band_centre = 0.0;
  std::size_t block_count = 0;
  std::uint64_t seed = 0;

  double hermitian_defect() const; ///< ||C - C^H||_F / ||C||_F
  double min_eigenvalue() const;
};

/// Monopole transfer from a unit pressure at the reference point to a
/// microphone: (r0 / r) * exp(i * omega * (r0 - r) / c0).
Complex steering_coeff(const Vec3& focus_point, const Vec3& mic, const Vec3& reference_point,
                       double omega, double c0);

/// n x m matrix with A(j, i) = steering_coeff(grid point i, mic j).
ComplexMatrix build_steering_matrix(const ArrayGeometry& geometry, const FocusGrid& grid,
                                    const Vec3& reference_point, double omega, double c0);

/// Steering matrix of the nominal geometry at the scenario's band centre.
ComplexMatrix build_steering_matrix(const Scenario& scenario);

/// Ground-truth source power matrix: diagonal, per-band auto-power at each
/// source's grid index.
DiagonalMatrix true_solution(const Scenario& scenario);

/// Microphones displaced in the array plane by an isotropic 2-D Gaussian whose
/// expected displacement magnitude equals avg_deviation.
ArrayGeometry perturb_mic_positions(const ArrayGeometry& geometry, double avg_deviation,
                                    std::uint64_t seed, Axis plane_normal = Axis::z);

/// Geometry the signals are synthesised with (nominal, or perturbed when the
/// scenario asks for microphone position errors).
ArrayGeometry synthesis_geometry(const Scenario& scenario);

/// Per-block microphone spectra c_k = A_true x_k + noise_k in the analysis
/// band. Source amplitudes and noise are circular complex Gaussians drawn
/// from counter-based streams keyed by (seed, block, channel).
class BlockSynthesizer {
public:
  BlockSynthesizer(const Scenario& scenario, std::uint64_t seed);

  std::size_t block_count() const { return blocks_; }
  std::size_t channels() const { return static_cast<std::size_t>(source_columns_.rows()); }
  const std::vector<std::string>& warnings() const { return warnings_; }

  ComplexVector block(std::size_t k) const;
  /// Writes blocks [first, first + out.cols()) into the columns of out.
  void fill(std::size_t first, Eigen::Ref<Eigen::MatrixXcd> out) const;

private:
  ComplexMatrix source_columns_; // n x S, true geometry
  std::vector<double> source_power_;
  double noise_power_ = 0.0;
  std::uint64_t seed_ = 0;
  std::uint64_t noise_seed_ = 0;
  std::size_t blocks_ = 0;
  std::vector<std::string> warnings_;
};

/// All K block spectra as the columns of an n x K matrix.
ComplexMatrix synthesize_block_spectra(const Scenario& scenario, std::uint64_t seed);

/// C = (1/K) sum_k c_k c_k^H over the synthesised blocks. Exactly Hermitian.
CrossSpectralMatrix estimate_csm(const Scenario& scenario, std::uint64_t seed);

/// Per-band noise power at each microphone implied by the scenario.
double noise_band_power(const Scenario& scenario);

} // namespace sbloc
