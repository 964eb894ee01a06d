#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sbloc/geometry.hpp"

namespace sbloc {

struct SourceSpec {
  Vec3 position = Vec3::Zero();
  /// RMS sound pressure at 1 m distance, pascal.
  double rms_at_1m = 0.0;
};

/// Additive uncorrelated microphone noise.
struct NoiseSpec {
  /// Time-domain RMS per microphone, pascal.
  double rms = 0.0;
  std::uint64_t seed = 0;
};

/// Random in-plane displacement of the microphones used for synthesis only.
struct MicPositionError {
  double avg_deviation = 0.0;
  std::uint64_t seed = 0;
};

/// Full description of one simulated measurement.
struct Scenario {
  std::string name;
  ArrayGeometry geometry;
  FocusGrid grid;
  std::vector<SourceSpec> sources;
  double c0 = 343.0;
  double sampling_rate = 51200.0;
  std::size_t fft_block = 128;
  double overlap = 0.5;
  double measurement_time = 80.0;
  std::size_t band_index = 48;
  std::optional<NoiseSpec> noise;
  std::optional<MicPositionError> mic_position_error;

  double band_width() const { return sampling_rate / static_cast<double>(fft_block); }
  double band_centre() const { return static_cast<double>(band_index) * band_width(); }
  double omega() const;
  /// Number of positive-frequency bands a white signal's power splits into.
  double band_count() const { return 0.5 * static_cast<double>(fft_block); }
  /// Reference point for source strengths: the nominal array centroid.
  Vec3 reference_point() const { return geometry.centroid(); }
  std::size_t sample_count() const;

  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

/// Welch block count for T samples: floor((T - overlap*N) / ((1 - overlap) * N)).
std::size_t welch_block_count(std::size_t samples, std::size_t fft_block, double overlap);

/// Source after snapping to the focus grid.
struct PlacedSource {
  std::size_t grid_index = 0; ///< 0-based
  Vec3 grid_position = Vec3::Zero();
  double snap_distance = 0.0;
  double rms_at_1m = 0.0;
  /// Distance grid position -> reference point.
  double ref_distance = 0.0;
  /// q^2 / (r0^2 * fft_block/2): per-band auto-power at the reference point.
  double band_power = 0.0;
};

struct SourcePlacement {
  std::vector<PlacedSource> sources;
  std::vector<std::string> warnings;
};

SourcePlacement place_sources(const Scenario& s);

} // namespace sbloc
