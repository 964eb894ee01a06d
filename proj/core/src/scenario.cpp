#include "sbloc/scenario.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sbloc/errors.hpp"

namespace sbloc {

double Scenario::omega() const { return 2.0 * std::numbers::pi * band_centre(); }

std::size_t Scenario::sample_count() const {
  return static_cast<std::size_t>(std::floor(measurement_time * sampling_rate + 1e-9));
}

std::size_t welch_block_count(std::size_t samples, std::size_t fft_block, double overlap) {
  const double n = static_cast<double>(fft_block);
  const double k = (static_cast<double>(samples) - overlap * n) / ((1.0 - overlap) * n);
  return k < 1.0 ? 0 : static_cast<std::size_t>(std::floor(k + 1e-9));
}

void Scenario::validate() const {
  geometry.validate();
  grid.validate();
  if (!(c0 > 0.0) || !std::isfinite(c0))
    throw ConfigError("c0 must be positive");
  if (!(sampling_rate > 0.0) || !std::isfinite(sampling_rate))
    throw ConfigError("sampling_rate must be positive");
  if (fft_block < 4 || !std::has_single_bit(fft_block))
    throw ConfigError("fft_block must be a power of two >= 4");
  if (!(overlap >= 0.0 && overlap < 1.0))
    throw ConfigError("overlap must lie in [0, 1)");
  if (band_index < 1 || band_index > fft_block / 2 - 1)
    throw ConfigError("band_index must lie in [1, fft_block/2 - 1]");
  if (!(measurement_time > 0.0) || !std::isfinite(measurement_time))
    throw ConfigError("measurement_time must be positive");
  if (welch_block_count(sample_count(), fft_block, overlap) < 1)
    throw ConfigError("measurement_time too short for a single FFT block");
  for (std::size_t s = 0; s < sources.size(); ++s) {
    if (!sources[s].position.allFinite())
      throw ConfigError("source " + std::to_string(s) + " position must be finite");
    if (!(sources[s].rms_at_1m >= 0.0) || !std::isfinite(sources[s].rms_at_1m))
      throw ConfigError("source " + std::to_string(s) + " rms_at_1m must be >= 0");
  }
  if (noise && (!(noise->rms >= 0.0) || !std::isfinite(noise->rms)))
    throw ConfigError("noise.rms must be >= 0");
  if (mic_position_error &&
      (!(mic_position_error->avg_deviation >= 0.0) || !std::isfinite(mic_position_error->avg_deviation)))
    throw ConfigError("mic_position_error.avg_deviation must be >= 0");
}

SourcePlacement place_sources(const Scenario& s) {
  SourcePlacement out;
  const Vec3 ref = s.reference_point();
  for (std::size_t i = 0; i < s.sources.size(); ++i) {
    const auto& src = s.sources[i];
    const auto snap = s.grid.nearest(src.position);
    PlacedSource p;
    p.grid_index = snap.index;
    p.grid_position = s.grid.point(snap.index);
    p.snap_distance = snap.distance;
    p.rms_at_1m = src.rms_at_1m;
    p.ref_distance = (p.grid_position - ref).norm();
    if (p.ref_distance <= 0.0)
      throw GeometryError("source " + std::to_string(i) + " coincides with the reference point");
    p.band_power = src.rms_at_1m * src.rms_at_1m / (p.ref_distance * p.ref_distance * s.band_count());
    if (snap.distance > 1e-9) {
      std::ostringstream msg;
      msg << "source " << i << " snapped to grid index " << snap.index + 1 << " (distance "
          << snap.distance << " m)";
      out.warnings.push_back(msg.str());
    }
    out.sources.push_back(p);
  }
  return out;
}

} // namespace sbloc
