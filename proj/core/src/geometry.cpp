#include "sbloc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sbloc/errors.hpp"

namespace sbloc {

std::pair<Vec3, Vec3> in_plane_axes(Axis normal) {
  switch (normal) {
  case Axis::x:
    return {Vec3::UnitY(), Vec3::UnitZ()};
  case Axis::y:
    return {Vec3::UnitZ(), Vec3::UnitX()};
  case Axis::z:
  default:
    return {Vec3::UnitX(), Vec3::UnitY()};
  }
}

Vec3 ArrayGeometry::centroid() const {
  Vec3 c = Vec3::Zero();
  for (const auto& p : mic_positions)
    c += p;
  return mic_positions.empty() ? c : Vec3(c / static_cast<double>(mic_positions.size()));
}

void ArrayGeometry::validate() const {
  if (mic_positions.empty())
    throw ConfigError("array geometry needs at least one microphone");
  for (std::size_t j = 0; j < mic_positions.size(); ++j)
    if (!mic_positions[j].allFinite())
      throw ConfigError("microphone " + std::to_string(j) + " has a non-finite coordinate");
}

ArrayGeometry sunflower_array(std::size_t count, double aperture, const Vec3& centre, Axis normal) {
  const auto [u, v] = in_plane_axes(normal);
  const double radius = 0.5 * aperture;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  ArrayGeometry g;
  g.mic_positions.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = radius * std::sqrt((static_cast<double>(i) + 0.5) / static_cast<double>(count));
    const double t = golden * static_cast<double>(i);
    g.mic_positions.push_back(r * std::cos(t) * u + r * std::sin(t) * v);
  }
  // Shift so the centroid sits exactly on `centre`.
  const Vec3 shift = centre - g.centroid();
  for (auto& p : g.mic_positions)
    p += shift;
  return g;
}

Vec3 FocusGrid::point(std::size_t ix, std::size_t iy) const {
  const auto [u, v] = in_plane_axes(normal);
  return origin + (static_cast<double>(ix) * spacing) * u + (static_cast<double>(iy) * spacing) * v;
}

FocusGrid::Snap FocusGrid::nearest(const Vec3& p) const {
  const auto [u, v] = in_plane_axes(normal);
  const Vec3 d = p - origin;
  auto clamp_round = [&](double t, std::size_t n) {
    const double k = std::round(t / spacing);
    return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(n - 1)));
  };
  const std::size_t ix = clamp_round(d.dot(u), nx);
  const std::size_t iy = clamp_round(d.dot(v), ny);
  const std::size_t idx = index(ix, iy);
  return {idx, (point(ix, iy) - p).norm()};
}

void FocusGrid::validate() const {
  if (nx == 0 || ny == 0)
    throw ConfigError("focus grid needs nx, ny >= 1");
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw ConfigError("focus grid spacing must be positive");
  if (!origin.allFinite())
    throw ConfigError("focus grid origin must be finite");
}

} // namespace sbloc
