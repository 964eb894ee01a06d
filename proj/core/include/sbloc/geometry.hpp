#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace sbloc {

using Vec3 = Eigen::Vector3d;

enum class Axis { x = 0, y = 1, z = 2 };

/// Microphone positions in metres.
struct ArrayGeometry {
  std::vector<Vec3> mic_positions;

  std::size_t size() const { return mic_positions.size(); }
  Vec3 centroid() const;
  void validate() const;
};

/// Planar spiral layout (Vogel sunflower) with the given aperture (diameter),
/// centred on `centre` in the plane normal to `normal`.
ArrayGeometry sunflower_array(std::size_t count, double aperture, const Vec3& centre,
                              Axis normal = Axis::z);

/// Regular nx x ny grid of candidate source locations.
///
/// Linear index = ix * ny + iy (0-based); external 1-based index = that + 1.
/// point(ix, iy) = origin + ix * spacing * u + iy * spacing * v where (u, v)
/// are the in-plane axes: (x, y) for a z normal, (y, z) for x, (z, x) for y.
struct FocusGrid {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double spacing = 0.0;
  Vec3 origin = Vec3::Zero();
  Axis normal = Axis::z;

  std::size_t size() const { return nx * ny; }
  std::size_t index(std::size_t ix, std::size_t iy) const { return ix * ny + iy; }
  Vec3 point(std::size_t ix, std::size_t iy) const;
  Vec3 point(std::size_t linear) const { return point(linear / ny, linear % ny); }

  struct Snap {
    std::size_t index;
    double distance;
  };
  /// Nearest grid node to p (distance measured in 3-D).
  Snap nearest(const Vec3& p) const;

  void validate() const;
};

/// Unit vectors spanning the plane normal to `normal`.
std::pair<Vec3, Vec3> in_plane_axes(Axis normal);

} // namespace sbloc
