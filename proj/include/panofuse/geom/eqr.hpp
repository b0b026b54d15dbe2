#pragma once

#include <Eigen/Core>

namespace panofuse::geom {

// Equirectangular convention used throughout: row 0 is the zenith side,
// column 0 maps to azimuth -pi, and the camera frame is right-handed with
// +Z forward, +Y up, +X right. Azimuth grows toward +X.
//
//   theta = ((x + 0.5) / W) * 2*pi - pi
//   phi   = pi/2 - ((y + 0.5) / H) * pi
//   dir   = (cos(phi) sin(theta), sin(phi), cos(phi) cos(theta))

/// Unit direction for continuous pixel-center coordinates. x is periodic with
/// period W; y outside [0, H) extrapolates beyond the poles and is the
/// caller's responsibility.
Eigen::Vector3d pixel_to_direction(double x, double y, int width, int height);

/// Pixel-center direction for an integer pixel; validates the index range.
Eigen::Vector3d pixel_to_direction(int x, int y, int width, int height);

/// Inverse mapping; azimuth wraps into [-pi, pi). Throws on a near-zero
/// vector. The input need not be normalized beyond tolerance.
Eigen::Vector2d direction_to_pixel(const Eigen::Vector3d& dir, int width, int height);

}  // namespace panofuse::geom
