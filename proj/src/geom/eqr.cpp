#include "panofuse/geom/eqr.hpp"

#include <cmath>
#include <numbers>

#include "panofuse/util.hpp"

namespace panofuse::geom {

namespace {
constexpr double kPi = std::numbers::pi;
}

Eigen::Vector3d pixel_to_direction(double x, double y, int width, int height) {
    double theta = (x + 0.5) / width * 2.0 * kPi - kPi;
    double phi = kPi / 2.0 - (y + 0.5) / height * kPi;
    double cp = std::cos(phi);
    return {cp * std::sin(theta), std::sin(phi), cp * std::cos(theta)};
}

Eigen::Vector3d pixel_to_direction(int x, int y, int width, int height) {
    if (x < 0 || x >= width || y < 0 || y >= height)
        throw Error("pixel_to_direction: pixel index out of range");
    return pixel_to_direction(static_cast<double>(x), static_cast<double>(y), width, height);
}

Eigen::Vector2d direction_to_pixel(const Eigen::Vector3d& dir, int width, int height) {
    double norm = dir.norm();
    if (norm < 1e-12) throw Error("direction_to_pixel: zero direction");
    Eigen::Vector3d d = dir / norm;
    double theta = std::atan2(d.x(), d.z());
    if (theta >= kPi) theta -= 2.0 * kPi;  // atan2 returns (-pi, pi]; wrap to [-pi, pi)
    double phi = std::asin(std::clamp(d.y(), -1.0, 1.0));
    double x = (theta + kPi) / (2.0 * kPi) * width - 0.5;
    double y = (kPi / 2.0 - phi) / kPi * height - 0.5;
    return {x, y};
}

}  // namespace panofuse::geom
