#pragma once

#include <Eigen/Core>
#include <vector>

#include "panofuse/geom/raster.hpp"

namespace panofuse {

// Raster helpers shared by the layering, blending and evaluation code.
// All horizontal neighborhoods wrap around the azimuth seam; rows never wrap
// across the poles.

inline int wrap_x(int x, int width) {
    int m = x % width;
    return m < 0 ? m + width : m;
}

/// 4-connectivity erosion/dilation with azimuthal wrap.
geom::BitMask erode4(const geom::BitMask& mask);
geom::BitMask dilate4(const geom::BitMask& mask, int iterations = 1);

/// Mask pixels with at least one 4-neighbor outside the mask. Missing
/// vertical neighbors at the pole rows count as inside, so a full mask has an
/// empty boundary.
std::vector<Eigen::Vector2i> boundary_pixels(const geom::BitMask& mask);

/// Separable Gaussian blur of a scalar field, wrap in x, clamp in y.
/// NaNs are treated as 0 contribution with renormalization.
geom::DepthMap gaussian_blur(const geom::DepthMap& field, double sigma);

/// Bilinear sample with azimuthal wrap. Returns NaN when y is outside
/// [0, H-1] or any contributing tap is undefined.
double bilinear_wrapx(const geom::DepthMap& field, double x, double y);

}  // namespace panofuse
