#pragma once

#include "panofuse/geom/pointcloud.hpp"
#include "panofuse/geom/pose.hpp"
#include "panofuse/geom/raster.hpp"

namespace panofuse::render {

/// Distance-scaled splat sizing. The pixel radius of a point at camera
/// distance d is clamp(footprint / (d * pixel_angle), min_radius_px,
/// max_radius_px), where pixel_angle is the angular size of one rendered
/// pixel. footprint <= 0 selects an automatic value of twice the median
/// camera distance times the pixel angle (so the median point spans ~2 px).
/// Pipelines that know the source sampling pass an explicit footprint of
/// 2 * median source depth * (2*pi / source width).
struct SplatParams {
    double footprint = 0.0;
    double max_radius_px = 5.0;
    double min_radius_px = 1.0;
};

struct PerspectiveIntrinsics {
    int width = 0;
    int height = 0;
    double fov_x = 0.0;  // radians, (0, pi)
};

struct RenderOutput {
    geom::EqrImage image;     // unhit pixels stay black
    geom::DepthMap depth;     // camera distance (EQR: radial; perspective: planar z)
    geom::BitMask visibility; // set iff depth defined
    std::size_t skipped_points = 0;  // points at the camera center
};

/// Splats the cloud into an equirectangular panorama at the given pose.
/// Nearest point wins per pixel; ties resolve to the earliest point in input
/// order, so output is deterministic under any thread count.
RenderOutput render_eqr(const geom::PointCloud& cloud, const geom::Pose& pose, int width,
                        int height, const SplatParams& splat = {});

/// Pinhole projection with z-buffer over planar depth; points behind the
/// camera are culled.
RenderOutput render_perspective(const geom::PointCloud& cloud, const geom::Pose& pose,
                                const PerspectiveIntrinsics& intrinsics,
                                const SplatParams& splat = {});

}  // namespace panofuse::render
