#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "panofuse/geom/pointcloud.hpp"
#include "panofuse/geom/pose.hpp"
#include "panofuse/geom/raster.hpp"

namespace panofuse::geom {

/// Lifts an RGB-D panorama to a world-frame point cloud along pixel rays.
/// Without a mask, every pixel with defined depth is lifted; with a mask, the
/// selected pixels must all carry positive finite depth.
PointCloud backproject_spherical(const EqrImage& image, const DepthMap& depth, const Pose& pose,
                                 const BitMask* mask = nullptr);

/// Positions plus per-point source pixel, for consumers that must map points
/// back to raster locations. Same selection rules as backproject_spherical.
struct LiftedPoints {
    std::vector<Eigen::Vector3d> positions;
    std::vector<Eigen::Vector2i> pixels;  // (x, y)
};

LiftedPoints lift_depth(const DepthMap& depth, const Pose& pose, const BitMask* mask = nullptr);

}  // namespace panofuse::geom
