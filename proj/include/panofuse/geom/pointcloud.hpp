#pragma once

#include <Eigen/Core>
#include <vector>

#include "panofuse/geom/pose.hpp"

namespace panofuse::geom {

/// Colored point set — the representation of spheres, fill blocks and the
/// assembled world. Positions in world units, colors in [0, 1]^3.
struct PointCloud {
    std::vector<Eigen::Vector3d> positions;
    std::vector<Eigen::Vector3f> colors;

    std::size_t size() const { return positions.size(); }
    bool empty() const { return positions.empty(); }

    void reserve(std::size_t n) {
        positions.reserve(n);
        colors.reserve(n);
    }
    void append(const Eigen::Vector3d& p, const Eigen::Vector3f& c) {
        positions.push_back(p);
        colors.push_back(c);
    }
};

/// Concatenation, a then b; coordinates are preserved bit-exactly.
PointCloud merge_clouds(const PointCloud& a, const PointCloud& b);

PointCloud apply_rigid(const Pose& pose, const PointCloud& cloud);

}  // namespace panofuse::geom
