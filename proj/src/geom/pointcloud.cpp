#include "panofuse/geom/pointcloud.hpp"

namespace panofuse::geom {

PointCloud merge_clouds(const PointCloud& a, const PointCloud& b) {
    PointCloud out;
    out.reserve(a.size() + b.size());
    out.positions = a.positions;
    out.positions.insert(out.positions.end(), b.positions.begin(), b.positions.end());
    out.colors = a.colors;
    out.colors.insert(out.colors.end(), b.colors.begin(), b.colors.end());
    return out;
}

PointCloud apply_rigid(const Pose& pose, const PointCloud& cloud) {
    PointCloud out;
    out.reserve(cloud.size());
    out.colors = cloud.colors;
    out.positions.resize(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) out.positions[i] = pose.apply(cloud.positions[i]);
    return out;
}

}  // namespace panofuse::geom
