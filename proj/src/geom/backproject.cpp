#include "panofuse/geom/backproject.hpp"

#include <cmath>

#include "panofuse/geom/eqr.hpp"
#include "panofuse/util.hpp"

namespace panofuse::geom {

namespace {

void check_sizes(int w, int h, const DepthMap& depth, const BitMask* mask) {
    if (!depth.same_size(w, h)) throw Error("backproject: image/depth size mismatch");
    if (mask && !mask->same_size(w, h)) throw Error("backproject: mask size mismatch");
}

}  // namespace

PointCloud backproject_spherical(const EqrImage& image, const DepthMap& depth, const Pose& pose,
                                 const BitMask* mask) {
    check_sizes(image.width, image.height, depth, mask);
    PointCloud cloud;
    cloud.reserve(depth.values.size());
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            if (mask) {
                if (!mask->get(x, y)) continue;
                if (!depth.defined(x, y))
                    throw Error("backproject: undefined or nonpositive depth under mask");
            } else if (!depth.defined(x, y)) {
                continue;
            }
            double d = depth.at(x, y);
            Eigen::Vector3d dir = pixel_to_direction(static_cast<double>(x),
                                                     static_cast<double>(y), image.width,
                                                     image.height);
            cloud.append(pose.apply(d * dir), image.at(x, y));
        }
    }
    return cloud;
}

LiftedPoints lift_depth(const DepthMap& depth, const Pose& pose, const BitMask* mask) {
    if (mask && !mask->same_size(depth.width, depth.height))
        throw Error("lift_depth: mask size mismatch");
    LiftedPoints out;
    out.positions.reserve(depth.values.size());
    out.pixels.reserve(depth.values.size());
    for (int y = 0; y < depth.height; ++y) {
        for (int x = 0; x < depth.width; ++x) {
            if (mask) {
                if (!mask->get(x, y)) continue;
                if (!depth.defined(x, y))
                    throw Error("lift_depth: undefined or nonpositive depth under mask");
            } else if (!depth.defined(x, y)) {
                continue;
            }
            double d = depth.at(x, y);
            Eigen::Vector3d dir = pixel_to_direction(static_cast<double>(x),
                                                     static_cast<double>(y), depth.width,
                                                     depth.height);
            out.positions.push_back(pose.apply(d * dir));
            out.pixels.emplace_back(x, y);
        }
    }
    return out;
}

}  // namespace panofuse::geom
