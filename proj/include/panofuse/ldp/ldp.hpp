#pragma once

#include <Eigen/Core>
#include <limits>
#include <string>
#include <vector>

#include "panofuse/geom/pose.hpp"
#include "panofuse/geom/raster.hpp"
#include "panofuse/oracle/interfaces.hpp"

namespace panofuse::ldp {

/// Foreground RGB-D layer plus inpainted background layer. The background
/// depth is a row-constant enclosing surface (the panoramic hull), so it
/// dominates the foreground depth on every row.
struct LayeredDepthPanorama {
    geom::EqrImage fg_image;
    geom::DepthMap fg_depth;
    geom::BitMask fg_mask;
    geom::EqrImage bg_image;
    geom::DepthMap bg_depth;
};

struct MaskScore {
    int mask_index = 0;
    double score = -std::numeric_limits<double>::infinity();
    int boundary_sample_count = 0;
};

/// Canny edges of the depth map, normalized to [0, 1] per image; hysteresis
/// thresholds are fractions of the maximum gradient magnitude. Horizontal
/// neighborhoods wrap. A constant map has no edges.
geom::BitMask depth_edges(const geom::DepthMap& depth, double low, double high);

/// Boundary pixels of the mask with outward unit normals, derived from the
/// gradient of the sigma-smoothed mask indicator.
struct BoundaryNormal {
    Eigen::Vector2d position;  // pixel coordinates (x, y)
    Eigen::Vector2d normal;    // outward, unit length
};
std::vector<BoundaryNormal> boundary_normals(const geom::BitMask& mask, double sigma);

/// Mean signed cross-boundary depth difference over boundary pixels that lie
/// on depth edges: for each such pixel, depth is sampled bilinearly at
/// +/- eps along the outward normal and the difference outside - inside is
/// averaged. No valid sample leaves the -inf sentinel (never selected).
MaskScore foreground_score(const geom::BitMask& mask, const geom::DepthMap& depth,
                           const geom::BitMask& edges, double eps, double sigma = 1.5,
                           int mask_index = 0);

/// OR of all masks whose score exceeds t; masks with fewer than min_samples
/// valid boundary samples are rejected regardless of score.
geom::BitMask select_foreground(const std::vector<geom::BitMask>& masks,
                                const std::vector<MaskScore>& scores, double t,
                                int min_samples = 8);

/// Row-constant depth map holding the farthest defined depth of each row.
geom::DepthMap panoramic_hull(const geom::DepthMap& depth);

struct LdpParams {
    double eps = 3.0;        // normal-offset sample distance, pixels
    double sigma = 1.5;      // boundary-normal smoothing, pixels
    double canny_low = 0.10;
    double canny_high = 0.20;
    double threshold_factor = 0.05;  // t = factor * median depth
    int min_samples = 8;
};

/// Full construction: depth edges, candidate mask scoring and selection, one
/// background inpaint request carrying the scene prompt, and the panoramic
/// hull as background depth.
LayeredDepthPanorama build_ldp(const geom::EqrImage& image, const geom::DepthMap& depth,
                               oracle::Segmenter& segmenter, oracle::Inpainter& inpainter,
                               const LdpParams& params, const std::string& prompt,
                               const geom::Pose& pose);

}  // namespace panofuse::ldp
