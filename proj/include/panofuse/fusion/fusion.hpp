#pragma once

#include <string>

#include "panofuse/blend/harmonic.hpp"
#include "panofuse/geom/pointcloud.hpp"
#include "panofuse/geom/pose.hpp"
#include "panofuse/oracle/interfaces.hpp"
#include "panofuse/render/render.hpp"

namespace panofuse::fusion {

enum class Opening { left, right, both };
enum class BlendMode { harmonic, naive, interpolation };

/// Sphere with a directional wedge removed and the facing band pushed onto an
/// enclosing cylinder about the opening axis.
struct OpenedSphere {
    geom::PointCloud cloud;
    Opening opening = Opening::right;
    Eigen::Vector3d axis_dir = Eigen::Vector3d::UnitX();  // +d; left opens toward -d
    double half_angle = 0.0;                              // wedge half-angle alpha
    double cylinder_radius = 0.0;
    geom::Pose center;
};

struct OpeningParams {
    double alpha = 60.0 * 3.14159265358979323846 / 180.0;
    double radius = 0.0;           // <= 0 selects auto mode
    double auto_percentile = 0.0;  // 0 = inscribed clearance radius of the facing hemisphere
    bool project_all = false;      // true: pull outliers onto the cylinder too
};

/// Removes points whose direction from the sphere center lies within alpha of
/// the opened axis (both axes for Opening::both), then pushes remaining band
/// points (axis angle in [alpha, pi/2]) radially outward onto the cylinder of
/// the given radius, with a smoothstep ramp that vanishes at pi/2.
OpenedSphere open_sphere(const geom::PointCloud& sphere, const geom::Pose& center, Opening side,
                         const Eigen::Vector3d& axis_dir, const OpeningParams& params);

/// Camera at the middle of the capsule formed by poses T_i and T_i + lambda*d.
geom::Pose intermediate_pose(const geom::Pose& t_i, double lambda, const Eigen::Vector3d& d);

/// Points lifted from inpainted content at the intermediate pose, restricted
/// to the region no capsule point reached.
struct FillBlock {
    geom::PointCloud cloud;
    geom::Pose source_pose;
    geom::BitMask fill_mask;  // 1 - M^r
};

struct FillDiagnostics {
    double fill_fraction = 0.0;
    double solver_residual = 0.0;
    double max_boundary_mismatch = 0.0;
    double transition_score = 0.0;
    bool geometry_warning = false;  // fill fraction outside [0.02, 0.9]
    std::size_t oracle_calls = 0;
};

struct FillParams {
    int width = 512;
    int height = 256;
    std::string prompt;
    render::SplatParams splat;
    blend::BlendParams blend;
    BlendMode blend_mode = BlendMode::harmonic;
};

struct FillResult {
    FillBlock block;
    FillDiagnostics diagnostics;
    render::RenderOutput capsule;  // I^r, D^r, M^r at the intermediate pose
    geom::EqrImage inpainted;
    geom::DepthMap estimated_depth;
    geom::DepthMap blended_depth;
};

/// Renders the facing opened spheres from t_mid, inpaints the unseen region,
/// estimates and blends its depth, and lifts the new content. A full
/// visibility mask short-circuits to an empty block without oracle calls.
FillResult build_fill_block(const OpenedSphere& right_opened, const OpenedSphere& left_opened,
                            const geom::Pose& t_mid, oracle::Inpainter& inpainter,
                            oracle::DepthEstimator& depth_estimator, const FillParams& params);

}  // namespace panofuse::fusion
