#include "panofuse/fusion/fusion.hpp"

#include <cmath>
#include <numbers>

#include "panofuse/evalkit/metrics.hpp"
#include "panofuse/geom/backproject.hpp"
#include "panofuse/util.hpp"

namespace panofuse::fusion {

using geom::BitMask;
using geom::DepthMap;
using geom::EqrImage;
using geom::PointCloud;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double smooth_ramp(double gamma, double alpha) {
    // 1 at gamma == alpha, 0 at gamma == pi/2, C1 in between.
    double u = (gamma - alpha) / (kHalfPi - alpha);
    u = std::clamp(u, 0.0, 1.0);
    double s = u * u * (3.0 - 2.0 * u);
    return 1.0 - s;
}

/// Applies a single-axis opening in place. Returns the surviving cloud.
PointCloud open_one_axis(const PointCloud& cloud, const Eigen::Vector3d& center,
                         const Eigen::Vector3d& axis, double alpha, double radius,
                         bool project_all) {
    const double cos_alpha = std::cos(alpha);
    PointCloud out;
    out.reserve(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        Eigen::Vector3d v = cloud.positions[i] - center;
        double r = v.norm();
        if (r < 1e-12) continue;  // point at the center carries no direction
        double cos_gamma = v.dot(axis) / r;
        if (cos_gamma > cos_alpha) continue;  // inside the removed wedge
        if (cos_gamma > 0.0) {                 // deformation band (alpha, pi/2)
            double gamma = std::acos(std::clamp(cos_gamma, -1.0, 1.0));
            double target = radius / std::sin(gamma);
            double delta = project_all ? (target - r) : std::max(0.0, target - r);
            double r_new = r + smooth_ramp(gamma, alpha) * delta;
            out.append(center + (r_new / r) * v, cloud.colors[i]);
        } else {
            out.append(cloud.positions[i], cloud.colors[i]);
        }
    }
    return out;
}

double auto_radius(const PointCloud& cloud, const Eigen::Vector3d& center,
                   const Eigen::Vector3d& axis, double pct) {
    std::vector<double> perp;
    perp.reserve(cloud.size());
    for (const auto& p : cloud.positions) {
        Eigen::Vector3d v = p - center;
        double along = v.dot(axis);
        if (along <= 0.0) continue;  // facing hemisphere only
        perp.push_back((v - along * axis).norm());
    }
    if (perp.empty()) throw Error("open_sphere: no points in the facing hemisphere");
    return percentile(std::move(perp), pct);
}

}  // namespace

OpenedSphere open_sphere(const PointCloud& sphere, const geom::Pose& center, Opening side,
                         const Eigen::Vector3d& axis_dir, const OpeningParams& params) {
    if (!(params.alpha > 0.0 && params.alpha < kHalfPi))
        throw Error("open_sphere: alpha must lie in (0, pi/2)");
    if (params.radius < 0.0) throw Error("open_sphere: radius must be positive or zero for auto");
    Eigen::Vector3d axis = axis_dir.normalized();

    OpenedSphere out;
    out.opening = side;
    out.axis_dir = axis;
    out.half_angle = params.alpha;
    out.center = center;

    auto radius_for = [&](const PointCloud& cloud, const Eigen::Vector3d& a) {
        return params.radius > 0.0 ? params.radius
                                   : auto_radius(cloud, center.translation, a, params.auto_percentile);
    };

    switch (side) {
        case Opening::right: {
            out.cylinder_radius = radius_for(sphere, axis);
            out.cloud = open_one_axis(sphere, center.translation, axis, params.alpha,
                                      out.cylinder_radius, params.project_all);
            break;
        }
        case Opening::left: {
            out.cylinder_radius = radius_for(sphere, -axis);
            out.cloud = open_one_axis(sphere, center.translation, -axis, params.alpha,
                                      out.cylinder_radius, params.project_all);
            break;
        }
        case Opening::both: {
            double r_left = radius_for(sphere, -axis);
            PointCloud tmp = open_one_axis(sphere, center.translation, -axis, params.alpha,
                                           r_left, params.project_all);
            out.cylinder_radius = radius_for(sphere, axis);
            out.cloud = open_one_axis(tmp, center.translation, axis, params.alpha,
                                      out.cylinder_radius, params.project_all);
            break;
        }
    }
    return out;
}

geom::Pose intermediate_pose(const geom::Pose& t_i, double lambda, const Eigen::Vector3d& d) {
    if (!(lambda > 0.0)) throw Error("intermediate_pose: lambda must be positive");
    return geom::translate_pose(t_i, 0.5 * lambda * d);
}

FillResult build_fill_block(const OpenedSphere& right_opened, const OpenedSphere& left_opened,
                            const geom::Pose& t_mid, oracle::Inpainter& inpainter,
                            oracle::DepthEstimator& depth_estimator, const FillParams& params) {
    FillResult result;
    PointCloud capsule_cloud = geom::merge_clouds(right_opened.cloud, left_opened.cloud);
    result.capsule = render::render_eqr(capsule_cloud, t_mid, params.width, params.height,
                                        params.splat);

    BitMask fill_mask = geom::mask_not(result.capsule.visibility);
    result.block.source_pose = t_mid;
    result.block.fill_mask = fill_mask;

    const double fill_fraction =
        static_cast<double>(fill_mask.count()) / static_cast<double>(fill_mask.bits.size());
    result.diagnostics.fill_fraction = fill_fraction;
    if (fill_fraction == 0.0) return result;  // spheres overlap completely, nothing to fill
    result.diagnostics.geometry_warning = fill_fraction < 0.02 || fill_fraction > 0.9;

    // Inpaint, then composite so visible pixels are untouched no matter what
    // the backend returned.
    EqrImage inpainted = inpainter.inpaint(result.capsule.image, fill_mask, params.prompt, t_mid);
    result.diagnostics.oracle_calls++;
    result.inpainted = result.capsule.image;
    for (int y = 0; y < params.height; ++y)
        for (int x = 0; x < params.width; ++x)
            if (fill_mask.get(x, y)) result.inpainted.at(x, y) = inpainted.at(x, y);

    result.estimated_depth = depth_estimator.estimate(result.inpainted, t_mid);
    result.diagnostics.oracle_calls++;

    blend::BlendDiagnostics blend_diag;
    switch (params.blend_mode) {
        case BlendMode::harmonic:
            result.blended_depth =
                blend::harmonic_blend_depth(result.capsule.depth, result.estimated_depth,
                                            result.capsule.visibility, t_mid, params.blend,
                                            &blend_diag);
            break;
        case BlendMode::naive:
            result.blended_depth = blend::naive_blend(result.capsule.depth,
                                                      result.estimated_depth,
                                                      result.capsule.visibility);
            break;
        case BlendMode::interpolation:
            result.blended_depth = blend::offset_interpolation_blend(result.capsule.depth,
                                                                     result.estimated_depth,
                                                                     result.capsule.visibility);
            break;
    }
    result.diagnostics.solver_residual = blend_diag.solver_residual;
    result.diagnostics.max_boundary_mismatch = blend_diag.max_boundary_mismatch;
    result.diagnostics.transition_score =
        evalkit::transition_score(result.blended_depth, result.capsule.visibility);

    result.block.cloud =
        geom::backproject_spherical(result.inpainted, result.blended_depth, t_mid, &fill_mask);
    return result;
}

}  // namespace panofuse::fusion
