#include "panofuse/evalkit/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "panofuse/util.hpp"

namespace panofuse::evalkit {

using geom::BitMask;
using geom::DepthMap;
using geom::Pose;

const char* mode_name(TrajectoryMode mode) {
    switch (mode) {
        case TrajectoryMode::rotation: return "rotation";
        case TrajectoryMode::translation: return "translation";
        case TrajectoryMode::combined: return "combined";
    }
    return "?";
}

namespace {

/// Analytic perspective depth (planar z) of the scene at a pose.
DepthMap scene_perspective_depth(const oracle::SceneSpec& scene, const Pose& pose,
                                 const render::PerspectiveIntrinsics& intr) {
    DepthMap depth(intr.width, intr.height);
    const double fx = (intr.width / 2.0) / std::tan(intr.fov_x / 2.0);
    const double cx = intr.width / 2.0 - 0.5;
    const double cy = intr.height / 2.0 - 0.5;
    parallel_for(static_cast<std::size_t>(intr.height), [&](std::size_t begin, std::size_t end) {
        for (std::size_t yy = begin; yy < end; ++yy) {
            int y = static_cast<int>(yy);
            for (int x = 0; x < intr.width; ++x) {
                Eigen::Vector3d ray_cam((x - cx) / fx, -(y - cy) / fx, 1.0);
                double norm = ray_cam.norm();
                Eigen::Vector3d dir = pose.rotation * (ray_cam / norm);
                oracle::TraceHit hit = oracle::trace_ray(scene, pose.translation, dir);
                depth.at(x, y) = hit.distance / norm;  // radial -> planar z
            }
        }
    });
    return depth;
}

}  // namespace

EvalReport evaluate_world(const geom::PointCloud& cloud, const std::vector<Pose>& world_poses,
                          const TrajectorySpec& base_spec,
                          const std::vector<TrajectoryMode>& modes,
                          const render::PerspectiveIntrinsics& intrinsics,
                          const render::SplatParams& splat,
                          const oracle::SceneSpec* ground_truth) {
    EvalReport report;
    for (TrajectoryMode mode : modes) {
        TrajectorySpec spec = base_spec;
        spec.mode = mode;
        std::vector<Pose> poses = sample_trajectories(spec, world_poses);

        ModeReport mr;
        mr.mode = mode;
        mr.per_frame_coverage.resize(poses.size());
        double acc_abs_rel = 0, acc_rmse = 0, acc_si = 0, acc_d1 = 0, acc_d2 = 0, acc_d3 = 0;
        std::size_t depth_frames = 0;
        for (std::size_t i = 0; i < poses.size(); ++i) {
            render::RenderOutput out =
                render::render_perspective(cloud, poses[i], intrinsics, splat);
            mr.per_frame_coverage[i] = coverage(out.visibility);
            if (ground_truth) {
                DepthMap gt = scene_perspective_depth(*ground_truth, poses[i], intrinsics);
                if (out.visibility.any()) {
                    DepthMetricsReport dm = depth_metrics(out.depth, gt, out.visibility);
                    acc_abs_rel += dm.abs_rel;
                    acc_rmse += dm.rmse;
                    acc_si += dm.si_rmse;
                    acc_d1 += dm.delta1;
                    acc_d2 += dm.delta2;
                    acc_d3 += dm.delta3;
                    ++depth_frames;
                }
            }
        }
        mr.coverage_mean = 0.0;
        mr.coverage_min = poses.empty() ? 0.0 : 1.0;
        for (double c : mr.per_frame_coverage) {
            mr.coverage_mean += c;
            mr.coverage_min = std::min(mr.coverage_min, c);
        }
        if (!poses.empty()) mr.coverage_mean /= static_cast<double>(poses.size());
        if (depth_frames > 0) {
            DepthMetricsReport dm;
            dm.abs_rel = acc_abs_rel / depth_frames;
            dm.rmse = acc_rmse / depth_frames;
            dm.si_rmse = acc_si / depth_frames;
            dm.delta1 = acc_d1 / depth_frames;
            dm.delta2 = acc_d2 / depth_frames;
            dm.delta3 = acc_d3 / depth_frames;
            mr.depth = dm;
        }
        report.modes.push_back(std::move(mr));
    }
    return report;
}

nlohmann::json report_to_json(const EvalReport& report) {
    nlohmann::json j;
    for (const auto& mr : report.modes) {
        nlohmann::json jm = {{"coverage_mean", mr.coverage_mean},
                             {"coverage_min", mr.coverage_min},
                             {"per_frame_coverage", mr.per_frame_coverage},
                             {"brisque", nullptr}};  // slot for externally joined scores
        if (mr.depth) {
            jm["depth"] = {{"abs_rel", mr.depth->abs_rel},   {"rmse", mr.depth->rmse},
                           {"si_rmse", mr.depth->si_rmse},   {"delta1", mr.depth->delta1},
                           {"delta2", mr.depth->delta2},     {"delta3", mr.depth->delta3}};
        }
        j["modes"][mode_name(mr.mode)] = std::move(jm);
    }
    return j;
}

std::string report_table(const std::vector<std::pair<std::string, EvalReport>>& methods) {
    std::ostringstream out;
    out << std::left << std::setw(24) << "Method";
    std::vector<TrajectoryMode> columns;
    if (!methods.empty())
        for (const auto& mr : methods[0].second.modes) columns.push_back(mr.mode);
    for (TrajectoryMode mode : columns) {
        std::string title = mode_name(mode);
        out << std::setw(22) << (title + " IQ|Coverage");
    }
    out << "\n";
    for (const auto& [name, report] : methods) {
        out << std::left << std::setw(24) << name;
        for (TrajectoryMode mode : columns) {
            std::string cell = "--      --";
            for (const auto& mr : report.modes) {
                if (mr.mode != mode) continue;
                std::ostringstream c;
                c << "--  " << std::fixed << std::setprecision(4) << mr.coverage_mean;
                cell = c.str();
            }
            out << std::setw(22) << cell;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace panofuse::evalkit
