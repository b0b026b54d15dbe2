#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "panofuse/evalkit/metrics.hpp"
#include "panofuse/evalkit/trajectory.hpp"
#include "panofuse/geom/pointcloud.hpp"
#include "panofuse/oracle/scene.hpp"
#include "panofuse/render/render.hpp"

namespace panofuse::evalkit {

struct ModeReport {
    TrajectoryMode mode = TrajectoryMode::combined;
    double coverage_mean = 0.0;
    double coverage_min = 0.0;
    std::vector<double> per_frame_coverage;
    std::optional<DepthMetricsReport> depth;  // set when ground truth is available
};

struct EvalReport {
    std::vector<ModeReport> modes;
};

const char* mode_name(TrajectoryMode mode);

/// Renders the cloud along sampled trajectories for each requested mode and
/// scores coverage, plus depth metrics against the analytic scene when given.
EvalReport evaluate_world(const geom::PointCloud& cloud,
                          const std::vector<geom::Pose>& world_poses,
                          const TrajectorySpec& base_spec,
                          const std::vector<TrajectoryMode>& modes,
                          const render::PerspectiveIntrinsics& intrinsics,
                          const render::SplatParams& splat,
                          const oracle::SceneSpec* ground_truth = nullptr);

nlohmann::json report_to_json(const EvalReport& report);

/// Aligned plain-text table, one row per method and one column pair per
/// trajectory mode. The no-reference image-quality column is a placeholder
/// slot so externally computed scores can be joined later.
std::string report_table(const std::vector<std::pair<std::string, EvalReport>>& methods);

}  // namespace panofuse::evalkit
