#include "panofuse/evalkit/trajectory.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "panofuse/util.hpp"

namespace panofuse::evalkit {

namespace {

Eigen::Matrix3d yaw_pitch(double yaw, double pitch) {
    return (Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitY()) *
            Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitX()))
        .toRotationMatrix();
}

}  // namespace

std::vector<geom::Pose> sample_trajectories(const TrajectorySpec& spec,
                                            const std::vector<geom::Pose>& world_poses) {
    if (spec.count <= 0) throw Error("sample_trajectories: count must be positive");
    if (world_poses.empty()) throw Error("sample_trajectories: need at least one world pose");

    const geom::Pose& ref = world_poses.front();
    Eigen::Vector3d segment = world_poses.back().translation - ref.translation;
    double usable = spec.translation_fraction;

    std::mt19937_64 rng(spec.seed);
    std::vector<geom::Pose> out;
    out.reserve(spec.count);
    for (int i = 0; i < spec.count; ++i) {
        geom::Pose pose = ref;
        if (spec.mode == TrajectoryMode::rotation || spec.mode == TrajectoryMode::combined) {
            double yaw = uniform(rng, 0.0, 2.0 * std::numbers::pi);
            double pitch = uniform(rng, -spec.pitch_range, spec.pitch_range);
            pose.rotation = ref.rotation * yaw_pitch(yaw, pitch);
        }
        if (spec.mode == TrajectoryMode::translation || spec.mode == TrajectoryMode::combined) {
            double t = u01(rng) * usable;
            pose.translation = ref.translation + t * segment;
        }
        out.push_back(pose);
    }
    return out;
}

}  // namespace panofuse::evalkit
