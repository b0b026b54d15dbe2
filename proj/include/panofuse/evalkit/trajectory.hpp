#pragma once

#include <cstdint>
#include <vector>

#include "panofuse/geom/pose.hpp"

namespace panofuse::evalkit {

enum class TrajectoryMode { rotation, translation, combined };

struct TrajectorySpec {
    TrajectoryMode mode = TrajectoryMode::combined;
    int count = 20;
    std::uint64_t seed = 0;
    double pitch_range = 45.0 * 3.14159265358979323846 / 180.0;  // +/- radians
    double translation_fraction = 0.8;  // of the total trajectory length
    double fov_x = 3.14159265358979323846 / 2.0;  // for downstream renders
};

/// Poses for the evaluation protocol, relative to the world's camera stations.
/// Rotation mode holds the reference position and draws yaw in [0, 2pi) and
/// pitch in +/- pitch_range; translation mode holds the reference orientation
/// and slides along the station segment up to translation_fraction of its
/// length; combined does both. Deterministic in spec.seed.
std::vector<geom::Pose> sample_trajectories(const TrajectorySpec& spec,
                                            const std::vector<geom::Pose>& world_poses);

}  // namespace panofuse::evalkit
