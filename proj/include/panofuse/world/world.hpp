#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "panofuse/fusion/fusion.hpp"
#include "panofuse/geom/pointcloud.hpp"
#include "panofuse/ldp/ldp.hpp"
#include "panofuse/oracle/interfaces.hpp"
#include "panofuse/world/config.hpp"

namespace panofuse::world {

/// Per-stage rasters kept when keep_artifacts is on (debug dumps, tests).
struct StageArtifacts {
    std::vector<ldp::LayeredDepthPanorama> layered;  // one per panorama
    std::vector<fusion::FillResult> fills;           // one per sphere pair
};

struct WorldBundle {
    geom::PointCloud cloud;
    std::vector<geom::Pose> poses;
    WorldConfig config;
    nlohmann::json provenance;
    std::size_t partial_count = 0;             // points contributed by opened spheres
    std::vector<std::size_t> fill_counts;      // per fill block
    std::optional<StageArtifacts> artifacts;
};

/// Concatenates opened spheres; the pattern must be right, both...both, left.
geom::PointCloud assemble_partial(const std::vector<fusion::OpenedSphere>& spheres);

/// Runs the full pipeline: panorama generation and layering, lifting and
/// opening, pairwise fusion, and assembly.
WorldBundle build_world(const WorldConfig& config, const oracle::OracleSet& oracles);

/// world.ply next to a JSON sidecar (<base>.json) holding poses, the config
/// echo, component counts and the provenance log.
void save_world(const std::filesystem::path& ply_path, const WorldBundle& bundle);
WorldBundle load_world(const std::filesystem::path& ply_path);

}  // namespace panofuse::world
