#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "panofuse/geom/pose.hpp"
#include "panofuse/geom/raster.hpp"

#include <json.hpp>

namespace panofuse::oracle {

/// Procedural test world: a ground plane at y = -ground_height, a sky dome of
/// sky_radius centered at the world origin, and a handful of matte spheres.
/// Colors depend only on the hit position, so views from different poses are
/// mutually consistent.
struct SceneObject {
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    double radius = 1.0;
    Eigen::Vector3f albedo = Eigen::Vector3f(0.5f, 0.5f, 0.5f);
};

struct ScenePalette {
    Eigen::Vector3f ground_a = Eigen::Vector3f(0.24f, 0.34f, 0.16f);
    Eigen::Vector3f ground_b = Eigen::Vector3f(0.45f, 0.40f, 0.26f);
    Eigen::Vector3f sky_horizon = Eigen::Vector3f(0.76f, 0.82f, 0.90f);
    Eigen::Vector3f sky_zenith = Eigen::Vector3f(0.25f, 0.42f, 0.72f);
    double band_amplitude = 0.06;  // azimuthal color banding on the dome
    double noise_scale = 2.0;      // world units per ground-noise lattice cell
};

struct SceneSpec {
    std::uint64_t seed = 1;
    double ground_height = 1.6;
    double sky_radius = 25.0;
    std::vector<SceneObject> objects;
    ScenePalette palette;

    void validate() const;

    /// Small outdoor scene with objects placed near (not between) the camera
    /// stations of a +X trajectory.
    static SceneSpec demo(std::uint64_t seed, int object_count);
};

void to_json(nlohmann::json& j, const SceneSpec& spec);
void from_json(const nlohmann::json& j, SceneSpec& spec);

/// Nearest-hit query. hit_kind: index >= 0 for objects, -1 ground, -2 sky.
struct TraceHit {
    double distance = 0.0;
    int hit_kind = -2;
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
};

/// skip_object[i] true drops object i from the trace (ground and sky remain).
TraceHit trace_ray(const SceneSpec& scene, const Eigen::Vector3d& origin,
                   const Eigen::Vector3d& dir, const std::vector<char>* skip_object = nullptr);

Eigen::Vector3f shade_hit(const SceneSpec& scene, const TraceHit& hit);

/// Exact equirectangular render of the scene from a pose.
void render_scene_eqr(const SceneSpec& scene, const geom::Pose& pose, int width, int height,
                      geom::EqrImage* image, geom::DepthMap* depth,
                      const std::vector<char>* skip_object = nullptr);

/// Visible silhouette of one object (pixels whose nearest hit is the object).
geom::BitMask object_silhouette(const SceneSpec& scene, const geom::Pose& pose, int width,
                                int height, int object_index);

}  // namespace panofuse::oracle
