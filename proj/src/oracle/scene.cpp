#include "panofuse/oracle/scene.hpp"

#include <cmath>
#include <numbers>

#include "panofuse/geom/eqr.hpp"
#include "panofuse/util.hpp"

namespace panofuse::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

// Smooth value noise on a 2-d lattice, bilinear between hashed corners.
double value_noise(std::uint64_t seed, double x, double z, double cell) {
    double gx = x / cell, gz = z / cell;
    auto fx = std::floor(gx);
    auto fz = std::floor(gz);
    std::int64_t ix = static_cast<std::int64_t>(fx);
    std::int64_t iz = static_cast<std::int64_t>(fz);
    double tx = gx - fx, tz = gz - fz;
    auto corner = [&](std::int64_t cx, std::int64_t cz) {
        std::uint64_t h = hash64(seed ^ hash64(static_cast<std::uint64_t>(cx) * 0x9e3779b1ull) ^
                                 hash64(static_cast<std::uint64_t>(cz) + 0x7f4a7c15ull));
        return static_cast<double>(h >> 11) * 0x1.0p-53;
    };
    double sx = tx * tx * (3.0 - 2.0 * tx);
    double sz = tz * tz * (3.0 - 2.0 * tz);
    double a = corner(ix, iz) * (1 - sx) + corner(ix + 1, iz) * sx;
    double b = corner(ix, iz + 1) * (1 - sx) + corner(ix + 1, iz + 1) * sx;
    return a * (1 - sz) + b * sz;
}

double intersect_sphere(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                        const Eigen::Vector3d& center, double radius) {
    Eigen::Vector3d oc = origin - center;
    double b = oc.dot(dir);
    double c = oc.squaredNorm() - radius * radius;
    double disc = b * b - c;
    if (disc < 0.0) return -1.0;
    double sq = std::sqrt(disc);
    double t = -b - sq;
    if (t > 1e-9) return t;
    t = -b + sq;
    return t > 1e-9 ? t : -1.0;
}

}  // namespace

void SceneSpec::validate() const {
    if (!(sky_radius > 0.0)) throw Error("SceneSpec: sky_radius must be positive");
    if (!(ground_height > 0.0)) throw Error("SceneSpec: ground_height must be positive");
    for (const auto& obj : objects) {
        if (!(obj.radius > 0.0)) throw Error("SceneSpec: object radius must be positive");
        if (obj.center.norm() + obj.radius >= sky_radius)
            throw Error("SceneSpec: object escapes the sky dome");
    }
}

SceneSpec SceneSpec::demo(std::uint64_t seed, int object_count) {
    SceneSpec spec;
    spec.seed = seed;
    spec.ground_height = 1.6;
    spec.sky_radius = 25.0;
    std::mt19937_64 rng(seed);
    ScenePalette& pal = spec.palette;
    pal.ground_a = Eigen::Vector3f(0.18f + 0.15f * static_cast<float>(u01(rng)),
                                   0.28f + 0.15f * static_cast<float>(u01(rng)),
                                   0.12f + 0.10f * static_cast<float>(u01(rng)));
    pal.ground_b = Eigen::Vector3f(0.38f + 0.15f * static_cast<float>(u01(rng)),
                                   0.33f + 0.15f * static_cast<float>(u01(rng)),
                                   0.20f + 0.12f * static_cast<float>(u01(rng)));
    // Objects flank the stations of a +X trajectory; the mid-gap corridor is
    // kept clear so inpainted fills never have to invent an object.
    for (int i = 0; i < object_count; ++i) {
        SceneObject obj;
        double along = 4.0 * (i / 2) + (i % 2 == 0 ? 0.6 : -0.7);
        double side = (i % 2 == 0 ? 1.0 : -1.0) * (2.2 + 0.8 * u01(rng));
        obj.radius = 0.75 + 0.35 * u01(rng);
        obj.center = Eigen::Vector3d(along, -spec.ground_height + obj.radius * 0.9, side);
        obj.albedo = Eigen::Vector3f(0.35f + 0.5f * static_cast<float>(u01(rng)),
                                     0.30f + 0.4f * static_cast<float>(u01(rng)),
                                     0.25f + 0.4f * static_cast<float>(u01(rng)));
        spec.objects.push_back(obj);
    }
    spec.validate();
    return spec;
}

void to_json(nlohmann::json& j, const SceneSpec& spec) {
    j = nlohmann::json{{"seed", spec.seed},
                       {"ground_height", spec.ground_height},
                       {"sky_radius", spec.sky_radius}};
    j["objects"] = nlohmann::json::array();
    for (const auto& obj : spec.objects) {
        j["objects"].push_back({{"center", {obj.center.x(), obj.center.y(), obj.center.z()}},
                                {"radius", obj.radius},
                                {"albedo", {obj.albedo.x(), obj.albedo.y(), obj.albedo.z()}}});
    }
    const auto& p = spec.palette;
    j["palette"] = {{"ground_a", {p.ground_a.x(), p.ground_a.y(), p.ground_a.z()}},
                    {"ground_b", {p.ground_b.x(), p.ground_b.y(), p.ground_b.z()}},
                    {"sky_horizon", {p.sky_horizon.x(), p.sky_horizon.y(), p.sky_horizon.z()}},
                    {"sky_zenith", {p.sky_zenith.x(), p.sky_zenith.y(), p.sky_zenith.z()}},
                    {"band_amplitude", p.band_amplitude},
                    {"noise_scale", p.noise_scale}};
}

void from_json(const nlohmann::json& j, SceneSpec& spec) {
    spec = SceneSpec{};
    spec.seed = j.value("seed", std::uint64_t{1});
    spec.ground_height = j.value("ground_height", 1.6);
    spec.sky_radius = j.value("sky_radius", 25.0);
    if (j.contains("objects")) {
        for (const auto& jo : j.at("objects")) {
            SceneObject obj;
            auto c = jo.at("center");
            obj.center = {c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>()};
            obj.radius = jo.at("radius").get<double>();
            if (jo.contains("albedo")) {
                auto a = jo.at("albedo");
                obj.albedo = {a.at(0).get<float>(), a.at(1).get<float>(), a.at(2).get<float>()};
            }
            spec.objects.push_back(obj);
        }
    }
    if (j.contains("palette")) {
        const auto& jp = j.at("palette");
        auto vec3f = [&](const char* key, Eigen::Vector3f fallback) {
            if (!jp.contains(key)) return fallback;
            auto v = jp.at(key);
            return Eigen::Vector3f(v.at(0).get<float>(), v.at(1).get<float>(),
                                   v.at(2).get<float>());
        };
        spec.palette.ground_a = vec3f("ground_a", spec.palette.ground_a);
        spec.palette.ground_b = vec3f("ground_b", spec.palette.ground_b);
        spec.palette.sky_horizon = vec3f("sky_horizon", spec.palette.sky_horizon);
        spec.palette.sky_zenith = vec3f("sky_zenith", spec.palette.sky_zenith);
        spec.palette.band_amplitude = jp.value("band_amplitude", spec.palette.band_amplitude);
        spec.palette.noise_scale = jp.value("noise_scale", spec.palette.noise_scale);
    }
    spec.validate();
}

TraceHit trace_ray(const SceneSpec& scene, const Eigen::Vector3d& origin,
                   const Eigen::Vector3d& dir, const std::vector<char>* skip_object) {
    TraceHit hit;
    hit.distance = std::numeric_limits<double>::infinity();
    hit.hit_kind = -2;

    // sky dome (camera is inside by construction)
    double t_sky = intersect_sphere(origin, dir, Eigen::Vector3d::Zero(), scene.sky_radius);
    if (t_sky > 0.0) {
        hit.distance = t_sky;
    } else {
        hit.distance = scene.sky_radius;  // grazing fallback
    }

    // ground plane y = -h
    if (dir.y() < -1e-12) {
        double t = (-scene.ground_height - origin.y()) / dir.y();
        if (t > 1e-9 && t < hit.distance) {
            hit.distance = t;
            hit.hit_kind = -1;
        }
    }

    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        if (skip_object && (*skip_object)[i]) continue;
        double t = intersect_sphere(origin, dir, scene.objects[i].center, scene.objects[i].radius);
        if (t > 0.0 && t < hit.distance) {
            hit.distance = t;
            hit.hit_kind = static_cast<int>(i);
        }
    }

    hit.position = origin + hit.distance * dir;
    return hit;
}

Eigen::Vector3f shade_hit(const SceneSpec& scene, const TraceHit& hit) {
    const ScenePalette& pal = scene.palette;
    if (hit.hit_kind == -1) {
        double n = value_noise(scene.seed, hit.position.x(), hit.position.z(), pal.noise_scale);
        return pal.ground_a + static_cast<float>(n) * (pal.ground_b - pal.ground_a);
    }
    if (hit.hit_kind == -2) {
        Eigen::Vector3d u = hit.position.normalized();
        double elev = std::clamp(u.y(), -1.0, 1.0);
        double t = std::clamp(0.5 + 0.5 * elev, 0.0, 1.0);
        Eigen::Vector3f base = pal.sky_horizon + static_cast<float>(t) * (pal.sky_zenith - pal.sky_horizon);
        double band = pal.band_amplitude * std::sin(6.0 * std::atan2(u.x(), u.z()));
        Eigen::Vector3f c = base + Eigen::Vector3f::Constant(static_cast<float>(band));
        return c.cwiseMax(0.0f).cwiseMin(1.0f);
    }
    const SceneObject& obj = scene.objects[static_cast<std::size_t>(hit.hit_kind)];
    Eigen::Vector3d normal = (hit.position - obj.center).normalized();
    static const Eigen::Vector3d sun = Eigen::Vector3d(0.4, 0.8, 0.45).normalized();
    double lambert = 0.55 + 0.45 * std::max(0.0, normal.dot(sun));
    Eigen::Vector3f c = obj.albedo * static_cast<float>(lambert);
    return c.cwiseMax(0.0f).cwiseMin(1.0f);
}

void render_scene_eqr(const SceneSpec& scene, const geom::Pose& pose, int width, int height,
                      geom::EqrImage* image, geom::DepthMap* depth,
                      const std::vector<char>* skip_object) {
    if (width != 2 * height || height <= 0)
        throw Error("render_scene_eqr: width must equal 2*height");
    if (image) *image = geom::EqrImage(width, height);
    if (depth) *depth = geom::DepthMap(width, height);
    parallel_for(static_cast<std::size_t>(height), [&](std::size_t begin, std::size_t end) {
        for (std::size_t yy = begin; yy < end; ++yy) {
            int y = static_cast<int>(yy);
            for (int x = 0; x < width; ++x) {
                Eigen::Vector3d dir =
                    pose.rotation * geom::pixel_to_direction(static_cast<double>(x),
                                                             static_cast<double>(y), width, height);
                TraceHit hit = trace_ray(scene, pose.translation, dir, skip_object);
                if (image) image->at(x, y) = shade_hit(scene, hit);
                if (depth) depth->at(x, y) = hit.distance;
            }
        }
    });
}

geom::BitMask object_silhouette(const SceneSpec& scene, const geom::Pose& pose, int width,
                                int height, int object_index) {
    geom::BitMask mask(width, height);
    parallel_for(static_cast<std::size_t>(height), [&](std::size_t begin, std::size_t end) {
        for (std::size_t yy = begin; yy < end; ++yy) {
            int y = static_cast<int>(yy);
            for (int x = 0; x < width; ++x) {
                Eigen::Vector3d dir =
                    pose.rotation * geom::pixel_to_direction(static_cast<double>(x),
                                                             static_cast<double>(y), width, height);
                TraceHit hit = trace_ray(scene, pose.translation, dir);
                if (hit.hit_kind == object_index) mask.set(x, y, true);
            }
        }
    });
    return mask;
}

}  // namespace panofuse::oracle
