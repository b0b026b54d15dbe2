#include "panofuse/world/world.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <numbers>

#include "panofuse/geom/backproject.hpp"
#include "panofuse/io/ply_io.hpp"
#include "panofuse/util.hpp"

namespace panofuse::world {

using fusion::OpenedSphere;
using fusion::Opening;
using geom::DepthMap;
using geom::EqrImage;
using geom::PointCloud;
using geom::Pose;

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
        .count();
}

fusion::OpeningParams opening_params(const WorldConfig& config) {
    fusion::OpeningParams p;
    p.alpha = config.opening.alpha_deg * std::numbers::pi / 180.0;
    p.radius = config.opening.radius;
    p.auto_percentile = config.opening.auto_percentile;
    p.project_all = config.opening.project_all;
    return p;
}

}  // namespace

PointCloud assemble_partial(const std::vector<OpenedSphere>& spheres) {
    if (spheres.size() < 2) throw Error("assemble_partial: need at least two spheres");
    for (std::size_t i = 0; i < spheres.size(); ++i) {
        Opening expected = i == 0                     ? Opening::right
                           : i == spheres.size() - 1 ? Opening::left
                                                     : Opening::both;
        if (spheres[i].opening != expected)
            throw Error("assemble_partial: sphere " + std::to_string(i) +
                        " has the wrong opening pattern");
    }
    PointCloud out;
    std::size_t total = 0;
    for (const auto& s : spheres) total += s.cloud.size();
    out.reserve(total);
    for (const auto& s : spheres) out = geom::merge_clouds(out, s.cloud);
    return out;
}

WorldBundle build_world(const WorldConfig& config, const oracle::OracleSet& oracles) {
    config.validate();
    if (!oracles.panorama || !oracles.inpainter || !oracles.depth || !oracles.segmenter)
        throw Error("build_world: incomplete oracle set");

    const Eigen::Vector3d direction = Eigen::Vector3d::UnitX();
    const int n = config.panoramas;
    const int w = config.width, h = config.height;

    WorldBundle bundle;
    bundle.config = config;
    if (config.keep_artifacts) bundle.artifacts.emplace();

    nlohmann::json& prov = bundle.provenance;
    prov["seed"] = config.seed;
    prov["stages"] = nlohmann::json::array();
    prov["oracle_calls"] = nlohmann::json::array();
    prov["pairs"] = nlohmann::json::array();
    auto log_call = [&](const char* kind, int index, double ms) {
        prov["oracle_calls"].push_back({{"kind", kind}, {"index", index}, {"ms", ms}});
    };

    auto t_stage1 = std::chrono::steady_clock::now();

    // Stage I: panoramas, layered panoramas, spheres.
    std::vector<EqrImage> images(n);
    std::vector<DepthMap> depths(n);
    std::vector<Pose> poses(n);
    std::vector<PointCloud> spheres(n);
    double lambda = config.lambda.value;  // resolved after the first panorama in median mode
    double footprint = config.splat.footprint;

    for (int i = 0; i < n; ++i) {
        poses[i] = i == 0 ? Pose::identity()
                          : geom::translate_pose(poses[i - 1], lambda * direction);
        auto t0 = std::chrono::steady_clock::now();
        auto [image, maybe_depth] = oracles.panorama->generate(config.prompt, poses[i], w, h);
        log_call("panorama", i, elapsed_ms(t0));
        if (maybe_depth) {
            depths[i] = std::move(*maybe_depth);
        } else {
            t0 = std::chrono::steady_clock::now();
            depths[i] = oracles.depth->estimate(image, poses[i]);
            log_call("depth", i, elapsed_ms(t0));
        }
        images[i] = std::move(image);
        if (!depths[i].fully_defined())
            throw Error("build_world[stage I, panorama " + std::to_string(i) +
                        "]: depth not fully defined");

        double med = median(std::vector<double>(depths[i].values));
        if (config.normalize_scale) {
            for (double& v : depths[i].values) v /= med;
            med = 1.0;
        }
        if (i == 0) {
            if (config.lambda.mode == LambdaMode::median_factor) lambda = config.lambda.value * med;
            if (footprint <= 0.0) footprint = 2.0 * med * (2.0 * std::numbers::pi / w);
        }

        if (config.ldp_enabled) {
            ldp::LayeredDepthPanorama layered =
                ldp::build_ldp(images[i], depths[i], *oracles.segmenter, *oracles.inpainter,
                               config.ldp, config.prompt, poses[i]);
            log_call("segment+inpaint(ldp)", i, 0.0);
            PointCloud fg = geom::backproject_spherical(layered.fg_image, layered.fg_depth, poses[i]);
            PointCloud bg = geom::backproject_spherical(layered.bg_image, layered.bg_depth, poses[i]);
            spheres[i] = geom::merge_clouds(fg, bg);
            if (bundle.artifacts) bundle.artifacts->layered.push_back(std::move(layered));
        } else {
            spheres[i] = geom::backproject_spherical(images[i], depths[i], poses[i]);
        }
    }
    bundle.poses = poses;
    prov["lambda"] = lambda;
    prov["splat_footprint"] = footprint;
    prov["stages"].push_back({{"name", "I:spheres"}, {"ms", elapsed_ms(t_stage1)}});

    // Openings: per-pair facing openings plus the assembly pattern.
    auto t_open = std::chrono::steady_clock::now();
    fusion::OpeningParams opening = opening_params(config);
    std::vector<OpenedSphere> right_open(n), left_open(n), pattern(n);
    for (int i = 0; i < n; ++i) {
        if (i < n - 1)
            right_open[i] = fusion::open_sphere(spheres[i], poses[i], Opening::right, direction,
                                                opening);
        if (i > 0)
            left_open[i] = fusion::open_sphere(spheres[i], poses[i], Opening::left, direction,
                                               opening);
        Opening part = i == 0 ? Opening::right : i == n - 1 ? Opening::left : Opening::both;
        pattern[i] = fusion::open_sphere(spheres[i], poses[i], part, direction, opening);
    }
    prov["stages"].push_back({{"name", "I:openings"}, {"ms", elapsed_ms(t_open)}});

    // Stage II: pairwise generative fusion.
    auto t_stage2 = std::chrono::steady_clock::now();
    fusion::FillParams fill_params;
    fill_params.width = w;
    fill_params.height = h;
    fill_params.prompt = config.prompt;
    fill_params.splat = config.splat;
    fill_params.splat.footprint = footprint;
    fill_params.blend = config.blend;
    fill_params.blend_mode = config.blend_mode;

    std::vector<PointCloud> fills(n - 1);
    for (int i = 0; i < n - 1; ++i) {
        Pose t_mid = fusion::intermediate_pose(poses[i], lambda, direction);
        fusion::FillResult fill;
        try {
            fill = fusion::build_fill_block(right_open[i], left_open[i + 1], t_mid,
                                            *oracles.inpainter, *oracles.depth, fill_params);
        } catch (const std::exception& e) {
            throw Error("build_world[stage II, pair " + std::to_string(i) + "]: " + e.what());
        }
        log_call("fill", i, 0.0);

        fills[i] = fill.block.cloud;
        if (config.intermediate_ldp && !fill.block.cloud.empty()) {
            // The intermediate view gets a background layer like any panorama.
            try {
                ldp::LayeredDepthPanorama layered =
                    ldp::build_ldp(fill.inpainted, fill.blended_depth, *oracles.segmenter,
                                   *oracles.inpainter, config.ldp, config.prompt, t_mid);
                PointCloud bg = geom::backproject_spherical(layered.bg_image, layered.bg_depth,
                                                            t_mid, &fill.block.fill_mask);
                fills[i] = geom::merge_clouds(fills[i], bg);
            } catch (const std::exception& e) {
                throw Error("build_world[stage II, pair " + std::to_string(i) +
                            ", intermediate ldp]: " + e.what());
            }
        }

        if (fill.diagnostics.geometry_warning)
            std::cerr << "build_world: pair " << i << " fill fraction "
                      << fill.diagnostics.fill_fraction << " outside [0.02, 0.9]\n";
        prov["pairs"].push_back({{"pair", i},
                                 {"fill_fraction", fill.diagnostics.fill_fraction},
                                 {"solver_residual", fill.diagnostics.solver_residual},
                                 {"boundary_mismatch", fill.diagnostics.max_boundary_mismatch},
                                 {"transition_score", fill.diagnostics.transition_score},
                                 {"geometry_warning", fill.diagnostics.geometry_warning}});
        if (bundle.artifacts) bundle.artifacts->fills.push_back(std::move(fill));
    }
    prov["stages"].push_back({{"name", "II:fusion"}, {"ms", elapsed_ms(t_stage2)}});

    // Stage III: assembly.
    auto t_stage3 = std::chrono::steady_clock::now();
    PointCloud partial = assemble_partial(pattern);
    bundle.partial_count = partial.size();
    bundle.cloud = std::move(partial);
    for (auto& fill : fills) {
        bundle.fill_counts.push_back(fill.size());
        bundle.cloud = geom::merge_clouds(bundle.cloud, fill);
    }
    prov["stages"].push_back({{"name", "III:assembly"}, {"ms", elapsed_ms(t_stage3)}});
    prov["point_count"] = bundle.cloud.size();
    return bundle;
}

void save_world(const std::filesystem::path& ply_path, const WorldBundle& bundle) {
    io::write_ply(ply_path, bundle.cloud);
    nlohmann::json j;
    j["poses"] = nlohmann::json::array();
    for (const auto& pose : bundle.poses) {
        nlohmann::json jp;
        jp["rotation"] = nlohmann::json::array();
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) jp["rotation"].push_back(pose.rotation(r, c));
        jp["translation"] = {pose.translation.x(), pose.translation.y(), pose.translation.z()};
        j["poses"].push_back(jp);
    }
    to_json(j["config"], bundle.config);
    j["partial_count"] = bundle.partial_count;
    j["fill_counts"] = bundle.fill_counts;
    j["provenance"] = bundle.provenance;

    std::filesystem::path sidecar = ply_path;
    sidecar.replace_extension(".json");
    std::ofstream out(sidecar);
    if (!out) throw Error("cannot write sidecar: " + sidecar.string());
    out << j.dump(2) << "\n";
}

WorldBundle load_world(const std::filesystem::path& ply_path) {
    WorldBundle bundle;
    bundle.cloud = io::read_ply(ply_path);

    std::filesystem::path sidecar = ply_path;
    sidecar.replace_extension(".json");
    std::ifstream in(sidecar);
    if (!in) {
        std::cerr << "load_world: no sidecar at " << sidecar << "; using identity pose\n";
        bundle.poses = {Pose::identity()};
        return bundle;
    }
    nlohmann::json j = nlohmann::json::parse(in);
    for (const auto& jp : j.at("poses")) {
        Pose pose;
        const auto& r = jp.at("rotation");
        for (int row = 0; row < 3; ++row)
            for (int c = 0; c < 3; ++c) pose.rotation(row, c) = r.at(3 * row + c).get<double>();
        const auto& t = jp.at("translation");
        pose.translation = {t.at(0).get<double>(), t.at(1).get<double>(), t.at(2).get<double>()};
        bundle.poses.push_back(pose);
    }
    if (j.contains("config")) from_json(j.at("config"), bundle.config);
    bundle.partial_count = j.value("partial_count", std::size_t{0});
    if (j.contains("fill_counts"))
        bundle.fill_counts = j.at("fill_counts").get<std::vector<std::size_t>>();
    if (j.contains("provenance")) bundle.provenance = j.at("provenance");
    return bundle;
}

}  // namespace panofuse::world
