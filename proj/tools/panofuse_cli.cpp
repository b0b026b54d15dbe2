// Command-line driver: world generation, trajectory rendering, evaluation,
// ablations, the depth-completion harness, and world inspection.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include "panofuse/evalkit/depthfill.hpp"
#include "panofuse/evalkit/report.hpp"
#include "panofuse/io/image_io.hpp"
#include "panofuse/oracle/http.hpp"
#include "panofuse/oracle/synthetic.hpp"
#include "panofuse/world/world.hpp"

namespace fs = std::filesystem;
using namespace panofuse;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

struct CommonEvalFlags {
    int count = 20;
    std::uint64_t seed = 0;
    double fov_deg = 90.0;
    int size = 192;
    double pitch_deg = 45.0;
    double translation_fraction = 0.8;
};

void add_eval_flags(CLI::App* cmd, CommonEvalFlags& flags) {
    cmd->add_option("--count", flags.count, "poses per trajectory mode");
    cmd->add_option("--eval-seed", flags.seed, "trajectory sampling seed");
    cmd->add_option("--fov", flags.fov_deg, "perspective field of view, degrees");
    cmd->add_option("--size", flags.size, "perspective frame size, pixels");
    cmd->add_option("--pitch", flags.pitch_deg, "pitch range, degrees");
    cmd->add_option("--translation-fraction", flags.translation_fraction,
                    "usable fraction of the trajectory length");
}

evalkit::TrajectorySpec trajectory_spec(const CommonEvalFlags& flags) {
    evalkit::TrajectorySpec spec;
    spec.count = flags.count;
    spec.seed = flags.seed;
    spec.pitch_range = flags.pitch_deg * kPi / 180.0;
    spec.translation_fraction = flags.translation_fraction;
    spec.fov_x = flags.fov_deg * kPi / 180.0;
    return spec;
}

render::PerspectiveIntrinsics intrinsics_for(const CommonEvalFlags& flags) {
    return {flags.size, flags.size, flags.fov_deg * kPi / 180.0};
}

// World-config flags; only flags the user actually passed override the file.
struct ConfigFlags {
    std::string config_path;
    std::string scene_path;
    world::WorldConfig values;
    CLI::App* cmd = nullptr;

    void add(CLI::App* app) {
        cmd = app;
        app->add_option("--config", config_path, "JSON config file");
        app->add_option("--scene", scene_path, "scene spec JSON (synthetic oracle)");
        app->add_option("--prompt", values.prompt, "scene prompt");
        app->add_option("--n", values.panoramas, "panorama count (N > 1)");
        app->add_option("--width", values.width, "panorama width (2x height)");
        app->add_option("--height", values.height, "panorama height");
        app->add_option("--lambda-mode", lambda_mode, "absolute | median");
        app->add_option("--lambda-value", values.lambda.value, "spacing or median multiple");
        app->add_option("--alpha-deg", values.opening.alpha_deg, "opening half-angle, degrees");
        app->add_option("--radius", values.opening.radius, "opening cylinder radius (0 = auto)");
        app->add_option("--radius-percentile", values.opening.auto_percentile,
                        "auto-radius percentile");
        app->add_flag("--project-all", values.opening.project_all,
                      "pull outward-lying band points onto the cylinder too");
        app->add_option("--blend-k", values.blend.k, "k-NN neighbors");
        app->add_option("--blend-tol", values.blend.tol, "solver relative residual");
        app->add_option("--blend-max-iter-factor", values.blend.max_iter_factor,
                        "max iterations as a multiple of node count");
        app->add_option("--node-cap", values.blend.node_cap, "deformable node cap");
        app->add_option("--blend-mode", blend_mode, "harmonic | naive | interpolation");
        app->add_option("--splat-footprint", values.splat.footprint,
                        "splat footprint, world units (0 = auto)");
        app->add_option("--splat-max-radius", values.splat.max_radius_px, "max splat radius, px");
        app->add_flag("--ldp,!--no-ldp", values.ldp_enabled, "layered panoramas on/off");
        app->add_option("--eps", values.ldp.eps, "boundary sample offset, px");
        app->add_option("--sigma", values.ldp.sigma, "normal smoothing, px");
        app->add_option("--canny-low", values.ldp.canny_low, "relative low threshold");
        app->add_option("--canny-high", values.ldp.canny_high, "relative high threshold");
        app->add_option("--threshold-factor", values.ldp.threshold_factor,
                        "foreground threshold as a median-depth multiple");
        app->add_option("--min-samples", values.ldp.min_samples, "minimum boundary samples");
        app->add_flag("--intermediate-ldp,!--no-intermediate-ldp", values.intermediate_ldp,
                      "background layer for intermediate views");
        app->add_flag("--normalize-scale,!--no-normalize-scale", values.normalize_scale,
                      "median-depth normalization per sphere");
        app->add_option("--oracle", oracle_kind, "synthetic | http");
        app->add_option("--base-url", values.oracle.base_url, "oracle server base URL");
        app->add_option("--timeout", values.oracle.timeout_s, "oracle timeout, seconds");
        app->add_option("--retries", values.oracle.retries, "oracle retry attempts");
        app->add_option("--depth-scale", values.oracle.depth_corruption.scale,
                        "synthetic depth scale error");
        app->add_option("--depth-offset", values.oracle.depth_corruption.offset,
                        "synthetic depth offset error");
        app->add_option("--depth-noise", values.oracle.depth_corruption.noise_amplitude,
                        "synthetic depth noise amplitude");
        app->add_option("--depth-jitter", values.oracle.depth_corruption.scale_jitter,
                        "per-panorama scale jitter");
        app->add_option("--distractors", values.oracle.distractors, "distractor mask count");
        app->add_option("--seed", values.seed, "pipeline seed");
        app->add_flag("--keep-artifacts", values.keep_artifacts, "retain per-stage rasters");
    }

    world::WorldConfig resolve() const {
        world::WorldConfig config;
        if (cmd->count("--config")) config = world::load_config(config_path);
        auto passed = [&](const std::string& flag) { return cmd->count(flag) > 0; };
        if (passed("--prompt")) config.prompt = values.prompt;
        if (passed("--n")) config.panoramas = values.panoramas;
        if (passed("--width")) config.width = values.width;
        if (passed("--height")) config.height = values.height;
        if (passed("--lambda-mode"))
            config.lambda.mode = lambda_mode == "absolute" ? world::LambdaMode::absolute
                                                           : world::LambdaMode::median_factor;
        if (passed("--lambda-value")) config.lambda.value = values.lambda.value;
        if (passed("--alpha-deg")) config.opening.alpha_deg = values.opening.alpha_deg;
        if (passed("--radius")) config.opening.radius = values.opening.radius;
        if (passed("--radius-percentile"))
            config.opening.auto_percentile = values.opening.auto_percentile;
        if (passed("--project-all")) config.opening.project_all = values.opening.project_all;
        if (passed("--blend-k")) config.blend.k = values.blend.k;
        if (passed("--blend-tol")) config.blend.tol = values.blend.tol;
        if (passed("--blend-max-iter-factor"))
            config.blend.max_iter_factor = values.blend.max_iter_factor;
        if (passed("--node-cap")) config.blend.node_cap = values.blend.node_cap;
        if (passed("--blend-mode")) {
            if (blend_mode == "harmonic") config.blend_mode = fusion::BlendMode::harmonic;
            else if (blend_mode == "naive") config.blend_mode = fusion::BlendMode::naive;
            else if (blend_mode == "interpolation")
                config.blend_mode = fusion::BlendMode::interpolation;
            else throw Error("unknown blend mode: " + blend_mode);
        }
        if (passed("--splat-footprint")) config.splat.footprint = values.splat.footprint;
        if (passed("--splat-max-radius")) config.splat.max_radius_px = values.splat.max_radius_px;
        if (passed("--ldp") || passed("--no-ldp")) config.ldp_enabled = values.ldp_enabled;
        if (passed("--eps")) config.ldp.eps = values.ldp.eps;
        if (passed("--sigma")) config.ldp.sigma = values.ldp.sigma;
        if (passed("--canny-low")) config.ldp.canny_low = values.ldp.canny_low;
        if (passed("--canny-high")) config.ldp.canny_high = values.ldp.canny_high;
        if (passed("--threshold-factor"))
            config.ldp.threshold_factor = values.ldp.threshold_factor;
        if (passed("--min-samples")) config.ldp.min_samples = values.ldp.min_samples;
        if (passed("--intermediate-ldp") || passed("--no-intermediate-ldp"))
            config.intermediate_ldp = values.intermediate_ldp;
        if (passed("--normalize-scale") || passed("--no-normalize-scale"))
            config.normalize_scale = values.normalize_scale;
        if (passed("--oracle"))
            config.oracle.kind = oracle_kind == "http" ? world::OracleKind::http
                                                       : world::OracleKind::synthetic;
        if (passed("--base-url")) config.oracle.base_url = values.oracle.base_url;
        if (passed("--timeout")) config.oracle.timeout_s = values.oracle.timeout_s;
        if (passed("--retries")) config.oracle.retries = values.oracle.retries;
        if (passed("--depth-scale"))
            config.oracle.depth_corruption.scale = values.oracle.depth_corruption.scale;
        if (passed("--depth-offset"))
            config.oracle.depth_corruption.offset = values.oracle.depth_corruption.offset;
        if (passed("--depth-noise"))
            config.oracle.depth_corruption.noise_amplitude =
                values.oracle.depth_corruption.noise_amplitude;
        if (passed("--depth-jitter"))
            config.oracle.depth_corruption.scale_jitter =
                values.oracle.depth_corruption.scale_jitter;
        if (passed("--distractors")) config.oracle.distractors = values.oracle.distractors;
        if (passed("--seed")) config.seed = values.seed;
        if (passed("--keep-artifacts")) config.keep_artifacts = values.keep_artifacts;
        if (passed("--scene")) {
            std::ifstream in(scene_path);
            if (!in) throw Error("cannot open scene: " + scene_path);
            json j = json::parse(in);
            from_json(j, config.oracle.scene);
        }
        config.oracle.depth_corruption.seed = config.seed;
        config.validate();
        return config;
    }

    std::string lambda_mode = "median";
    std::string blend_mode = "harmonic";
    std::string oracle_kind = "synthetic";
};

oracle::OracleSet make_oracles(const world::WorldConfig& config) {
    if (config.oracle.kind == world::OracleKind::http) {
        oracle::HttpConfig http;
        http.base_url = config.oracle.base_url;
        http.timeout_s = config.oracle.timeout_s;
        http.retries = config.oracle.retries;
        http.backoff_s = config.oracle.backoff_s;
        return oracle::make_http_oracles(http);
    }
    return oracle::make_synthetic_oracles(config.oracle.scene, config.oracle.depth_corruption,
                                          config.oracle.distractors);
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

void dump_debug_rasters(const fs::path& dir, const world::WorldBundle& bundle) {
    if (!bundle.artifacts) return;
    const auto& art = *bundle.artifacts;
    for (std::size_t i = 0; i < art.layered.size(); ++i) {
        std::string tag = (i < 10 ? "0" : "") + std::to_string(i);
        io::write_png(dir / ("panorama_" + tag + ".png"), art.layered[i].fg_image);
        io::write_pfm(dir / ("depth_" + tag + ".pfm"), art.layered[i].fg_depth);
        io::write_png(dir / ("fg_mask_" + tag + ".png"), art.layered[i].fg_mask);
        io::write_png(dir / ("background_" + tag + ".png"), art.layered[i].bg_image);
        io::write_pfm(dir / ("background_depth_" + tag + ".pfm"), art.layered[i].bg_depth);
    }
    for (std::size_t i = 0; i < art.fills.size(); ++i) {
        std::string tag = (i < 10 ? "0" : "") + std::to_string(i);
        io::write_png(dir / ("capsule_" + tag + ".png"), art.fills[i].capsule.image);
        io::write_pfm(dir / ("capsule_depth_" + tag + ".pfm"), art.fills[i].capsule.depth);
        io::write_png(dir / ("visibility_" + tag + ".png"), art.fills[i].capsule.visibility);
        if (art.fills[i].inpainted.width > 0)
            io::write_png(dir / ("inpainted_" + tag + ".png"), art.fills[i].inpainted);
        if (art.fills[i].estimated_depth.width > 0)
            io::write_pfm(dir / ("estimated_depth_" + tag + ".pfm"),
                          art.fills[i].estimated_depth);
        if (art.fills[i].blended_depth.width > 0)
            io::write_pfm(dir / ("blended_depth_" + tag + ".pfm"), art.fills[i].blended_depth);
    }
}

json poses_json(const std::vector<geom::Pose>& poses) {
    json out = json::array();
    for (const auto& pose : poses) {
        json jp;
        jp["rotation"] = json::array();
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) jp["rotation"].push_back(pose.rotation(r, c));
        jp["translation"] = {pose.translation.x(), pose.translation.y(), pose.translation.z()};
        out.push_back(jp);
    }
    return out;
}

int run_generate(const ConfigFlags& flags, const std::string& out_dir, bool debug) {
    world::WorldConfig config = flags.resolve();
    if (debug) config.keep_artifacts = true;
    fs::create_directories(out_dir);
    oracle::OracleSet oracles = make_oracles(config);
    world::WorldBundle bundle = world::build_world(config, oracles);
    world::save_world(fs::path(out_dir) / "world.ply", bundle);
    write_json(fs::path(out_dir) / "poses.json", poses_json(bundle.poses));
    write_json(fs::path(out_dir) / "provenance.json", bundle.provenance);
    if (debug) dump_debug_rasters(out_dir, bundle);
    std::cout << "world: " << bundle.cloud.size() << " points, " << bundle.poses.size()
              << " stations -> " << out_dir << "\n";
    return 0;
}

render::SplatParams splat_from_bundle(const world::WorldBundle& bundle) {
    render::SplatParams splat = bundle.config.splat;
    if (splat.footprint <= 0.0 && bundle.provenance.contains("splat_footprint"))
        splat.footprint = bundle.provenance.at("splat_footprint").get<double>();
    return splat;
}

int run_render(const std::string& world_path, const std::string& mode_name,
               const CommonEvalFlags& flags, const std::string& out_dir) {
    world::WorldBundle bundle = world::load_world(world_path);
    fs::create_directories(out_dir);

    evalkit::TrajectorySpec spec = trajectory_spec(flags);
    if (mode_name == "rotation") spec.mode = evalkit::TrajectoryMode::rotation;
    else if (mode_name == "translation") spec.mode = evalkit::TrajectoryMode::translation;
    else if (mode_name == "combined") spec.mode = evalkit::TrajectoryMode::combined;
    else throw Error("unknown trajectory mode: " + mode_name);

    std::vector<geom::Pose> poses = evalkit::sample_trajectories(spec, bundle.poses);
    render::PerspectiveIntrinsics intr = intrinsics_for(flags);
    render::SplatParams splat = splat_from_bundle(bundle);

    json manifest;
    manifest["mode"] = mode_name;
    manifest["frames"] = json::array();
    for (std::size_t i = 0; i < poses.size(); ++i) {
        render::RenderOutput out = render::render_perspective(bundle.cloud, poses[i], intr, splat);
        char tag[16];
        std::snprintf(tag, sizeof(tag), "%04zu", i);
        io::write_png(fs::path(out_dir) / ("frame_" + std::string(tag) + ".png"), out.image);
        io::write_pfm(fs::path(out_dir) / ("depth_" + std::string(tag) + ".pfm"), out.depth);
        io::write_png(fs::path(out_dir) / ("vis_" + std::string(tag) + ".png"), out.visibility);
        double cov = evalkit::coverage(out.visibility);
        json frame;
        frame["index"] = i;
        frame["coverage"] = cov;
        frame["pose"] = poses_json({poses[i]})[0];
        manifest["frames"].push_back(frame);
        if (cov == 0.0) std::cerr << "frame " << i << ": coverage 0 (empty view)\n";
    }
    write_json(fs::path(out_dir) / "frames.json", manifest);
    std::cout << "rendered " << poses.size() << " frames -> " << out_dir << "\n";
    return 0;
}

std::vector<evalkit::TrajectoryMode> all_modes() {
    return {evalkit::TrajectoryMode::rotation, evalkit::TrajectoryMode::translation,
            evalkit::TrajectoryMode::combined};
}

int run_eval(const std::string& world_path, const std::string& scene_path,
             const CommonEvalFlags& flags, const std::string& out_dir) {
    world::WorldBundle bundle = world::load_world(world_path);
    fs::create_directories(out_dir);

    std::optional<oracle::SceneSpec> scene;
    if (!scene_path.empty()) {
        std::ifstream in(scene_path);
        if (!in) throw Error("cannot open scene: " + scene_path);
        oracle::SceneSpec s;
        from_json(json::parse(in), s);
        scene = s;
    } else if (bundle.config.oracle.kind == world::OracleKind::synthetic) {
        scene = bundle.config.oracle.scene;  // ground truth from the sidecar
    }

    evalkit::EvalReport report = evalkit::evaluate_world(
        bundle.cloud, bundle.poses, trajectory_spec(flags), all_modes(), intrinsics_for(flags),
        splat_from_bundle(bundle), scene ? &*scene : nullptr);
    write_json(fs::path(out_dir) / "eval.json", evalkit::report_to_json(report));
    std::string table = evalkit::report_table({{"panofuse", report}});
    write_text(fs::path(out_dir) / "table.txt", table);
    std::cout << table;
    return 0;
}

int run_ablate(const ConfigFlags& flags, const CommonEvalFlags& eval_flags,
               const std::string& out_dir) {
    world::WorldConfig base = flags.resolve();
    fs::create_directories(out_dir);

    struct Variant {
        std::string name;
        world::WorldConfig config;
    };
    std::vector<Variant> variants;
    variants.push_back({"full", base});
    {
        world::WorldConfig c = base;
        c.ldp_enabled = false;
        variants.push_back({"no-ldp", c});
    }
    {
        world::WorldConfig c = base;
        c.blend_mode = fusion::BlendMode::naive;
        variants.push_back({"naive-blend", c});
    }
    {
        world::WorldConfig c = base;
        c.blend_mode = fusion::BlendMode::interpolation;
        variants.push_back({"interpolation-blend", c});
    }

    std::vector<std::pair<std::string, evalkit::EvalReport>> rows;
    json per_variant;
    std::vector<evalkit::TrajectoryMode> modes = {evalkit::TrajectoryMode::combined};
    for (const auto& variant : variants) {
        oracle::OracleSet oracles = make_oracles(variant.config);
        world::WorldBundle bundle = world::build_world(variant.config, oracles);
        render::SplatParams splat = splat_from_bundle(bundle);
        evalkit::EvalReport report = evalkit::evaluate_world(
            bundle.cloud, bundle.poses, trajectory_spec(eval_flags), modes,
            intrinsics_for(eval_flags), splat,
            variant.config.oracle.kind == world::OracleKind::synthetic
                ? &variant.config.oracle.scene
                : nullptr);
        per_variant[variant.name] = evalkit::report_to_json(report);
        rows.emplace_back(variant.name, std::move(report));
    }
    write_json(fs::path(out_dir) / "ablate.json", per_variant);
    std::string table = evalkit::report_table(rows);
    write_text(fs::path(out_dir) / "table.txt", table);
    std::cout << table;
    return 0;
}

int run_depthfill(const ConfigFlags& flags, int scenes, double fraction, double scale_min,
                  double scale_max, double noise, const std::string& out_dir) {
    world::WorldConfig base = flags.resolve();
    fs::create_directories(out_dir);

    json results = json::array();
    int hb_best_both = 0;
    for (int s = 0; s < scenes; ++s) {
        oracle::SceneSpec scene =
            scenes == 1 ? base.oracle.scene
                        : oracle::SceneSpec::demo(base.seed + 100 + s, 2);
        oracle::DepthCorruption corruption;
        corruption.scale =
            scenes == 1 ? scale_min
                        : scale_min + (scale_max - scale_min) * s / std::max(1, scenes - 1);
        corruption.noise_amplitude = noise;
        corruption.seed = base.seed + s;
        evalkit::DepthFillCase c = evalkit::make_depthfill_case(
            scene, geom::Pose::identity(), base.width, base.height, fraction, corruption,
            base.seed + 1000 + s);
        evalkit::DepthFillResult r = evalkit::run_depthfill(c, base.blend);
        bool ordered = r.harmonic.transition < r.interpolation.transition &&
                       r.interpolation.transition < r.naive.transition &&
                       r.harmonic.band_mae < r.interpolation.band_mae &&
                       r.interpolation.band_mae < r.naive.band_mae;
        hb_best_both += ordered;
        results.push_back({{"scene", s},
                           {"scale", corruption.scale},
                           {"harmonic",
                            {{"transition", r.harmonic.transition},
                             {"band_mae", r.harmonic.band_mae}}},
                           {"interpolation",
                            {{"transition", r.interpolation.transition},
                             {"band_mae", r.interpolation.band_mae}}},
                           {"naive",
                            {{"transition", r.naive.transition},
                             {"band_mae", r.naive.band_mae}}},
                           {"ordering_held", ordered}});
    }
    json out = {{"scenes", results}, {"ordering_held_count", hb_best_both}};
    write_json(fs::path(out_dir) / "depthfill.json", out);

    std::ostringstream table;
    table << "method          transition   band_mae (means over " << scenes << " scenes)\n";
    auto mean = [&](const char* method, const char* key) {
        double acc = 0;
        for (const auto& r : results) acc += r.at(method).at(key).get<double>();
        return acc / results.size();
    };
    for (const char* method : {"harmonic", "interpolation", "naive"}) {
        char line[128];
        std::snprintf(line, sizeof(line), "%-15s %.6f     %.6f\n", method,
                      mean(method, "transition"), mean(method, "band_mae"));
        table << line;
    }
    write_text(fs::path(out_dir) / "table.txt", table.str());
    std::cout << table.str();
    std::cout << "ordering held on " << hb_best_both << "/" << scenes << " scenes\n";
    return 0;
}

int run_inspect(const std::string& world_path) {
    world::WorldBundle bundle = world::load_world(world_path);
    json j;
    j["points"] = bundle.cloud.size();
    j["stations"] = bundle.poses.size();
    j["partial_count"] = bundle.partial_count;
    j["fill_counts"] = bundle.fill_counts;
    if (!bundle.cloud.empty()) {
        Eigen::Vector3d lo = bundle.cloud.positions[0], hi = lo;
        for (const auto& p : bundle.cloud.positions) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        j["bbox"] = {{"min", {lo.x(), lo.y(), lo.z()}}, {"max", {hi.x(), hi.y(), hi.z()}}};
    }
    if (bundle.provenance.contains("stages")) j["stages"] = bundle.provenance["stages"];
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"panorama-fusion world building toolkit"};
    app.require_subcommand(1);

    int jobs = 0;
    app.add_option("--jobs", jobs, "worker threads (0 = hardware)");

    // generate
    auto* generate = app.add_subcommand("generate", "build a world from a config");
    ConfigFlags gen_flags;
    gen_flags.add(generate);
    std::string gen_out = "out";
    bool gen_debug = false;
    generate->add_option("--out", gen_out, "output directory");
    generate->add_flag("--debug", gen_debug, "dump per-stage rasters");

    // render
    auto* render_cmd = app.add_subcommand("render", "render trajectory frames from a world");
    std::string render_world, render_mode = "rotation", render_out = "frames";
    CommonEvalFlags render_flags;
    render_cmd->add_option("--world", render_world, "world.ply path")->required();
    render_cmd->add_option("--mode", render_mode, "rotation | translation | combined");
    render_cmd->add_option("--out", render_out, "output directory");
    add_eval_flags(render_cmd, render_flags);

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "coverage and depth metrics per trajectory mode");
    std::string eval_world, eval_scene, eval_out = "eval";
    CommonEvalFlags eval_flags;
    eval_cmd->add_option("--world", eval_world, "world.ply path")->required();
    eval_cmd->add_option("--scene", eval_scene, "scene spec for ground-truth depth");
    eval_cmd->add_option("--out", eval_out, "output directory");
    add_eval_flags(eval_cmd, eval_flags);

    // ablate
    auto* ablate = app.add_subcommand("ablate", "compare full pipeline against ablations");
    ConfigFlags ablate_flags;
    ablate_flags.add(ablate);
    std::string ablate_out = "ablate";
    CommonEvalFlags ablate_eval;
    ablate->add_option("--out", ablate_out, "output directory");
    add_eval_flags(ablate, ablate_eval);

    // depthfill
    auto* depthfill = app.add_subcommand("depthfill", "depth-completion harness");
    ConfigFlags fill_flags;
    fill_flags.add(depthfill);
    std::string fill_out = "depthfill";
    int fill_scenes = 10;
    double fill_fraction = 0.3, fill_scale_min = 0.8, fill_scale_max = 1.25, fill_noise = 0.02;
    depthfill->add_option("--out", fill_out, "output directory");
    depthfill->add_option("--scenes", fill_scenes, "number of synthetic scenes");
    depthfill->add_option("--fraction", fill_fraction, "masked fraction of the raster");
    depthfill->add_option("--scale-min", fill_scale_min, "estimate scale sweep start");
    depthfill->add_option("--scale-max", fill_scale_max, "estimate scale sweep end");
    depthfill->add_option("--noise", fill_noise, "estimate noise amplitude");

    // inspect
    auto* inspect = app.add_subcommand("inspect", "summarize a saved world");
    std::string inspect_world;
    inspect->add_option("--world", inspect_world, "world.ply path")->required();

    CLI11_PARSE(app, argc, argv);
    if (jobs > 0) set_default_jobs(jobs);

    try {
        if (generate->parsed()) return run_generate(gen_flags, gen_out, gen_debug);
        if (render_cmd->parsed())
            return run_render(render_world, render_mode, render_flags, render_out);
        if (eval_cmd->parsed()) return run_eval(eval_world, eval_scene, eval_flags, eval_out);
        if (ablate->parsed()) return run_ablate(ablate_flags, ablate_eval, ablate_out);
        if (depthfill->parsed())
            return run_depthfill(fill_flags, fill_scenes, fill_fraction, fill_scale_min,
                                 fill_scale_max, fill_noise, fill_out);
        if (inspect->parsed()) return run_inspect(inspect_world);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
