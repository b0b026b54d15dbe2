#include "panofuse/world/config.hpp"

#include <fstream>

#include "panofuse/util.hpp"

namespace panofuse::world {

void WorldConfig::validate() const {
    if (panoramas < 2) throw Error("config: panoramas (N) must be > 1");
    if (width != 2 * height || height <= 0) throw Error("config: width must equal 2*height");
    if (!(lambda.value > 0.0)) throw Error("config: lambda value must be positive");
    if (!(opening.alpha_deg > 0.0 && opening.alpha_deg < 90.0))
        throw Error("config: opening alpha must lie in (0, 90) degrees");
    if (!(blend.tol > 0.0)) throw Error("config: blend tolerance must be positive");
    if (blend.k < 1) throw Error("config: blend k must be >= 1");
    if (!(oracle.timeout_s > 0.0)) throw Error("config: oracle timeout must be positive");
    oracle.scene.validate();
}

namespace {

std::string to_string(LambdaMode mode) {
    return mode == LambdaMode::absolute ? "absolute" : "median";
}
LambdaMode lambda_mode_from(const std::string& s) {
    if (s == "absolute") return LambdaMode::absolute;
    if (s == "median") return LambdaMode::median_factor;
    throw Error("config: unknown lambda mode '" + s + "'");
}

std::string to_string(fusion::BlendMode mode) {
    switch (mode) {
        case fusion::BlendMode::harmonic: return "harmonic";
        case fusion::BlendMode::naive: return "naive";
        case fusion::BlendMode::interpolation: return "interpolation";
    }
    return "harmonic";
}
fusion::BlendMode blend_mode_from(const std::string& s) {
    if (s == "harmonic") return fusion::BlendMode::harmonic;
    if (s == "naive") return fusion::BlendMode::naive;
    if (s == "interpolation") return fusion::BlendMode::interpolation;
    throw Error("config: unknown blend mode '" + s + "'");
}

std::string to_string(OracleKind kind) {
    return kind == OracleKind::synthetic ? "synthetic" : "http";
}
OracleKind oracle_kind_from(const std::string& s) {
    if (s == "synthetic") return OracleKind::synthetic;
    if (s == "http") return OracleKind::http;
    throw Error("config: unknown oracle kind '" + s + "'");
}

}  // namespace

void to_json(nlohmann::json& j, const WorldConfig& c) {
    j = nlohmann::json{
        {"prompt", c.prompt},
        {"panoramas", c.panoramas},
        {"width", c.width},
        {"height", c.height},
        {"lambda", {{"mode", to_string(c.lambda.mode)}, {"value", c.lambda.value}}},
        {"opening",
         {{"alpha_deg", c.opening.alpha_deg},
          {"radius", c.opening.radius},
          {"auto_percentile", c.opening.auto_percentile},
          {"project_all", c.opening.project_all}}},
        {"blend",
         {{"k", c.blend.k},
          {"tol", c.blend.tol},
          {"max_iter_factor", c.blend.max_iter_factor},
          {"node_cap", c.blend.node_cap},
          {"mode", to_string(c.blend_mode)}}},
        {"splat",
         {{"footprint", c.splat.footprint},
          {"max_radius_px", c.splat.max_radius_px},
          {"min_radius_px", c.splat.min_radius_px}}},
        {"ldp",
         {{"enabled", c.ldp_enabled},
          {"eps", c.ldp.eps},
          {"sigma", c.ldp.sigma},
          {"canny_low", c.ldp.canny_low},
          {"canny_high", c.ldp.canny_high},
          {"threshold_factor", c.ldp.threshold_factor},
          {"min_samples", c.ldp.min_samples}}},
        {"intermediate_ldp", c.intermediate_ldp},
        {"normalize_scale", c.normalize_scale},
        {"seed", c.seed},
        {"keep_artifacts", c.keep_artifacts},
    };
    nlohmann::json scene;
    to_json(scene, c.oracle.scene);
    j["oracle"] = {{"kind", to_string(c.oracle.kind)},
                   {"base_url", c.oracle.base_url},
                   {"timeout_s", c.oracle.timeout_s},
                   {"retries", c.oracle.retries},
                   {"backoff_s", c.oracle.backoff_s},
                   {"scene", scene},
                   {"distractors", c.oracle.distractors},
                   {"depth_corruption",
                    {{"scale", c.oracle.depth_corruption.scale},
                     {"offset", c.oracle.depth_corruption.offset},
                     {"noise_amplitude", c.oracle.depth_corruption.noise_amplitude},
                     {"scale_jitter", c.oracle.depth_corruption.scale_jitter},
                     {"seed", c.oracle.depth_corruption.seed}}}};
}

void from_json(const nlohmann::json& j, WorldConfig& c) {
    c = WorldConfig{};
    c.prompt = j.value("prompt", c.prompt);
    c.panoramas = j.value("panoramas", c.panoramas);
    c.width = j.value("width", c.width);
    c.height = j.value("height", c.height);
    if (j.contains("lambda")) {
        const auto& jl = j.at("lambda");
        c.lambda.mode = lambda_mode_from(jl.value("mode", to_string(c.lambda.mode)));
        c.lambda.value = jl.value("value", c.lambda.value);
    }
    if (j.contains("opening")) {
        const auto& jo = j.at("opening");
        c.opening.alpha_deg = jo.value("alpha_deg", c.opening.alpha_deg);
        c.opening.radius = jo.value("radius", c.opening.radius);
        c.opening.auto_percentile = jo.value("auto_percentile", c.opening.auto_percentile);
        c.opening.project_all = jo.value("project_all", c.opening.project_all);
    }
    if (j.contains("blend")) {
        const auto& jb = j.at("blend");
        c.blend.k = jb.value("k", c.blend.k);
        c.blend.tol = jb.value("tol", c.blend.tol);
        c.blend.max_iter_factor = jb.value("max_iter_factor", c.blend.max_iter_factor);
        c.blend.node_cap = jb.value("node_cap", c.blend.node_cap);
        c.blend_mode = blend_mode_from(jb.value("mode", to_string(c.blend_mode)));
    }
    if (j.contains("splat")) {
        const auto& js = j.at("splat");
        c.splat.footprint = js.value("footprint", c.splat.footprint);
        c.splat.max_radius_px = js.value("max_radius_px", c.splat.max_radius_px);
        c.splat.min_radius_px = js.value("min_radius_px", c.splat.min_radius_px);
    }
    if (j.contains("ldp")) {
        const auto& jl = j.at("ldp");
        c.ldp_enabled = jl.value("enabled", c.ldp_enabled);
        c.ldp.eps = jl.value("eps", c.ldp.eps);
        c.ldp.sigma = jl.value("sigma", c.ldp.sigma);
        c.ldp.canny_low = jl.value("canny_low", c.ldp.canny_low);
        c.ldp.canny_high = jl.value("canny_high", c.ldp.canny_high);
        c.ldp.threshold_factor = jl.value("threshold_factor", c.ldp.threshold_factor);
        c.ldp.min_samples = jl.value("min_samples", c.ldp.min_samples);
    }
    c.intermediate_ldp = j.value("intermediate_ldp", c.intermediate_ldp);
    c.normalize_scale = j.value("normalize_scale", c.normalize_scale);
    c.seed = j.value("seed", c.seed);
    c.keep_artifacts = j.value("keep_artifacts", c.keep_artifacts);
    if (j.contains("oracle")) {
        const auto& jo = j.at("oracle");
        c.oracle.kind = oracle_kind_from(jo.value("kind", to_string(c.oracle.kind)));
        c.oracle.base_url = jo.value("base_url", c.oracle.base_url);
        c.oracle.timeout_s = jo.value("timeout_s", c.oracle.timeout_s);
        c.oracle.retries = jo.value("retries", c.oracle.retries);
        c.oracle.backoff_s = jo.value("backoff_s", c.oracle.backoff_s);
        if (jo.contains("scene")) from_json(jo.at("scene"), c.oracle.scene);
        c.oracle.distractors = jo.value("distractors", c.oracle.distractors);
        if (jo.contains("depth_corruption")) {
            const auto& jd = jo.at("depth_corruption");
            c.oracle.depth_corruption.scale = jd.value("scale", 1.0);
            c.oracle.depth_corruption.offset = jd.value("offset", 0.0);
            c.oracle.depth_corruption.noise_amplitude = jd.value("noise_amplitude", 0.0);
            c.oracle.depth_corruption.scale_jitter = jd.value("scale_jitter", 0.0);
            c.oracle.depth_corruption.seed = jd.value("seed", std::uint64_t{0});
        }
    }
}

WorldConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    WorldConfig c;
    from_json(j, c);
    return c;
}

void save_config(const std::string& path, const WorldConfig& config) {
    nlohmann::json j;
    to_json(j, config);
    std::ofstream out(path);
    if (!out) throw Error("cannot write config: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace panofuse::world
