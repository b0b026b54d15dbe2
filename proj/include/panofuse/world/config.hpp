#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "panofuse/blend/harmonic.hpp"
#include "panofuse/fusion/fusion.hpp"
#include "panofuse/ldp/ldp.hpp"
#include "panofuse/oracle/scene.hpp"
#include "panofuse/oracle/synthetic.hpp"
#include "panofuse/render/render.hpp"

namespace panofuse::world {

enum class LambdaMode { absolute, median_factor };
enum class OracleKind { synthetic, http };

struct LambdaConfig {
    LambdaMode mode = LambdaMode::median_factor;
    double value = 1.5;  // absolute spacing or multiple of the first sphere's median depth
};

struct OpeningConfig {
    double alpha_deg = 60.0;
    double radius = 0.0;           // <= 0: auto (percentile of perpendicular distances)
    double auto_percentile = 0.0;
    bool project_all = false;
};

struct OracleConfig {
    OracleKind kind = OracleKind::synthetic;
    std::string base_url = "http://127.0.0.1:8080";
    double timeout_s = 30.0;
    int retries = 3;
    double backoff_s = 0.25;
    oracle::SceneSpec scene = oracle::SceneSpec::demo(1, 2);
    oracle::DepthCorruption depth_corruption;
    int distractors = 1;
};

struct WorldConfig {
    std::string prompt = "a rolling grass field with scattered boulders";
    int panoramas = 3;  // N
    int width = 512;
    int height = 256;
    LambdaConfig lambda;
    OpeningConfig opening;
    blend::BlendParams blend;
    fusion::BlendMode blend_mode = fusion::BlendMode::harmonic;
    render::SplatParams splat;
    ldp::LdpParams ldp;
    bool ldp_enabled = true;
    bool intermediate_ldp = true;
    bool normalize_scale = true;
    OracleConfig oracle;
    std::uint64_t seed = 7;
    bool keep_artifacts = false;

    void validate() const;
};

void to_json(nlohmann::json& j, const WorldConfig& config);
void from_json(const nlohmann::json& j, WorldConfig& config);

WorldConfig load_config(const std::string& path);
void save_config(const std::string& path, const WorldConfig& config);

}  // namespace panofuse::world
