#include <doctest.h>

#include <filesystem>
#include <numbers>

#include "panofuse/evalkit/metrics.hpp"
#include "panofuse/geom/backproject.hpp"
#include "panofuse/oracle/synthetic.hpp"
#include "panofuse/render/render.hpp"
#include "panofuse/world/world.hpp"

using namespace panofuse;
using geom::DepthMap;
using geom::EqrImage;
using geom::PointCloud;
using geom::Pose;
using world::WorldBundle;
using world::WorldConfig;

namespace {
constexpr double kPi = std::numbers::pi;

WorldConfig small_config(int n = 3) {
    WorldConfig config;
    config.panoramas = n;
    config.width = 256;
    config.height = 128;
    config.lambda.mode = world::LambdaMode::absolute;
    config.lambda.value = 4.0;
    config.normalize_scale = false;
    config.oracle.scene = oracle::SceneSpec::demo(3, 2);
    config.seed = 7;
    return config;
}

oracle::OracleSet oracles_for(const WorldConfig& config) {
    return oracle::make_synthetic_oracles(config.oracle.scene, config.oracle.depth_corruption,
                                          config.oracle.distractors);
}

fusion::OpenedSphere shell_opened(fusion::Opening side, double x_offset = 0.0) {
    EqrImage image(64, 32, Eigen::Vector3f::Ones());
    DepthMap depth(64, 32, 2.0);
    Pose pose = geom::translate_pose(Pose::identity(), x_offset * Eigen::Vector3d::UnitX());
    fusion::OpeningParams params;
    params.alpha = 60.0 * kPi / 180.0;
    PointCloud sphere = geom::backproject_spherical(image, depth, pose);
    return fusion::open_sphere(sphere, pose, side, Eigen::Vector3d::UnitX(), params);
}
}  // namespace

TEST_CASE("assemble_partial enforces the opening pattern and adds counts") {
    std::vector<fusion::OpenedSphere> two = {shell_opened(fusion::Opening::right, 0),
                                             shell_opened(fusion::Opening::left, 4)};
    PointCloud w2 = world::assemble_partial(two);
    CHECK(w2.size() == two[0].cloud.size() + two[1].cloud.size());

    std::vector<fusion::OpenedSphere> three = {shell_opened(fusion::Opening::right, 0),
                                               shell_opened(fusion::Opening::both, 4),
                                               shell_opened(fusion::Opening::left, 8)};
    PointCloud w3 = world::assemble_partial(three);
    CHECK(w3.size() ==
          three[0].cloud.size() + three[1].cloud.size() + three[2].cloud.size());

    std::vector<fusion::OpenedSphere> bad = {shell_opened(fusion::Opening::left, 0),
                                             shell_opened(fusion::Opening::left, 4)};
    CHECK_THROWS_AS(world::assemble_partial(bad), Error);
}

TEST_CASE("config validation and json round trip") {
    WorldConfig config = small_config();
    CHECK_NOTHROW(config.validate());

    WorldConfig bad = config;
    bad.panoramas = 1;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = config;
    bad.width = 100;
    CHECK_THROWS_AS(bad.validate(), Error);

    nlohmann::json j;
    world::to_json(j, config);
    WorldConfig back;
    world::from_json(j, back);
    CHECK(back.panoramas == config.panoramas);
    CHECK(back.lambda.value == config.lambda.value);
    CHECK(back.normalize_scale == config.normalize_scale);
    CHECK(back.oracle.scene.objects.size() == config.oracle.scene.objects.size());
    CHECK(back.blend.tol == config.blend.tol);
}

TEST_CASE("build_world: structure, spacing, additivity, determinism") {
    WorldConfig config = small_config(3);
    oracle::OracleSet oracles = oracles_for(config);
    WorldBundle bundle = world::build_world(config, oracles);

    REQUIRE(bundle.poses.size() == 3);
    for (std::size_t i = 0; i + 1 < bundle.poses.size(); ++i) {
        Eigen::Vector3d step = bundle.poses[i + 1].translation - bundle.poses[i].translation;
        CHECK((step - 4.0 * Eigen::Vector3d::UnitX()).norm() < 1e-9);
    }

    REQUIRE(bundle.fill_counts.size() == 2);
    std::size_t total = bundle.partial_count;
    for (std::size_t c : bundle.fill_counts) total += c;
    CHECK(bundle.cloud.size() == total);

    WorldBundle again = world::build_world(config, oracles);
    REQUIRE(again.cloud.size() == bundle.cloud.size());
    for (std::size_t i = 0; i < bundle.cloud.size(); ++i) {
        CHECK(again.cloud.positions[i] == bundle.cloud.positions[i]);
        CHECK(again.cloud.colors[i] == bundle.cloud.colors[i]);
    }
}

TEST_CASE("build_world: N=2 yields exactly one fill block") {
    WorldConfig config = small_config(2);
    WorldBundle bundle = world::build_world(config, oracles_for(config));
    CHECK(bundle.fill_counts.size() == 1);
    CHECK(bundle.poses.size() == 2);
}

TEST_CASE("build_world: station renders cover the full sphere of directions") {
    WorldConfig config = small_config(3);
    WorldBundle bundle = world::build_world(config, oracles_for(config));

    render::SplatParams splat;
    splat.footprint = bundle.provenance.at("splat_footprint").get<double>();
    std::vector<Pose> stations = bundle.poses;
    for (std::size_t i = 0; i + 1 < bundle.poses.size(); ++i) {
        Pose mid = bundle.poses[i];
        mid.translation =
            0.5 * (bundle.poses[i].translation + bundle.poses[i + 1].translation);
        stations.push_back(mid);
    }
    for (const auto& pose : stations) {
        render::RenderOutput out =
            render::render_eqr(bundle.cloud, pose, config.width, config.height, splat);
        CHECK(evalkit::coverage(out.visibility) >= 0.999);
    }
}

TEST_CASE("save_world/load_world round trip") {
    WorldConfig config = small_config(2);
    WorldBundle bundle = world::build_world(config, oracles_for(config));

    auto dir = std::filesystem::temp_directory_path() / "panofuse_world_test";
    std::filesystem::create_directories(dir);
    auto ply = dir / "world.ply";
    world::save_world(ply, bundle);

    WorldBundle loaded = world::load_world(ply);
    REQUIRE(loaded.cloud.size() == bundle.cloud.size());
    for (std::size_t i = 0; i < bundle.cloud.size(); ++i)
        for (int c = 0; c < 3; ++c)
            CHECK(loaded.cloud.positions[i][c] ==
                  static_cast<double>(static_cast<float>(bundle.cloud.positions[i][c])));
    REQUIRE(loaded.poses.size() == bundle.poses.size());
    for (std::size_t i = 0; i < bundle.poses.size(); ++i)
        CHECK((loaded.poses[i].translation - bundle.poses[i].translation).norm() < 1e-12);
    CHECK(loaded.partial_count == bundle.partial_count);
    CHECK(loaded.fill_counts == bundle.fill_counts);
    CHECK(loaded.config.panoramas == config.panoramas);
    std::filesystem::remove_all(dir);
}

TEST_CASE("empty world round trips through persistence") {
    WorldBundle empty;
    empty.poses = {Pose::identity()};
    auto dir = std::filesystem::temp_directory_path() / "panofuse_empty_test";
    std::filesystem::create_directories(dir);
    auto ply = dir / "world.ply";
    world::save_world(ply, empty);
    WorldBundle loaded = world::load_world(ply);
    CHECK(loaded.cloud.empty());
    std::filesystem::remove_all(dir);
}
