#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "panofuse/evalkit/metrics.hpp"
#include "panofuse/geom/backproject.hpp"
#include "panofuse/ldp/ldp.hpp"
#include "panofuse/oracle/synthetic.hpp"
#include "panofuse/render/render.hpp"
#include "panofuse/util.hpp"

using namespace panofuse;
using geom::BitMask;
using geom::DepthMap;
using geom::EqrImage;
using geom::Pose;

namespace {
constexpr double kPi = std::numbers::pi;

// Filled disk (pixel space) of depth `inner` on an `outer` background.
struct DiskScene {
    DepthMap depth;
    BitMask mask;
    int cx, cy, radius;
};

DiskScene make_disk(int w, int h, int radius, double inner, double outer) {
    DiskScene s{DepthMap(w, h, outer), BitMask(w, h), w / 2, h / 2, radius};
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            int dx = x - s.cx, dy = y - s.cy;
            if (dx * dx + dy * dy <= radius * radius) {
                s.depth.at(x, y) = inner;
                s.mask.set(x, y, true);
            }
        }
    return s;
}
}  // namespace

TEST_CASE("depth_edges: constant depth has no edges") {
    CHECK(ldp::depth_edges(DepthMap(64, 32, 4.0), 0.1, 0.2).count() == 0);
    CHECK_THROWS_AS(ldp::depth_edges(DepthMap(64, 32, 4.0), 0.3, 0.2), Error);
}

TEST_CASE("depth_edges: half-split raster has edges only at the two steps") {
    const int w = 64, h = 32;
    DepthMap depth(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) depth.at(x, y) = x < w / 2 ? 1.0 : 5.0;
    BitMask edges = ldp::depth_edges(depth, 0.1, 0.2);
    CHECK(edges.any());
    // steps at the center column and at the wrap seam
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!edges.get(x, y)) continue;
            int d_center = std::abs(x - w / 2);
            int d_wrap = std::min(x, w - x);
            CHECK(std::min(d_center, d_wrap) <= 2);
        }
}

TEST_CASE("depth_edges: disk produces a thin ring of the right length") {
    const int radius = 20;
    DiskScene s = make_disk(256, 128, radius, 1.0, 5.0);
    BitMask edges = ldp::depth_edges(s.depth, 0.1, 0.2);
    double expected = 2.0 * kPi * radius;
    CHECK(static_cast<double>(edges.count()) > 0.8 * expected);
    CHECK(static_cast<double>(edges.count()) < 1.2 * expected);
    // ring stays near the disk boundary
    for (int y = 0; y < 128; ++y)
        for (int x = 0; x < 256; ++x)
            if (edges.get(x, y)) {
                double r = std::hypot(x - s.cx, y - s.cy);
                CHECK(std::abs(r - radius) <= 3.0);
            }
}

TEST_CASE("boundary_normals: square, disk, and degenerate masks") {
    const int w = 64, h = 32;
    BitMask square(w, h);
    for (int y = 8; y < 24; ++y)
        for (int x = 20; x < 40; ++x) square.set(x, y, true);
    auto normals = ldp::boundary_normals(square, 1.5);
    CHECK(!normals.empty());
    int right_edge = 0;
    for (const auto& bn : normals) {
        if (static_cast<int>(bn.position.x()) == 39 && bn.position.y() > 10 &&
            bn.position.y() < 21) {
            ++right_edge;
            double angle = std::acos(std::clamp(bn.normal.dot(Eigen::Vector2d(1, 0)), -1.0, 1.0));
            CHECK(angle < 15.0 * kPi / 180.0);
        }
    }
    CHECK(right_edge > 0);

    CHECK(ldp::boundary_normals(BitMask(w, h, true), 1.5).empty());
    CHECK(ldp::boundary_normals(BitMask(w, h, false), 1.5).empty());

    DiskScene s = make_disk(128, 64, 15, 1.0, 5.0);
    double err_sum = 0.0;
    int count = 0;
    for (const auto& bn : ldp::boundary_normals(s.mask, 1.5)) {
        Eigen::Vector2d radial =
            (bn.position - Eigen::Vector2d(s.cx, s.cy)).normalized();
        err_sum += std::acos(std::clamp(bn.normal.dot(radial), -1.0, 1.0));
        ++count;
    }
    CHECK(count > 0);
    CHECK(err_sum / count < 10.0 * kPi / 180.0);
}

TEST_CASE("foreground_score: disk in front scores ~+4, inverted ~-4") {
    DiskScene front = make_disk(256, 128, 20, 1.0, 5.0);
    BitMask edges = ldp::depth_edges(front.depth, 0.1, 0.2);
    ldp::MaskScore s_front = ldp::foreground_score(front.mask, front.depth, edges, 3.0);
    CHECK(s_front.boundary_sample_count > 0);
    CHECK(s_front.score == doctest::Approx(4.0).epsilon(0.125));  // 4 +/- 0.5

    DiskScene behind = make_disk(256, 128, 20, 5.0, 1.0);
    BitMask edges_b = ldp::depth_edges(behind.depth, 0.1, 0.2);
    ldp::MaskScore s_behind = ldp::foreground_score(behind.mask, behind.depth, edges_b, 3.0);
    CHECK(s_behind.score < 0.0);
    // sign antisymmetry within 10%
    CHECK(std::abs(s_front.score + s_behind.score) < 0.1 * std::abs(s_front.score));
}

TEST_CASE("foreground_score: mask over uniform depth has no valid samples") {
    const int w = 64, h = 32;
    DepthMap flat(w, h, 3.0);
    BitMask edges = ldp::depth_edges(flat, 0.1, 0.2);
    BitMask mask(w, h);
    for (int y = 10; y < 20; ++y)
        for (int x = 10; x < 30; ++x) mask.set(x, y, true);
    ldp::MaskScore s = ldp::foreground_score(mask, flat, edges, 3.0);
    CHECK(s.boundary_sample_count == 0);
    CHECK(s.score == -std::numeric_limits<double>::infinity());
}

TEST_CASE("select_foreground thresholding and union") {
    const int w = 32, h = 16;
    auto mask_at = [&](int x0) {
        BitMask m(w, h);
        for (int y = 4; y < 8; ++y)
            for (int x = x0; x < x0 + 4; ++x) m.set(x, y, true);
        return m;
    };
    std::vector<BitMask> masks = {mask_at(0), mask_at(8), mask_at(16)};
    std::vector<ldp::MaskScore> scores(3);
    scores[0] = {0, 4.0, 50};
    scores[1] = {1, -4.0, 50};
    scores[2] = {2, 0.01, 50};
    double t = 0.05 * 5.0;  // threshold from the median-depth rule
    BitMask selected = ldp::select_foreground(masks, scores, t);
    CHECK(selected.count() == masks[0].count());

    scores[0].score = 0.01;
    CHECK(ldp::select_foreground(masks, scores, t).count() == 0);

    scores[0].score = 4.0;
    scores[2].score = 4.0;
    CHECK(ldp::select_foreground(masks, scores, t).count() ==
          masks[0].count() + masks[2].count());  // disjoint OR adds up

    // noise guard: below min_samples the score is ignored
    scores[0] = {0, 100.0, 3};
    scores[2] = {2, -1.0, 50};
    CHECK(ldp::select_foreground(masks, scores, t).count() == 0);
}

TEST_CASE("selection is monotone in the threshold") {
    std::mt19937_64 rng(5);
    const int w = 32, h = 16;
    std::vector<BitMask> masks;
    std::vector<ldp::MaskScore> scores;
    for (int i = 0; i < 12; ++i) {
        BitMask m(w, h);
        int x0 = static_cast<int>(u01(rng) * (w - 5));
        int y0 = static_cast<int>(u01(rng) * (h - 5));
        for (int y = y0; y < y0 + 4; ++y)
            for (int x = x0; x < x0 + 4; ++x) m.set(x, y, true);
        masks.push_back(m);
        scores.push_back({i, uniform(rng, -5, 5), 20});
    }
    double prev_t = -10.0;
    BitMask prev = ldp::select_foreground(masks, scores, prev_t);
    for (double t = -4.0; t < 6.0; t += 1.0) {
        BitMask cur = ldp::select_foreground(masks, scores, t);
        for (std::size_t i = 0; i < cur.bits.size(); ++i)
            if (cur.bits[i]) CHECK(prev.bits[i]);  // raising t never adds pixels
        prev = cur;
    }
}

TEST_CASE("panoramic_hull: row maxima, dominance, undefined rows") {
    DepthMap constant(16, 8, 2.5);
    CHECK(ldp::panoramic_hull(constant).values == std::vector<double>(16 * 8, 2.5));

    DepthMap row(4, 1);
    row.at(0, 0) = 1;
    row.at(1, 0) = 7;
    row.at(2, 0) = 3;
    row.at(3, 0) = 2;
    CHECK(ldp::panoramic_hull(row).values == std::vector<double>{7, 7, 7, 7});

    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        DepthMap d(16, 8);
        for (auto& v : d.values) v = uniform(rng, 0.5, 9.0);
        DepthMap hull = ldp::panoramic_hull(d);
        for (std::size_t i = 0; i < d.values.size(); ++i) CHECK(hull.values[i] >= d.values[i]);
        for (int y = 0; y < 8; ++y)
            for (int x = 1; x < 16; ++x) CHECK(hull.at(x, y) == hull.at(0, y));
    }

    DepthMap holey(4, 2, DepthMap::kUndefined);
    holey.at(1, 0) = 3.0;  // row 1 fully undefined
    CHECK_THROWS_AS(ldp::panoramic_hull(holey), Error);
}

namespace {

struct LdpFixture {
    oracle::SceneSpec scene;
    oracle::OracleSet oracles;
    EqrImage image;
    DepthMap depth;
    Pose pose;

    explicit LdpFixture(int objects, int w = 256, int h = 128) {
        scene = oracle::SceneSpec::demo(42, objects);
        oracles = oracle::make_synthetic_oracles(scene);
        pose = Pose::identity();
        auto [img, dep] = oracles.panorama->generate("test scene", pose, w, h);
        image = std::move(img);
        depth = std::move(*dep);
    }
};

}  // namespace

TEST_CASE("build_ldp recovers the true background behind an object") {
    LdpFixture fix(1);
    ldp::LayeredDepthPanorama layered =
        ldp::build_ldp(fix.image, fix.depth, *fix.oracles.segmenter, *fix.oracles.inpainter,
                       ldp::LdpParams{}, "test scene", fix.pose);
    REQUIRE(layered.fg_mask.any());

    // true background: the same scene without objects
    oracle::SceneSpec bare = fix.scene;
    bare.objects.clear();
    EqrImage truth;
    oracle::render_scene_eqr(bare, fix.pose, fix.image.width, fix.image.height, &truth, nullptr);

    double err = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < fix.image.height; ++y)
        for (int x = 0; x < fix.image.width; ++x) {
            if (!layered.fg_mask.get(x, y)) continue;
            err += (layered.bg_image.at(x, y) - truth.at(x, y)).cwiseAbs().sum() / 3.0;
            ++n;
        }
    REQUIRE(n > 0);
    CHECK(err / n < 0.02);

    // layer invariants: row-constant background depth enclosing the foreground
    for (int y = 0; y < layered.bg_depth.height; ++y) {
        double row_max = 0.0;
        for (int x = 0; x < layered.bg_depth.width; ++x) {
            CHECK(layered.bg_depth.at(x, y) == layered.bg_depth.at(0, y));
            row_max = std::max(row_max, layered.fg_depth.at(x, y));
        }
        CHECK(layered.bg_depth.at(0, y) >= row_max);
    }
}

TEST_CASE("build_ldp on an empty scene is a pass-through") {
    LdpFixture fix(0);
    ldp::LayeredDepthPanorama layered =
        ldp::build_ldp(fix.image, fix.depth, *fix.oracles.segmenter, *fix.oracles.inpainter,
                       ldp::LdpParams{}, "test scene", fix.pose);
    CHECK(layered.fg_mask.count() == 0);
    CHECK(layered.bg_image.pixels == fix.image.pixels);
    CHECK(layered.bg_depth.values == ldp::panoramic_hull(fix.depth).values);
}

TEST_CASE("layered rendering fills disocclusions that a single layer leaves open") {
    // one large boulder close to the camera, occluding plenty of background
    oracle::SceneSpec scene = oracle::SceneSpec::demo(42, 0);
    oracle::SceneObject obj;
    obj.radius = 1.2;
    obj.center = Eigen::Vector3d(0.0, -scene.ground_height + obj.radius * 0.9, 2.0);
    scene.objects.push_back(obj);
    oracle::OracleSet oracles = oracle::make_synthetic_oracles(scene);
    Pose pose;
    auto [image, maybe_depth] = oracles.panorama->generate("test scene", pose, 256, 128);
    DepthMap depth = std::move(*maybe_depth);

    ldp::LayeredDepthPanorama layered = ldp::build_ldp(
        image, depth, *oracles.segmenter, *oracles.inpainter, ldp::LdpParams{}, "test scene", pose);
    REQUIRE(layered.fg_mask.any());

    geom::PointCloud fg = geom::backproject_spherical(layered.fg_image, layered.fg_depth, pose);
    geom::PointCloud bg = geom::backproject_spherical(layered.bg_image, layered.bg_depth, pose);
    geom::PointCloud both = geom::merge_clouds(fg, bg);

    // camera offset sideways so lines of sight reach the occluded shadow
    Pose offset = pose;
    offset.translation += 1.2 * Eigen::Vector3d::UnitX();

    // near-source splat sizing so genuinely missing content stays visible
    render::SplatParams splat;
    splat.footprint =
        2.0 * median(std::vector<double>(depth.values)) * (2.0 * kPi / image.width);
    splat.max_radius_px = 2.0;
    double hole_single =
        1.0 - evalkit::coverage(
                  render::render_eqr(fg, offset, image.width, image.height, splat).visibility);
    double hole_layered =
        1.0 - evalkit::coverage(
                  render::render_eqr(both, offset, image.width, image.height, splat).visibility);
    CHECK(hole_single > 0.01);
    CHECK(hole_layered <= 0.001);
}

TEST_CASE("build_ldp on its own background layer selects nothing") {
    LdpFixture fix(2);
    ldp::LayeredDepthPanorama layered =
        ldp::build_ldp(fix.image, fix.depth, *fix.oracles.segmenter, *fix.oracles.inpainter,
                       ldp::LdpParams{}, "test scene", fix.pose);
    ldp::LayeredDepthPanorama second =
        ldp::build_ldp(layered.bg_image, layered.bg_depth, *fix.oracles.segmenter,
                       *fix.oracles.inpainter, ldp::LdpParams{}, "test scene", fix.pose);
    CHECK(second.fg_mask.count() == 0);
}
