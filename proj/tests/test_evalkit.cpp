#include <doctest.h>

#include <cmath>
#include <random>

#include "panofuse/evalkit/metrics.hpp"
#include "panofuse/evalkit/trajectory.hpp"
#include "panofuse/util.hpp"

using namespace panofuse;
using evalkit::DepthMetricsReport;
using evalkit::TrajectoryMode;
using evalkit::TrajectorySpec;
using geom::BitMask;
using geom::DepthMap;
using geom::Pose;

TEST_CASE("coverage bounds and monotonicity under union") {
    CHECK(evalkit::coverage(BitMask(8, 4, false)) == 0.0);
    CHECK(evalkit::coverage(BitMask(8, 4, true)) == 1.0);

    std::mt19937_64 rng(3);
    BitMask a(16, 8), b(16, 8);
    for (auto& bit : a.bits) bit = u01(rng) < 0.3;
    for (auto& bit : b.bits) bit = u01(rng) < 0.3;
    double ca = evalkit::coverage(a);
    double cu = evalkit::coverage(geom::mask_or(a, b));
    CHECK(cu >= ca);
    CHECK(cu <= 1.0);
}

TEST_CASE("depth_metrics frozen cases") {
    const int w = 8, h = 4;
    DepthMap gt(w, h);
    std::mt19937_64 rng(5);
    for (auto& v : gt.values) v = uniform(rng, 0.5, 4.0);
    BitMask valid(w, h, true);

    DepthMetricsReport same = evalkit::depth_metrics(gt, gt, valid);
    CHECK(same.abs_rel == 0.0);
    CHECK(same.rmse == 0.0);
    CHECK(same.si_rmse == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(same.delta1 == 1.0);

    DepthMap twice = gt;
    for (auto& v : twice.values) v *= 2.0;
    DepthMetricsReport doubled = evalkit::depth_metrics(twice, gt, valid);
    CHECK(doubled.abs_rel == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(doubled.si_rmse == doctest::Approx(0.0).epsilon(1e-9));
    // 1.25^3 = 1.953125 < 2, so even delta3 misses
    CHECK(doubled.delta1 == 0.0);
    CHECK(doubled.delta2 == 0.0);
    CHECK(doubled.delta3 == 0.0);

    DepthMap close = gt;
    for (auto& v : close.values) v += 1e-9;
    DepthMetricsReport near = evalkit::depth_metrics(close, gt, valid);
    CHECK(near.abs_rel < 1e-8);
    CHECK(near.delta1 == 1.0);
}

TEST_CASE("depth_metrics: delta monotonicity on randomized inputs") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        DepthMap gt(8, 4), pred(8, 4);
        for (auto& v : gt.values) v = uniform(rng, 0.2, 8.0);
        for (auto& v : pred.values) v = uniform(rng, 0.2, 8.0);
        DepthMetricsReport rep = evalkit::depth_metrics(pred, gt, BitMask(8, 4, true));
        CHECK(rep.delta1 <= rep.delta2);
        CHECK(rep.delta2 <= rep.delta3);
    }
}

TEST_CASE("depth_metrics: scale invariance of SI-RMSE") {
    std::mt19937_64 rng(9);
    DepthMap gt(16, 8), pred(16, 8);
    for (auto& v : gt.values) v = uniform(rng, 0.3, 6.0);
    for (auto& v : pred.values) v = uniform(rng, 0.3, 6.0);
    BitMask valid(16, 8, true);
    double base = evalkit::depth_metrics(pred, gt, valid).si_rmse;
    for (double alpha : {0.25, 3.0, 17.5}) {
        DepthMap scaled = pred;
        for (auto& v : scaled.values) v *= alpha;
        CHECK(evalkit::depth_metrics(scaled, gt, valid).si_rmse ==
              doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("depth_metrics: exclusion accounting and errors") {
    DepthMap gt(4, 2, 2.0), pred(4, 2, 2.0);
    pred.at(0, 0) = -1.0;
    pred.at(1, 0) = DepthMap::kUndefined;
    BitMask valid(4, 2, true);
    DepthMetricsReport rep = evalkit::depth_metrics(pred, gt, valid);
    CHECK(rep.excluded_pixels == 2);
    CHECK(rep.evaluated_pixels == 6);

    DepthMap all_bad(4, 2, -1.0);
    CHECK_THROWS_AS(evalkit::depth_metrics(all_bad, gt, valid), Error);

    DepthMap bad_gt(4, 2, 0.0);
    CHECK_THROWS_AS(evalkit::depth_metrics(pred, bad_gt, valid), Error);
}

TEST_CASE("transition_score: ramp, step, invariances") {
    const int w = 16, h = 12;
    // vertical ramp, horizontal mask boundary: every crossing pair differs by 0.01
    DepthMap ramp(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) ramp.at(x, y) = 1.0 + 0.01 * y;
    BitMask top(w, h);
    for (int y = 0; y < h / 2; ++y)
        for (int x = 0; x < w; ++x) top.set(x, y, true);
    CHECK(evalkit::transition_score(ramp, top) == doctest::Approx(0.01).epsilon(1e-9));

    DepthMap step(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) step.at(x, y) = y < h / 2 ? 2.0 : 3.0;
    CHECK(evalkit::transition_score(step, top) == doctest::Approx(1.0).epsilon(1e-12));

    // adding a constant leaves the score unchanged
    DepthMap shifted = ramp;
    for (auto& v : shifted.values) v += 123.0;
    CHECK(evalkit::transition_score(shifted, top) ==
          doctest::Approx(evalkit::transition_score(ramp, top)).epsilon(1e-9));

    CHECK_THROWS_AS(evalkit::transition_score(ramp, BitMask(w, h, true)), Error);
}

TEST_CASE("transition_region_mae: exact band offsets") {
    const int w = 16, h = 12;
    DepthMap gt(w, h, 4.0);
    BitMask known(w, h);
    for (int y = 0; y < h / 2; ++y)
        for (int x = 0; x < w; ++x) known.set(x, y, true);

    CHECK(evalkit::transition_region_mae(gt, gt, known, 2) == 0.0);

    DepthMap pred = gt;
    for (int y = h / 2; y < h; ++y)
        for (int x = 0; x < w; ++x) pred.at(x, y) = 4.5;
    CHECK(evalkit::transition_region_mae(pred, gt, known, 3) ==
          doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(evalkit::transition_region_mae(pred, gt, known, 0), Error);
    CHECK_THROWS_AS(evalkit::transition_region_mae(pred, gt, BitMask(w, h, true), 2), Error);
}

TEST_CASE("sample_trajectories: counts, modes, determinism") {
    std::vector<Pose> world_poses;
    for (int i = 0; i < 3; ++i)
        world_poses.push_back(geom::translate_pose(Pose::identity(),
                                                   1.5 * i * Eigen::Vector3d::UnitX()));

    TrajectorySpec spec;
    spec.count = 20;
    spec.seed = 11;

    spec.mode = TrajectoryMode::rotation;
    auto rot = evalkit::sample_trajectories(spec, world_poses);
    REQUIRE(rot.size() == 20);
    for (const auto& p : rot) {
        CHECK(p.translation == world_poses[0].translation);
        CHECK(p.is_rigid(1e-9));
        // pitch limited to +/- 45 deg: forward axis stays within bounds
        Eigen::Vector3d fwd = p.rotation.col(2);
        CHECK(std::abs(std::asin(std::clamp(fwd.y(), -1.0, 1.0))) <= spec.pitch_range + 1e-9);
    }

    spec.mode = TrajectoryMode::translation;
    auto trans = evalkit::sample_trajectories(spec, world_poses);
    double total = (world_poses.back().translation - world_poses.front().translation).norm();
    for (const auto& p : trans) {
        CHECK(p.rotation.isIdentity(1e-12));
        double along = (p.translation - world_poses[0].translation).dot(Eigen::Vector3d::UnitX());
        CHECK(along >= 0.0);
        CHECK(along <= spec.translation_fraction * total + 1e-9);
    }

    spec.mode = TrajectoryMode::combined;
    auto c1 = evalkit::sample_trajectories(spec, world_poses);
    auto c2 = evalkit::sample_trajectories(spec, world_poses);
    for (int i = 0; i < 20; ++i) {
        CHECK(c1[i].rotation == c2[i].rotation);
        CHECK(c1[i].translation == c2[i].translation);
    }
}
