#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "panofuse/blend/harmonic.hpp"
#include "panofuse/evalkit/metrics.hpp"
#include "panofuse/geom/pose.hpp"
#include "panofuse/util.hpp"
#include "support/graph_oracle.hpp"

using namespace panofuse;
using blend::BlendParams;
using blend::KnnGraph;
using geom::BitMask;
using geom::DepthMap;
using geom::Pose;

namespace {

std::vector<Eigen::Vector3d> random_points(std::mt19937_64& rng, int n, double extent = 5.0) {
    std::vector<Eigen::Vector3d> pts(n);
    for (auto& p : pts)
        p = Eigen::Vector3d(uniform(rng, -extent, extent), uniform(rng, -extent, extent),
                            uniform(rng, -extent, extent));
    return pts;
}

}  // namespace

TEST_CASE("boundary_mask: half plane, solid block, degenerate masks") {
    const int w = 16, h = 8;
    BitMask half(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w / 2; ++x) half.set(x, y, true);
    BitMask boundary = blend::boundary_mask(half);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            bool expect = x == 0 || x == w / 2 - 1;  // interface column plus wrap column
            CHECK(boundary.get(x, y) == expect);
        }
    }

    BitMask block(w, h);
    for (int y = 2; y < 5; ++y)
        for (int x = 4; x < 7; ++x) block.set(x, y, true);
    BitMask bb = blend::boundary_mask(block);
    CHECK(bb.count() == 8);           // 3x3 minus the surviving center
    CHECK_FALSE(bb.get(5, 3));        // center erodes away

    CHECK(blend::boundary_mask(BitMask(w, h, true)).count() == 0);
    CHECK(blend::boundary_mask(BitMask(w, h, false)).count() == 0);
}

TEST_CASE("build_knn_graph: collinear path with k=1") {
    std::vector<Eigen::Vector3d> pts = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    KnnGraph g = blend::build_knn_graph(pts, 1, {});
    REQUIRE(g.edges.size() == 2);  // union of nearest-neighbor picks forms the path
    for (const auto& e : g.edges) {
        CHECK(std::abs(e.j - e.i) == 1);
        CHECK(e.w == doctest::Approx(1.0 / (1.0 + g.weight_epsilon)));
    }
}

TEST_CASE("build_knn_graph: coincident points stay finite and complete") {
    std::vector<Eigen::Vector3d> pts(4, Eigen::Vector3d(1, 2, 3));
    KnnGraph g = blend::build_knn_graph(pts, 3, {});
    CHECK(g.edges.size() == 6);  // complete graph over 4 nodes
    for (const auto& e : g.edges) {
        CHECK(std::isfinite(e.w));
        CHECK(e.w == doctest::Approx(1.0 / g.weight_epsilon));
    }
}

TEST_CASE("build_knn_graph: degree >= k and symmetry on a random cloud") {
    std::mt19937_64 rng(7);
    auto pts = random_points(rng, 500);
    const int k = 6;
    KnnGraph g = blend::build_knn_graph(pts, k, {});
    std::vector<int> degree(pts.size(), 0);
    std::set<std::pair<int, int>> seen;
    for (const auto& e : g.edges) {
        CHECK(e.i < e.j);  // undirected storage, no self loops
        CHECK(e.w > 0.0);
        CHECK(seen.insert({e.i, e.j}).second);
        degree[e.i]++;
        degree[e.j]++;
    }
    for (int d : degree) CHECK(d >= k);
}

TEST_CASE("harmonic_displacements: zero Dirichlet data gives zero field") {
    std::mt19937_64 rng(9);
    auto pts = random_points(rng, 60);
    KnnGraph g = blend::build_knn_graph(pts, 4, {0, 1, 2});
    auto u = blend::harmonic_displacements(g, {Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(),
                                               Eigen::Vector3d::Zero()},
                                           1e-10, 0);
    for (const auto& v : u) CHECK(v.norm() == 0.0);
}

TEST_CASE("harmonic_displacements: path graph interpolates linearly") {
    // 5 nodes in a path with unit weights; endpoints fixed at 0 and (4,0,0).
    KnnGraph g;
    for (int i = 0; i < 5; ++i) g.node_positions.push_back(Eigen::Vector3d(i, 0, 0));
    for (int i = 0; i < 4; ++i) g.edges.push_back({i, i + 1, 1.0});
    g.fixed = {0, 4};
    g.disconnected.assign(5, 0);
    auto u = blend::harmonic_displacements(
        g, {Eigen::Vector3d::Zero(), Eigen::Vector3d(4, 0, 0)}, 1e-12, 0);
    // dense 3x3 interior solve gives exactly linear interpolation
    auto expect = panofuse_test::dense_harmonic(g, {Eigen::Vector3d::Zero(),
                                                    Eigen::Vector3d(4, 0, 0)});
    for (int i = 0; i < 5; ++i) CHECK((u[i] - expect[i]).norm() < 1e-9);
    CHECK(u[1].x() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(u[2].x() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(u[3].x() == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("harmonic_displacements: matches dense solve, maximum principle") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 20 + static_cast<int>(u01(rng) * 120);
        auto pts = random_points(rng, n);
        int nfixed = 3 + static_cast<int>(u01(rng) * (n / 4));
        std::vector<int> fixed;
        for (int i = 0; i < nfixed; ++i) fixed.push_back(i);
        KnnGraph g = blend::build_knn_graph(pts, 5, fixed);

        std::vector<Eigen::Vector3d> disp(fixed.size());
        for (auto& d : disp)
            d = Eigen::Vector3d(uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2));

        auto u = blend::harmonic_displacements(g, disp, 1e-10, 0);
        auto dense = panofuse_test::dense_harmonic(g, disp);

        double e_cg = panofuse_test::dirichlet_energy(g, u);
        double e_dense = panofuse_test::dirichlet_energy(g, dense);
        CHECK(std::abs(e_cg - e_dense) <= 1e-6 * std::max(1.0, std::abs(e_dense)));

        // fixed values are assigned bit-exactly
        for (std::size_t b = 0; b < fixed.size(); ++b) CHECK(u[fixed[b]] == disp[b]);

        // discrete maximum principle per coordinate
        for (int c = 0; c < 3; ++c) {
            double lo = disp[0][c], hi = disp[0][c];
            for (const auto& d : disp) {
                lo = std::min(lo, d[c]);
                hi = std::max(hi, d[c]);
            }
            for (int i = 0; i < n; ++i) {
                if (g.disconnected[i]) continue;
                CHECK(u[i][c] >= lo - 1e-8);
                CHECK(u[i][c] <= hi + 1e-8);
            }
        }
    }
}

TEST_CASE("harmonic solution is a strict energy minimum") {
    std::mt19937_64 rng(19);
    auto pts = random_points(rng, 80);
    std::vector<int> fixed = {0, 1, 2, 3, 4};
    KnnGraph g = blend::build_knn_graph(pts, 5, fixed);
    std::vector<Eigen::Vector3d> disp(fixed.size());
    for (auto& d : disp)
        d = Eigen::Vector3d(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
    auto u = blend::harmonic_displacements(g, disp, 1e-12, 0);
    double base = panofuse_test::dirichlet_energy(g, u);
    for (int trial = 0; trial < 20; ++trial) {
        auto perturbed = u;
        int node = 5 + static_cast<int>(u01(rng) * (pts.size() - 5));
        perturbed[node] += Eigen::Vector3d(uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5),
                                           uniform(rng, -0.5, 0.5));
        CHECK(panofuse_test::dirichlet_energy(g, perturbed) > base);
    }
}

TEST_CASE("rigid-motion equivariance of the solve") {
    std::mt19937_64 rng(23);
    auto pts = random_points(rng, 120);
    std::vector<int> fixed = {0, 1, 2, 3, 4, 5};
    std::vector<Eigen::Vector3d> disp(fixed.size());
    for (auto& d : disp)
        d = Eigen::Vector3d(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));

    KnnGraph g = blend::build_knn_graph(pts, 5, fixed);
    auto u = blend::harmonic_displacements(g, disp, 1e-12, 0);

    Eigen::Matrix3d q = Eigen::Quaterniond(0.3, -0.5, 0.8, 0.12).normalized().toRotationMatrix();
    std::vector<Eigen::Vector3d> rpts(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) rpts[i] = q * pts[i];
    std::vector<Eigen::Vector3d> rdisp(disp.size());
    for (std::size_t i = 0; i < disp.size(); ++i) rdisp[i] = q * disp[i];

    KnnGraph rg = blend::build_knn_graph(rpts, 5, fixed);
    auto ru = blend::harmonic_displacements(rg, rdisp, 1e-12, 0);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK((ru[i] - q * u[i]).norm() < 1e-8);
}

TEST_CASE("isolated free components keep zero displacement") {
    // Two clusters far apart; only one touches the boundary.
    std::vector<Eigen::Vector3d> pts;
    for (int i = 0; i < 6; ++i) pts.push_back(Eigen::Vector3d(0.1 * i, 0, 0));
    for (int i = 0; i < 4; ++i) pts.push_back(Eigen::Vector3d(1000 + 0.1 * i, 0, 0));
    KnnGraph g = blend::build_knn_graph(pts, 2, {0});
    CHECK(g.has_disconnected());
    auto u = blend::harmonic_displacements(g, {Eigen::Vector3d(1, 0, 0)}, 1e-10, 0);
    for (int i = 6; i < 10; ++i) CHECK(u[i].norm() == 0.0);
}

TEST_CASE("naive_blend selects by mask") {
    const int w = 8, h = 4;
    DepthMap d_r(w, h, 2.0), d_est(w, h, 5.0);
    CHECK(blend::naive_blend(d_r, d_est, BitMask(w, h, true)).values ==
          std::vector<double>(w * h, 2.0));
    CHECK(blend::naive_blend(d_r, d_est, BitMask(w, h, false)).values ==
          std::vector<double>(w * h, 5.0));

    BitMask half(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w / 2; ++x) half.set(x, y, true);
    DepthMap out = blend::naive_blend(d_r, d_est, half);
    CHECK(evalkit::transition_score(out, half) == doctest::Approx(3.0));
}

TEST_CASE("offset_interpolation_blend: constant and two-sample offsets") {
    const int w = 16, h = 8;
    DepthMap d_est(w, h, 4.0);

    // constant boundary offset c propagates exactly
    BitMask m(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w / 2; ++x) m.set(x, y, true);
    DepthMap d_r(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w / 2; ++x) d_r.at(x, y) = 4.0 + 1.25;
    DepthMap out = blend::offset_interpolation_blend(d_r, d_est, m);
    for (int y = 0; y < h; ++y)
        for (int x = w / 2; x < w; ++x) CHECK(out.at(x, y) == doctest::Approx(5.25).epsilon(1e-12));

    // equidistant query between offsets 0 and 2 interpolates to 1
    {
        BitMask mask(5, 1);
        mask.set(0, 0, true);
        mask.set(4, 0, true);
        // wrap distance from x=2 to both samples is 2
        DepthMap dr(5, 1);
        DepthMap de(5, 1, 1.0);
        dr.at(0, 0) = 1.0;      // offset 0
        dr.at(4, 0) = 3.0;      // offset 2
        DepthMap o = blend::offset_interpolation_blend(dr, de, mask);
        CHECK(o.at(2, 0) == doctest::Approx(1.0 + 1.0).epsilon(1e-12));
    }

    // matches naive when offsets vanish on the boundary
    DepthMap d_r_eq(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w / 2; ++x) d_r_eq.at(x, y) = 4.0;
    DepthMap naive = blend::naive_blend(d_r_eq, d_est, m);
    DepthMap interp = blend::offset_interpolation_blend(d_r_eq, d_est, m);
    for (std::size_t i = 0; i < naive.values.size(); ++i)
        CHECK(interp.values[i] == doctest::Approx(naive.values[i]).epsilon(1e-12));
}

namespace {

struct SphereBlendCase {
    DepthMap d_r, d_est;
    BitMask m_r;
};

// Left half trusted at radius r_true; the estimate carries a global scale
// error, so it disagrees with the trusted depth already at the boundary.
SphereBlendCase make_sphere_case(int w, int h, double r_true, double scale) {
    SphereBlendCase c;
    c.d_r = DepthMap(w, h);
    c.d_est = DepthMap(w, h, scale * r_true);
    c.m_r = BitMask(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            bool known = x < w / 2;
            c.m_r.set(x, y, known);
            if (known) c.d_r.at(x, y) = r_true;
        }
    }
    return c;
}

}  // namespace

TEST_CASE("harmonic_blend_depth: consistent estimate passes through") {
    auto c = make_sphere_case(32, 16, 5.0, 1.0);
    blend::BlendDiagnostics diag;
    DepthMap out = blend::harmonic_blend_depth(c.d_r, c.d_est, c.m_r, Pose::identity(), {}, &diag);
    CHECK(diag.max_boundary_mismatch < 1e-12);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 32; ++x) {
            if (c.m_r.get(x, y)) {
                CHECK(out.at(x, y) == c.d_r.at(x, y));  // bit identical
            } else {
                CHECK(out.at(x, y) == doctest::Approx(c.d_est.at(x, y)).epsilon(1e-9));
            }
        }
}

TEST_CASE("harmonic_blend_depth: scale-offset sphere heals the seam") {
    auto c = make_sphere_case(160, 80, 5.0, 1.2);
    blend::BlendDiagnostics diag;
    DepthMap hb = blend::harmonic_blend_depth(c.d_r, c.d_est, c.m_r, Pose::identity(), {}, &diag);
    DepthMap naive = blend::naive_blend(c.d_r, c.d_est, c.m_r);

    double median_depth = 5.0;
    double score_hb = evalkit::transition_score(hb, c.m_r);
    double score_naive = evalkit::transition_score(naive, c.m_r);
    CHECK(score_hb < 0.01 * median_depth);
    CHECK(score_naive == doctest::Approx(0.2 * median_depth).epsilon(1e-6));
    CHECK(diag.max_boundary_mismatch < 1e-9 * median_depth);

    // mask preservation is bit-exact
    for (int y = 0; y < hb.height; ++y)
        for (int x = 0; x < hb.width; ++x)
            if (c.m_r.get(x, y)) CHECK(hb.at(x, y) == c.d_r.at(x, y));
}

TEST_CASE("harmonic_blend_depth: degenerate masks") {
    const int w = 16, h = 8;
    DepthMap d_r(w, h, 3.0), d_est(w, h, 4.0);
    DepthMap full = blend::harmonic_blend_depth(d_r, d_est, BitMask(w, h, true), Pose::identity());
    CHECK(full.values == d_r.values);
    DepthMap none = blend::harmonic_blend_depth(d_r, d_est, BitMask(w, h, false), Pose::identity());
    CHECK(none.values == d_est.values);
}

TEST_CASE("harmonic_blend_depth: node cap subsamples but stays anchored") {
    auto c = make_sphere_case(64, 32, 5.0, 1.15);
    BlendParams params;
    params.node_cap = 200;  // force heavy subsampling
    blend::BlendDiagnostics diag;
    DepthMap out = blend::harmonic_blend_depth(c.d_r, c.d_est, c.m_r, Pose::identity(), params,
                                               &diag);
    CHECK(diag.subsampled);
    CHECK(out.fully_defined());
    double score = evalkit::transition_score(out, c.m_r);
    CHECK(score < 0.05 * 5.0);  // still far better than the naive seam (1.0)
}

TEST_CASE("non-convergence raises a solver error carrying the residual") {
    std::mt19937_64 rng(31);
    auto pts = random_points(rng, 200);
    std::vector<int> fixed = {0};
    KnnGraph g = blend::build_knn_graph(pts, 4, fixed);
    CHECK_THROWS_AS(
        blend::harmonic_displacements(g, {Eigen::Vector3d(5, 0, 0)}, 1e-14, 2),
        blend::SolverError);
}
