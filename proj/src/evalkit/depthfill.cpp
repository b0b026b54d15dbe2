#include "panofuse/evalkit/depthfill.hpp"

#include <cmath>
#include <random>

#include "panofuse/raster_ops.hpp"
#include "panofuse/util.hpp"

namespace panofuse::evalkit {

using geom::BitMask;
using geom::DepthMap;

DepthFillCase make_depthfill_case(const oracle::SceneSpec& scene, const geom::Pose& pose,
                                  int width, int height, double mask_fraction,
                                  const oracle::DepthCorruption& corruption, std::uint64_t seed) {
    if (!(mask_fraction > 0.0 && mask_fraction < 1.0))
        throw Error("make_depthfill_case: mask_fraction must be in (0, 1)");

    DepthFillCase out;
    out.pose = pose;
    oracle::render_scene_eqr(scene, pose, width, height, nullptr, &out.ground_truth);
    out.median_depth = median(std::vector<double>(out.ground_truth.values));

    oracle::SyntheticDepthEstimator estimator(scene, corruption);
    out.estimated = estimator.estimate(geom::EqrImage(width, height), pose);

    // Unknown region: random disks away from the poles until the target
    // fraction is reached.
    BitMask unknown(width, height);
    std::mt19937_64 rng(seed);
    const std::size_t target = static_cast<std::size_t>(mask_fraction * width * height);
    int guard = 0;
    while (unknown.count() < target && guard++ < 200) {
        int cx = static_cast<int>(u01(rng) * width);
        int cy = static_cast<int>(height * uniform(rng, 0.2, 0.8));
        int r = static_cast<int>(height * uniform(rng, 0.08, 0.2));
        for (int y = std::max(0, cy - r); y <= std::min(height - 1, cy + r); ++y)
            for (int dx = -r; dx <= r; ++dx)
                if (dx * dx + (y - cy) * (y - cy) <= r * r)
                    unknown.set(wrap_x(cx + dx, width), y, true);
    }
    out.known = geom::mask_not(unknown);

    out.rendered = DepthMap(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            if (out.known.get(x, y)) out.rendered.at(x, y) = out.ground_truth.at(x, y);
    return out;
}

DepthFillResult run_depthfill(const DepthFillCase& c, const blend::BlendParams& params,
                              int band) {
    DepthFillResult result;
    auto score = [&](const DepthMap& reconstructed) {
        MethodScores s;
        s.transition = transition_score(reconstructed, c.known);
        s.band_mae = transition_region_mae(reconstructed, c.ground_truth, c.known, band);
        return s;
    };
    DepthMap hb = blend::harmonic_blend_depth(c.rendered, c.estimated, c.known, c.pose, params,
                                              &result.harmonic_diagnostics);
    result.harmonic = score(hb);
    result.interpolation = score(blend::offset_interpolation_blend(c.rendered, c.estimated,
                                                                   c.known));
    result.naive = score(blend::naive_blend(c.rendered, c.estimated, c.known));
    return result;
}

}  // namespace panofuse::evalkit
