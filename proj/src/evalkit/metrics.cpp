#include "panofuse/evalkit/metrics.hpp"

#include <cmath>

#include "panofuse/raster_ops.hpp"
#include "panofuse/util.hpp"

namespace panofuse::evalkit {

using geom::BitMask;
using geom::DepthMap;

double coverage(const BitMask& visibility) {
    if (visibility.bits.empty()) return 0.0;
    return static_cast<double>(visibility.count()) / static_cast<double>(visibility.bits.size());
}

DepthMetricsReport depth_metrics(const DepthMap& pred, const DepthMap& gt, const BitMask& valid) {
    if (!pred.same_size(gt.width, gt.height) || !valid.same_size(gt.width, gt.height))
        throw Error("depth_metrics: raster size mismatch");

    DepthMetricsReport rep;
    double sum_abs_rel = 0.0, sum_sq = 0.0, sum_log = 0.0, sum_log_sq = 0.0;
    std::size_t d1 = 0, d2 = 0, d3 = 0;
    const double t1 = 1.25, t2 = 1.25 * 1.25, t3 = 1.25 * 1.25 * 1.25;

    for (int y = 0; y < gt.height; ++y) {
        for (int x = 0; x < gt.width; ++x) {
            if (!valid.get(x, y)) continue;
            double g = gt.at(x, y);
            if (!(std::isfinite(g) && g > 0.0))
                throw Error("depth_metrics: ground truth must be positive on the valid mask");
            double p = pred.at(x, y);
            if (!(std::isfinite(p) && p > 0.0)) {
                rep.excluded_pixels++;
                continue;
            }
            rep.evaluated_pixels++;
            double diff = p - g;
            sum_abs_rel += std::abs(diff) / g;
            sum_sq += diff * diff;
            double e = std::log(p) - std::log(g);
            sum_log += e;
            sum_log_sq += e * e;
            double ratio = std::max(p / g, g / p);
            if (ratio < t1) ++d1;
            if (ratio < t2) ++d2;
            if (ratio < t3) ++d3;
        }
    }
    if (rep.evaluated_pixels == 0) throw Error("depth_metrics: no evaluable pixels");
    double n = static_cast<double>(rep.evaluated_pixels);
    rep.abs_rel = sum_abs_rel / n;
    rep.rmse = std::sqrt(sum_sq / n);
    double mean_log = sum_log / n;
    rep.si_rmse = std::sqrt(std::max(0.0, sum_log_sq / n - mean_log * mean_log));
    rep.delta1 = d1 / n;
    rep.delta2 = d2 / n;
    rep.delta3 = d3 / n;
    return rep;
}

double transition_score(const DepthMap& depth, const BitMask& mask) {
    if (!depth.same_size(mask.width, mask.height))
        throw Error("transition_score: raster size mismatch");
    double sum = 0.0;
    std::size_t count = 0;
    auto consider = [&](int ax, int ay, int bx, int by) {
        if (!mask.get(ax, ay) || mask.get(bx, by)) return;
        if (!depth.defined(ax, ay) || !depth.defined(bx, by)) return;
        sum += std::abs(depth.at(ax, ay) - depth.at(bx, by));
        ++count;
    };
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            int xr = wrap_x(x + 1, mask.width);
            consider(x, y, xr, y);  // pair (x, x+1): either side may be the inside
            consider(xr, y, x, y);
            if (y + 1 < mask.height) {
                consider(x, y, x, y + 1);
                consider(x, y + 1, x, y);
            }
        }
    }
    if (count == 0) throw Error("transition_score: no boundary pixel pairs");
    return sum / static_cast<double>(count);
}

double transition_region_mae(const DepthMap& pred, const DepthMap& gt, const BitMask& mask,
                             int band) {
    if (band < 1) throw Error("transition_region_mae: band must be >= 1");
    if (!pred.same_size(gt.width, gt.height) || !mask.same_size(gt.width, gt.height))
        throw Error("transition_region_mae: raster size mismatch");
    BitMask dilated = dilate4(mask, band);
    double sum = 0.0;
    std::size_t count = 0;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (mask.get(x, y) || !dilated.get(x, y)) continue;
            if (!pred.defined(x, y) || !gt.defined(x, y)) continue;
            sum += std::abs(pred.at(x, y) - gt.at(x, y));
            ++count;
        }
    }
    if (count == 0) throw Error("transition_region_mae: empty band");
    return sum / static_cast<double>(count);
}

}  // namespace panofuse::evalkit
