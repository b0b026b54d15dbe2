#pragma once

#include "panofuse/geom/raster.hpp"

namespace panofuse::evalkit {

/// Fraction of pixels hit by world content rather than the black background.
double coverage(const geom::BitMask& visibility);

struct DepthMetricsReport {
    double abs_rel = 0.0;
    double rmse = 0.0;
    double si_rmse = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
    double delta3 = 0.0;
    std::size_t evaluated_pixels = 0;
    std::size_t excluded_pixels = 0;  // nonpositive predictions under the valid mask
};

/// Standard monocular-depth error set over the valid pixels: AbsRel, RMSE,
/// scale-invariant RMSE in log space, and delta accuracies at 1.25^k.
/// Ground truth must be positive on the valid mask; nonpositive predictions
/// are excluded and counted, and an all-excluded input is an error.
DepthMetricsReport depth_metrics(const geom::DepthMap& pred, const geom::DepthMap& gt,
                                 const geom::BitMask& valid);

/// Mean absolute depth difference over 4-adjacent pixel pairs straddling the
/// mask boundary (one side in, one side out, both depths defined; azimuthal
/// wrap applies). Errors when no such pair exists.
double transition_score(const geom::DepthMap& depth, const geom::BitMask& mask);

/// MAE against ground truth over the complement-side pixels within `band`
/// dilations of the mask boundary.
double transition_region_mae(const geom::DepthMap& pred, const geom::DepthMap& gt,
                             const geom::BitMask& mask, int band);

}  // namespace panofuse::evalkit
