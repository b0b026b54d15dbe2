#pragma once

#include <cstdint>

#include "panofuse/blend/harmonic.hpp"
#include "panofuse/evalkit/metrics.hpp"
#include "panofuse/oracle/scene.hpp"
#include "panofuse/oracle/synthetic.hpp"

namespace panofuse::evalkit {

/// Depth-completion harness: mask a portion of a reference depth map, rebuild
/// the missing region from an affine-corrupted estimate with each blending
/// method, and score the seams.
struct DepthFillCase {
    geom::DepthMap ground_truth;  // exact reference depth
    geom::DepthMap rendered;      // ground truth restricted to the known mask
    geom::DepthMap estimated;     // corrupted estimate, fully defined
    geom::BitMask known;          // M^r
    geom::Pose pose;
    double median_depth = 0.0;
};

/// Random-blob unknown region of roughly `mask_fraction` of the raster.
DepthFillCase make_depthfill_case(const oracle::SceneSpec& scene, const geom::Pose& pose,
                                  int width, int height, double mask_fraction,
                                  const oracle::DepthCorruption& corruption, std::uint64_t seed);

struct MethodScores {
    double transition = 0.0;  // seam smoothness
    double band_mae = 0.0;    // accuracy in the band inside the unknown region
};

struct DepthFillResult {
    MethodScores harmonic;
    MethodScores interpolation;
    MethodScores naive;
    blend::BlendDiagnostics harmonic_diagnostics;
};

DepthFillResult run_depthfill(const DepthFillCase& c, const blend::BlendParams& params = {},
                              int band = 3);

}  // namespace panofuse::evalkit
