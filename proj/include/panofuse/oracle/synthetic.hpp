#pragma once

#include "panofuse/oracle/interfaces.hpp"
#include "panofuse/oracle/scene.hpp"

namespace panofuse::oracle {

/// Affine error model for the synthetic depth estimator: scale * d + offset
/// plus smooth pixel-space noise of the given relative amplitude. The default
/// is exact depth. scale_jitter draws an extra per-request scale factor in
/// [1 - j, 1 + j] from the request pose, reproducing the per-panorama scale
/// ambiguity of monocular estimators.
struct DepthCorruption {
    double scale = 1.0;
    double offset = 0.0;
    double noise_amplitude = 0.0;  // fraction of the true median depth
    double scale_jitter = 0.0;
    std::uint64_t seed = 0;

    bool is_identity() const {
        return scale == 1.0 && offset == 0.0 && noise_amplitude == 0.0 && scale_jitter == 0.0;
    }
};

class SyntheticPanoramaGen final : public PanoramaGen {
public:
    /// with_depth false withholds the exact depth channel, forcing callers
    /// down the estimator path (as with generated panoramas).
    explicit SyntheticPanoramaGen(SceneSpec scene, bool with_depth = true)
        : scene_(std::move(scene)), with_depth_(with_depth) {}
    std::pair<geom::EqrImage, std::optional<geom::DepthMap>> generate(const std::string& prompt,
                                                                      const geom::Pose& pose,
                                                                      int width,
                                                                      int height) override;

private:
    SceneSpec scene_;
    bool with_depth_ = true;
};

/// Fills masked pixels by tracing the scene, skipping every object whose
/// visible silhouette intersects the mask — so masking a foreground object
/// reveals the true background behind it, and masking an unseen region
/// produces exactly the content a perfect generator would.
class SyntheticInpainter final : public Inpainter {
public:
    explicit SyntheticInpainter(SceneSpec scene) : scene_(std::move(scene)) {}
    geom::EqrImage inpaint(const geom::EqrImage& image, const geom::BitMask& mask,
                           const std::string& prompt, const geom::Pose& pose) override;

private:
    SceneSpec scene_;
};

class SyntheticDepthEstimator final : public DepthEstimator {
public:
    SyntheticDepthEstimator(SceneSpec scene, DepthCorruption corruption = {})
        : scene_(std::move(scene)), corruption_(corruption) {}
    geom::DepthMap estimate(const geom::EqrImage& image, const geom::Pose& pose) override;

private:
    SceneSpec scene_;
    DepthCorruption corruption_;
};

/// Exact object silhouettes plus `distractors` hashed disk masks over the sky
/// region (uniform-ish depth, so they score near zero downstream).
class SyntheticSegmenter final : public Segmenter {
public:
    SyntheticSegmenter(SceneSpec scene, int distractors = 1)
        : scene_(std::move(scene)), distractors_(distractors) {}
    std::vector<geom::BitMask> segment(const geom::EqrImage& image,
                                       const geom::Pose& pose) override;

private:
    SceneSpec scene_;
    int distractors_ = 1;
};

/// Scene-free fallback inpainter: normalized multi-scale push-pull fill.
/// Useful for offline runs against real rasters.
class SmearInpainter final : public Inpainter {
public:
    geom::EqrImage inpaint(const geom::EqrImage& image, const geom::BitMask& mask,
                           const std::string& prompt, const geom::Pose& pose) override;
};

OracleSet make_synthetic_oracles(const SceneSpec& scene, const DepthCorruption& corruption = {},
                                 int distractors = 1);

}  // namespace panofuse::oracle
