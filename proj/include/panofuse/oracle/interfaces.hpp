#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "panofuse/geom/pose.hpp"
#include "panofuse/geom/raster.hpp"
#include "panofuse/util.hpp"

namespace panofuse::oracle {

/// Failure surfaced from a generative backend, tagged with the request that
/// produced it so pipeline stages can be identified in logs.
class OracleError : public Error {
public:
    OracleError(const std::string& what, std::string request_id)
        : Error(what + " [request " + request_id + "]"), request_id(std::move(request_id)) {}
    std::string request_id;
};

/// Text-conditioned panorama generation. Synthetic backends also return exact
/// depth; model-backed ones return only the image. Poses ride along on every
/// request so backends with scene knowledge can stay view-consistent.
class PanoramaGen {
public:
    virtual ~PanoramaGen() = default;
    virtual std::pair<geom::EqrImage, std::optional<geom::DepthMap>> generate(
        const std::string& prompt, const geom::Pose& pose, int width, int height) = 0;
};

/// Replaces the masked region of an image; pixels outside the mask must come
/// back unchanged (callers composite over the originals regardless).
class Inpainter {
public:
    virtual ~Inpainter() = default;
    virtual geom::EqrImage inpaint(const geom::EqrImage& image, const geom::BitMask& mask,
                                   const std::string& prompt, const geom::Pose& pose) = 0;
};

class DepthEstimator {
public:
    virtual ~DepthEstimator() = default;
    virtual geom::DepthMap estimate(const geom::EqrImage& image, const geom::Pose& pose) = 0;
};

class Segmenter {
public:
    virtual ~Segmenter() = default;
    virtual std::vector<geom::BitMask> segment(const geom::EqrImage& image,
                                               const geom::Pose& pose) = 0;
};

struct OracleSet {
    std::shared_ptr<PanoramaGen> panorama;
    std::shared_ptr<Inpainter> inpainter;
    std::shared_ptr<DepthEstimator> depth;
    std::shared_ptr<Segmenter> segmenter;
};

}  // namespace panofuse::oracle
