#include "panofuse/oracle/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "panofuse/geom/eqr.hpp"
#include "panofuse/raster_ops.hpp"

namespace panofuse::oracle {

using geom::BitMask;
using geom::DepthMap;
using geom::EqrImage;

std::pair<EqrImage, std::optional<DepthMap>> SyntheticPanoramaGen::generate(
    const std::string& prompt, const geom::Pose& pose, int width, int height) {
    if (prompt.empty()) throw OracleError("panorama generation requires a prompt", "panorama");
    EqrImage image;
    DepthMap depth;
    render_scene_eqr(scene_, pose, width, height, &image, with_depth_ ? &depth : nullptr);
    if (!with_depth_) return {std::move(image), std::nullopt};
    return {std::move(image), std::move(depth)};
}

EqrImage SyntheticInpainter::inpaint(const EqrImage& image, const BitMask& mask,
                                     const std::string& prompt, const geom::Pose& pose) {
    (void)prompt;
    if (!mask.same_size(image.width, image.height))
        throw OracleError("inpaint mask size mismatch", "inpaint");
    if (!mask.any()) return image;

    // Objects whose visible silhouette touches the mask are treated as the
    // content being painted over, and excluded from the fill.
    std::vector<char> skip(scene_.objects.size(), 0);
    for (std::size_t i = 0; i < scene_.objects.size(); ++i) {
        BitMask sil = object_silhouette(scene_, pose, image.width, image.height,
                                        static_cast<int>(i));
        for (std::size_t p = 0; p < sil.bits.size(); ++p) {
            if (sil.bits[p] && mask.bits[p]) {
                skip[i] = 1;
                break;
            }
        }
    }

    EqrImage out = image;
    parallel_for(static_cast<std::size_t>(image.height), [&](std::size_t begin, std::size_t end) {
        for (std::size_t yy = begin; yy < end; ++yy) {
            int y = static_cast<int>(yy);
            for (int x = 0; x < image.width; ++x) {
                if (!mask.get(x, y)) continue;
                Eigen::Vector3d dir = pose.rotation *
                                      geom::pixel_to_direction(static_cast<double>(x),
                                                               static_cast<double>(y),
                                                               image.width, image.height);
                TraceHit hit = trace_ray(scene_, pose.translation, dir, &skip);
                out.at(x, y) = shade_hit(scene_, hit);
            }
        }
    });
    return out;
}

DepthMap SyntheticDepthEstimator::estimate(const EqrImage& image, const geom::Pose& pose) {
    DepthMap depth;
    render_scene_eqr(scene_, pose, image.width, image.height, nullptr, &depth);

    if (corruption_.is_identity()) return depth;
    const bool noisy = corruption_.noise_amplitude != 0.0;

    // per-request scale drawn deterministically from the pose
    double scale = corruption_.scale;
    if (corruption_.scale_jitter != 0.0) {
        std::uint64_t h = corruption_.seed;
        for (int c = 0; c < 3; ++c)
            h = hash64(h ^ static_cast<std::uint64_t>(
                               std::llround(pose.translation[c] * 4096.0)));
        scale *= 1.0 + corruption_.scale_jitter * (2.0 * hash_to_unit(h) - 1.0);
    }

    double noise_world = 0.0;
    if (noisy) {
        std::vector<double> vals(depth.values);
        noise_world = corruption_.noise_amplitude * median(std::move(vals));
    }
    // Smooth low-frequency noise field, integer azimuthal frequencies so the
    // field is continuous across the wrap seam.
    constexpr int kFreqX[3] = {2, 3, 5};
    constexpr int kFreqY[3] = {2, 4, 3};
    double phase[3], amp[3];
    for (int c = 0; c < 3; ++c) {
        phase[c] = 2.0 * std::numbers::pi * hash_to_unit(corruption_.seed + 101ull * c);
        amp[c] = 1.0 / (c + 1);
    }
    const double amp_sum = amp[0] + amp[1] + amp[2];
    for (int y = 0; y < depth.height; ++y) {
        for (int x = 0; x < depth.width; ++x) {
            double v = depth.at(x, y) * scale + corruption_.offset;
            if (noisy) {
                double ang = (x + 0.5) / depth.width * 2.0 * std::numbers::pi;
                double ty = (y + 0.5) / depth.height * std::numbers::pi;
                double n = 0.0;
                for (int c = 0; c < 3; ++c)
                    n += amp[c] * std::sin(kFreqX[c] * ang + phase[c]) * std::sin(kFreqY[c] * ty);
                v += noise_world * (n / amp_sum);
            }
            if (!(std::isfinite(v) && v > 0.0))
                throw OracleError("depth estimate produced nonpositive value", "depth");
            depth.at(x, y) = v;
        }
    }
    return depth;
}

std::vector<BitMask> SyntheticSegmenter::segment(const EqrImage& image, const geom::Pose& pose) {
    std::vector<BitMask> masks;
    for (std::size_t i = 0; i < scene_.objects.size(); ++i) {
        BitMask sil = object_silhouette(scene_, pose, image.width, image.height,
                                        static_cast<int>(i));
        if (sil.any()) masks.push_back(std::move(sil));
    }
    // Distractor disks over the upper (sky) rows.
    for (int d = 0; d < distractors_; ++d) {
        std::uint64_t s = scene_.seed + 31ull * (d + 1);
        int cx = static_cast<int>(hash_to_unit(s) * image.width);
        int cy = static_cast<int>(image.height * (0.08 + 0.14 * hash_to_unit(s + 1)));
        int radius = std::max(3, static_cast<int>(image.height * (0.04 + 0.05 * hash_to_unit(s + 2))));
        BitMask disk(image.width, image.height);
        for (int y = std::max(0, cy - radius); y <= std::min(image.height - 1, cy + radius); ++y)
            for (int dx = -radius; dx <= radius; ++dx)
                if (dx * dx + (y - cy) * (y - cy) <= radius * radius)
                    disk.set(wrap_x(cx + dx, image.width), y, true);
        masks.push_back(std::move(disk));
    }
    return masks;
}

EqrImage SmearInpainter::inpaint(const EqrImage& image, const BitMask& mask,
                                 const std::string& prompt, const geom::Pose& pose) {
    (void)prompt;
    (void)pose;
    if (!mask.same_size(image.width, image.height))
        throw OracleError("inpaint mask size mismatch", "inpaint");
    if (!mask.any()) return image;

    // Push-pull: average valid pixels down to 1x1, then fill holes coarse to
    // fine. Weights carry validity.
    struct Level {
        int w, h;
        std::vector<Eigen::Vector3f> color;
        std::vector<float> weight;
    };
    std::vector<Level> levels;
    Level base{image.width, image.height,
               std::vector<Eigen::Vector3f>(image.pixels.size(), Eigen::Vector3f::Zero()),
               std::vector<float>(image.pixels.size(), 0.f)};
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x)
            if (!mask.get(x, y)) {
                base.color[base.w * y + x] = image.at(x, y);
                base.weight[base.w * y + x] = 1.f;
            }
    levels.push_back(std::move(base));
    while (levels.back().w > 1 && levels.back().h > 1) {
        const Level& src = levels.back();
        Level dst{std::max(1, src.w / 2), std::max(1, src.h / 2), {}, {}};
        dst.color.assign(static_cast<std::size_t>(dst.w) * dst.h, Eigen::Vector3f::Zero());
        dst.weight.assign(static_cast<std::size_t>(dst.w) * dst.h, 0.f);
        for (int y = 0; y < dst.h; ++y)
            for (int x = 0; x < dst.w; ++x) {
                Eigen::Vector3f acc = Eigen::Vector3f::Zero();
                float wsum = 0.f;
                for (int dy = 0; dy < 2; ++dy)
                    for (int dx = 0; dx < 2; ++dx) {
                        int sx = std::min(src.w - 1, 2 * x + dx);
                        int sy = std::min(src.h - 1, 2 * y + dy);
                        acc += src.color[src.w * sy + sx] * src.weight[src.w * sy + sx];
                        wsum += src.weight[src.w * sy + sx];
                    }
                if (wsum > 0.f) {
                    dst.color[dst.w * y + x] = acc / wsum;
                    dst.weight[dst.w * y + x] = 1.f;
                }
            }
        levels.push_back(std::move(dst));
    }
    for (std::size_t l = levels.size() - 1; l-- > 0;) {
        Level& fine = levels[l];
        const Level& coarse = levels[l + 1];
        for (int y = 0; y < fine.h; ++y)
            for (int x = 0; x < fine.w; ++x) {
                if (fine.weight[fine.w * y + x] > 0.f) continue;
                int cx = std::min(coarse.w - 1, x / 2);
                int cy = std::min(coarse.h - 1, y / 2);
                fine.color[fine.w * y + x] = coarse.color[coarse.w * cy + cx];
                fine.weight[fine.w * y + x] = coarse.weight[coarse.w * cy + cx];
            }
    }
    EqrImage out = image;
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x)
            if (mask.get(x, y)) out.at(x, y) = levels[0].color[image.width * y + x];
    return out;
}

OracleSet make_synthetic_oracles(const SceneSpec& scene, const DepthCorruption& corruption,
                                 int distractors) {
    scene.validate();
    OracleSet set;
    // A corrupted estimator implies the panorama source carries no depth of
    // its own, as with generated imagery.
    set.panorama = std::make_shared<SyntheticPanoramaGen>(scene, corruption.is_identity());
    set.inpainter = std::make_shared<SyntheticInpainter>(scene);
    set.depth = std::make_shared<SyntheticDepthEstimator>(scene, corruption);
    set.segmenter = std::make_shared<SyntheticSegmenter>(scene, distractors);
    return set;
}

}  // namespace panofuse::oracle
