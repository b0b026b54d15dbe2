#include "panofuse/ldp/ldp.hpp"

#include <cmath>
#include <deque>
#include <numbers>

#include "panofuse/raster_ops.hpp"
#include "panofuse/util.hpp"

namespace panofuse::ldp {

using geom::BitMask;
using geom::DepthMap;
using geom::EqrImage;

BitMask depth_edges(const DepthMap& depth, double low, double high) {
    if (!(low > 0.0 && low < high && high <= 1.0))
        throw Error("depth_edges: need 0 < low < high <= 1");
    if (!depth.fully_defined()) throw Error("depth_edges: depth must be fully defined");

    const int w = depth.width, h = depth.height;
    double dmin = depth.values[0], dmax = depth.values[0];
    for (double v : depth.values) {
        dmin = std::min(dmin, v);
        dmax = std::max(dmax, v);
    }
    BitMask edges(w, h);
    if (dmax - dmin <= 0.0) return edges;  // constant depth, no edges

    DepthMap norm(w, h);
    for (std::size_t i = 0; i < depth.values.size(); ++i)
        norm.values[i] = (depth.values[i] - dmin) / (dmax - dmin);
    DepthMap smooth = gaussian_blur(norm, 1.0);

    // Sobel gradients, wrap in x, clamp in y.
    DepthMap mag(w, h, 0.0), gx(w, h, 0.0), gy(w, h, 0.0);
    double max_mag = 0.0;
    for (int y = 0; y < h; ++y) {
        int ym = std::max(0, y - 1), yp = std::min(h - 1, y + 1);
        for (int x = 0; x < w; ++x) {
            int xm = wrap_x(x - 1, w), xp = wrap_x(x + 1, w);
            double sx = (smooth.at(xp, ym) + 2.0 * smooth.at(xp, y) + smooth.at(xp, yp)) -
                        (smooth.at(xm, ym) + 2.0 * smooth.at(xm, y) + smooth.at(xm, yp));
            double sy = (smooth.at(xm, yp) + 2.0 * smooth.at(x, yp) + smooth.at(xp, yp)) -
                        (smooth.at(xm, ym) + 2.0 * smooth.at(x, ym) + smooth.at(xp, ym));
            gx.at(x, y) = sx;
            gy.at(x, y) = sy;
            mag.at(x, y) = std::hypot(sx, sy);
            max_mag = std::max(max_mag, mag.at(x, y));
        }
    }
    if (max_mag <= 0.0) return edges;

    // Non-maximum suppression with interpolated magnitudes along the exact
    // gradient direction; strict on one side so plateaus thin to one pixel.
    BitMask thin(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double m = mag.at(x, y);
            if (m <= 0.0) continue;
            double ux = gx.at(x, y) / m, uy = gy.at(x, y) / m;
            double fwd = bilinear_wrapx(mag, x + ux, std::clamp(y + uy, 0.0, h - 1.0));
            double bwd = bilinear_wrapx(mag, x - ux, std::clamp(y - uy, 0.0, h - 1.0));
            if (m >= fwd && m > bwd) thin.set(x, y, true);
        }
    }

    // Hysteresis: grow from strong pixels through weak ones (8-connectivity).
    const double hi = high * max_mag, lo = low * max_mag;
    std::deque<std::pair<int, int>> frontier;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (thin.get(x, y) && mag.at(x, y) >= hi) {
                edges.set(x, y, true);
                frontier.emplace_back(x, y);
            }
    while (!frontier.empty()) {
        auto [x, y] = frontier.front();
        frontier.pop_front();
        for (int dy = -1; dy <= 1; ++dy) {
            int yy = y + dy;
            if (yy < 0 || yy >= h) continue;
            for (int dx = -1; dx <= 1; ++dx) {
                int xx = wrap_x(x + dx, w);
                if (edges.get(xx, yy) || !thin.get(xx, yy)) continue;
                if (mag.at(xx, yy) >= lo) {
                    edges.set(xx, yy, true);
                    frontier.emplace_back(xx, yy);
                }
            }
        }
    }
    return edges;
}

std::vector<BoundaryNormal> boundary_normals(const BitMask& mask, double sigma) {
    std::vector<BoundaryNormal> out;
    auto boundary = boundary_pixels(mask);
    if (boundary.empty()) return out;

    DepthMap indicator(mask.width, mask.height, 0.0);
    for (std::size_t i = 0; i < mask.bits.size(); ++i)
        indicator.values[i] = mask.bits[i] ? 1.0 : 0.0;
    DepthMap smooth = gaussian_blur(indicator, sigma);

    out.reserve(boundary.size());
    for (const auto& px : boundary) {
        int x = px.x(), y = px.y();
        int ym = std::max(0, y - 1), yp = std::min(mask.height - 1, y + 1);
        double dx = 0.5 * (smooth.at(wrap_x(x + 1, mask.width), y) -
                           smooth.at(wrap_x(x - 1, mask.width), y));
        double dy = 0.5 * (smooth.at(x, yp) - smooth.at(x, ym));
        Eigen::Vector2d grad(dx, dy);
        Eigen::Vector2d normal;
        if (grad.norm() > 1e-12) {
            normal = -grad.normalized();  // indicator grows inward, so negate
        } else {
            // flat smoothed field: point at the nearest outside 4-neighbor
            normal = Eigen::Vector2d(1.0, 0.0);
            if (!mask.get(wrap_x(x + 1, mask.width), y)) normal = {1.0, 0.0};
            else if (!mask.get(wrap_x(x - 1, mask.width), y)) normal = {-1.0, 0.0};
            else if (y + 1 < mask.height && !mask.get(x, y + 1)) normal = {0.0, 1.0};
            else if (y - 1 >= 0 && !mask.get(x, y - 1)) normal = {0.0, -1.0};
        }
        out.push_back({Eigen::Vector2d(x, y), normal});
    }
    return out;
}

MaskScore foreground_score(const BitMask& mask, const DepthMap& depth, const BitMask& edges,
                           double eps, double sigma, int mask_index) {
    if (!depth.same_size(mask.width, mask.height) || !edges.same_size(mask.width, mask.height))
        throw Error("foreground_score: raster size mismatch");
    if (!(eps > 0.0)) throw Error("foreground_score: eps must be positive");

    MaskScore score;
    score.mask_index = mask_index;

    // The thinned edge ridge may sit one pixel off the mask contour; one
    // dilation keeps the intersection stable.
    BitMask near_edges = dilate4(edges, 1);

    double sum = 0.0;
    int count = 0;
    for (const auto& bn : boundary_normals(mask, sigma)) {
        int x = static_cast<int>(bn.position.x());
        int y = static_cast<int>(bn.position.y());
        if (!near_edges.get(x, y)) continue;
        Eigen::Vector2d outside = bn.position + eps * bn.normal;
        Eigen::Vector2d inside = bn.position - eps * bn.normal;
        double d_out = bilinear_wrapx(depth, outside.x(), outside.y());
        double d_in = bilinear_wrapx(depth, inside.x(), inside.y());
        if (!std::isfinite(d_out) || !std::isfinite(d_in)) continue;
        sum += d_out - d_in;
        ++count;
    }
    if (count > 0) {
        score.score = sum / count;
        score.boundary_sample_count = count;
    }
    return score;
}

BitMask select_foreground(const std::vector<BitMask>& masks, const std::vector<MaskScore>& scores,
                          double t, int min_samples) {
    if (masks.size() != scores.size()) throw Error("select_foreground: misaligned inputs");
    if (masks.empty()) return BitMask();
    BitMask out(masks[0].width, masks[0].height);
    for (std::size_t i = 0; i < masks.size(); ++i) {
        if (scores[i].boundary_sample_count < min_samples) continue;
        if (!(scores[i].score > t)) continue;
        out = mask_or(out, masks[i]);
    }
    return out;
}

DepthMap panoramic_hull(const DepthMap& depth) {
    DepthMap out(depth.width, depth.height);
    for (int y = 0; y < depth.height; ++y) {
        double best = -1.0;
        for (int x = 0; x < depth.width; ++x)
            if (depth.defined(x, y)) best = std::max(best, depth.at(x, y));
        if (best <= 0.0) throw Error("panoramic_hull: row " + std::to_string(y) +
                                     " has no defined depth");
        for (int x = 0; x < depth.width; ++x) out.at(x, y) = best;
    }
    return out;
}

LayeredDepthPanorama build_ldp(const EqrImage& image, const DepthMap& depth,
                               oracle::Segmenter& segmenter, oracle::Inpainter& inpainter,
                               const LdpParams& params, const std::string& prompt,
                               const geom::Pose& pose) {
    if (!depth.same_size(image.width, image.height)) throw Error("build_ldp: size mismatch");

    LayeredDepthPanorama out;
    out.fg_image = image;
    out.fg_depth = depth;

    BitMask edges;
    try {
        edges = depth_edges(depth, params.canny_low, params.canny_high);
    } catch (const Error& e) {
        throw Error(std::string("build_ldp[depth_edges]: ") + e.what());
    }

    std::vector<BitMask> masks;
    try {
        masks = segmenter.segment(image, pose);
    } catch (const std::exception& e) {
        throw Error(std::string("build_ldp[segment]: ") + e.what());
    }

    std::vector<MaskScore> scores(masks.size());
    parallel_for(masks.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            scores[i] = foreground_score(masks[i], depth, edges, params.eps, params.sigma,
                                         static_cast<int>(i));
    });

    double t = params.threshold_factor * median(std::vector<double>(depth.values));
    out.fg_mask = masks.empty() ? BitMask(image.width, image.height)
                                : select_foreground(masks, scores, t, params.min_samples);

    if (out.fg_mask.any()) {
        EqrImage inpainted;
        try {
            inpainted = inpainter.inpaint(image, out.fg_mask, prompt, pose);
        } catch (const std::exception& e) {
            throw Error(std::string("build_ldp[inpaint]: ") + e.what());
        }
        // Composite: unmasked pixels always come from the original.
        out.bg_image = image;
        for (int y = 0; y < image.height; ++y)
            for (int x = 0; x < image.width; ++x)
                if (out.fg_mask.get(x, y)) out.bg_image.at(x, y) = inpainted.at(x, y);
    } else {
        out.bg_image = image;
    }

    try {
        out.bg_depth = panoramic_hull(depth);
    } catch (const Error& e) {
        throw Error(std::string("build_ldp[hull]: ") + e.what());
    }
    return out;
}

}  // namespace panofuse::ldp
