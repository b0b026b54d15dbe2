#include "panofuse/raster_ops.hpp"

#include <cmath>

#include "panofuse/util.hpp"

namespace panofuse {

using geom::BitMask;
using geom::DepthMap;

BitMask erode4(const BitMask& mask) {
    BitMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.get(x, y)) continue;
            bool keep = mask.get(wrap_x(x - 1, mask.width), y) &&
                        mask.get(wrap_x(x + 1, mask.width), y) &&
                        (y == 0 || mask.get(x, y - 1)) &&
                        (y == mask.height - 1 || mask.get(x, y + 1));
            out.set(x, y, keep);
        }
    }
    return out;
}

BitMask dilate4(const BitMask& mask, int iterations) {
    BitMask cur = mask;
    for (int it = 0; it < iterations; ++it) {
        BitMask next = cur;
        for (int y = 0; y < cur.height; ++y) {
            for (int x = 0; x < cur.width; ++x) {
                if (cur.get(x, y)) continue;
                bool hit = cur.get(wrap_x(x - 1, cur.width), y) ||
                           cur.get(wrap_x(x + 1, cur.width), y) ||
                           (y > 0 && cur.get(x, y - 1)) ||
                           (y < cur.height - 1 && cur.get(x, y + 1));
                if (hit) next.set(x, y, true);
            }
        }
        cur = std::move(next);
    }
    return cur;
}

std::vector<Eigen::Vector2i> boundary_pixels(const BitMask& mask) {
    std::vector<Eigen::Vector2i> out;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.get(x, y)) continue;
            bool outside = !mask.get(wrap_x(x - 1, mask.width), y) ||
                           !mask.get(wrap_x(x + 1, mask.width), y) ||
                           (y > 0 && !mask.get(x, y - 1)) ||
                           (y < mask.height - 1 && !mask.get(x, y + 1));
            if (outside) out.emplace_back(x, y);
        }
    }
    return out;
}

DepthMap gaussian_blur(const DepthMap& field, double sigma) {
    if (sigma <= 0.0) return field;
    int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(2 * radius + 1);
    for (int i = -radius; i <= radius; ++i)
        kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));

    const int w = field.width, h = field.height;
    DepthMap tmp(w, h, 0.0), out(w, h, 0.0);

    // horizontal pass, wrap
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0, wsum = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                double v = field.at(wrap_x(x + i, w), y);
                if (!std::isfinite(v)) continue;
                acc += kernel[i + radius] * v;
                wsum += kernel[i + radius];
            }
            tmp.at(x, y) = wsum > 0.0 ? acc / wsum : 0.0;
        }
    }
    // vertical pass, clamp
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0, wsum = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                int yy = std::clamp(y + i, 0, h - 1);
                double v = tmp.at(x, yy);
                acc += kernel[i + radius] * v;
                wsum += kernel[i + radius];
            }
            out.at(x, y) = wsum > 0.0 ? acc / wsum : 0.0;
        }
    }
    return out;
}

double bilinear_wrapx(const DepthMap& field, double x, double y) {
    if (y < 0.0 || y > field.height - 1)
        return std::numeric_limits<double>::quiet_NaN();
    int x0 = static_cast<int>(std::floor(x));
    int y0 = static_cast<int>(std::floor(y));
    double fx = x - x0;
    double fy = y - y0;
    int x1 = x0 + 1;
    int y1 = std::min(y0 + 1, field.height - 1);
    y0 = std::clamp(y0, 0, field.height - 1);
    double v00 = field.at(wrap_x(x0, field.width), y0);
    double v10 = field.at(wrap_x(x1, field.width), y0);
    double v01 = field.at(wrap_x(x0, field.width), y1);
    double v11 = field.at(wrap_x(x1, field.width), y1);
    if (!std::isfinite(v00) || !std::isfinite(v10) || !std::isfinite(v01) || !std::isfinite(v11))
        return std::numeric_limits<double>::quiet_NaN();
    double top = v00 * (1.0 - fx) + v10 * fx;
    double bot = v01 * (1.0 - fx) + v11 * fx;
    return top * (1.0 - fy) + bot * fy;
}

}  // namespace panofuse
