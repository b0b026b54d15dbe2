#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "panofuse/util.hpp"

namespace panofuse::geom {

/// RGB raster with channels in [0, 1]. Full panoramas satisfy width == 2 * height;
/// the same type also carries perspective render targets, so the aspect is
/// checked where equirectangular semantics matter, not in the type.
struct EqrImage {
    int width = 0;
    int height = 0;
    std::vector<Eigen::Vector3f> pixels;

    EqrImage() = default;
    EqrImage(int w, int h, const Eigen::Vector3f& fill = Eigen::Vector3f::Zero())
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
    Eigen::Vector3f& at(int x, int y) { return pixels[index(x, y)]; }
    const Eigen::Vector3f& at(int x, int y) const { return pixels[index(x, y)]; }
    bool is_eqr() const { return width == 2 * height && height > 0; }
    bool same_size(int w, int h) const { return width == w && height == h; }
};

/// Radial-distance map in world units. Undefined pixels carry quiet NaN; any
/// mask passed alongside is authoritative, the sentinel is a backstop.
struct DepthMap {
    static constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

    int width = 0;
    int height = 0;
    std::vector<double> values;

    DepthMap() = default;
    DepthMap(int w, int h, double fill = kUndefined)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
    double& at(int x, int y) { return values[index(x, y)]; }
    double at(int x, int y) const { return values[index(x, y)]; }
    bool defined(int x, int y) const {
        double v = values[index(x, y)];
        return std::isfinite(v) && v > 0.0;
    }
    bool fully_defined() const {
        for (double v : values)
            if (!(std::isfinite(v) && v > 0.0)) return false;
        return true;
    }
    bool same_size(int w, int h) const { return width == w && height == h; }
};

struct BitMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    BitMask() = default;
    BitMask(int w, int h, bool fill = false)
        : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
    bool get(int x, int y) const { return bits[index(x, y)] != 0; }
    void set(int x, int y, bool v) { bits[index(x, y)] = v ? 1 : 0; }
    bool same_size(int w, int h) const { return width == w && height == h; }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto b : bits) n += (b != 0);
        return n;
    }
    bool any() const {
        for (auto b : bits)
            if (b) return true;
        return false;
    }
    bool all() const {
        for (auto b : bits)
            if (!b) return false;
        return true;
    }
};

inline BitMask mask_not(const BitMask& m) {
    BitMask out(m.width, m.height);
    for (std::size_t i = 0; i < m.bits.size(); ++i) out.bits[i] = m.bits[i] ? 0 : 1;
    return out;
}

inline BitMask mask_and(const BitMask& a, const BitMask& b) {
    if (!a.same_size(b.width, b.height)) throw Error("mask_and: size mismatch");
    BitMask out(a.width, a.height);
    for (std::size_t i = 0; i < a.bits.size(); ++i) out.bits[i] = (a.bits[i] && b.bits[i]) ? 1 : 0;
    return out;
}

inline BitMask mask_or(const BitMask& a, const BitMask& b) {
    if (!a.same_size(b.width, b.height)) throw Error("mask_or: size mismatch");
    BitMask out(a.width, a.height);
    for (std::size_t i = 0; i < a.bits.size(); ++i) out.bits[i] = (a.bits[i] || b.bits[i]) ? 1 : 0;
    return out;
}

}  // namespace panofuse::geom
