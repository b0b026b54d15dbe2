#include "panofuse/render/render.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>

#include "panofuse/geom/eqr.hpp"
#include "panofuse/raster_ops.hpp"
#include "panofuse/util.hpp"

namespace panofuse::render {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kEmpty = ~0ull;

// Packed z-buffer cell: high 32 bits are the IEEE bits of the (positive)
// float distance, low 32 bits the point index. Lower key == nearer point,
// ties fall to the smaller index, i.e. first point in input order.
inline std::uint64_t pack(float dist, std::uint32_t index) {
    return (static_cast<std::uint64_t>(std::bit_cast<std::uint32_t>(dist)) << 32) | index;
}

struct ZBuffer {
    int width = 0, height = 0;
    std::unique_ptr<std::atomic<std::uint64_t>[]> cells;

    ZBuffer(int w, int h) : width(w), height(h) {
        cells = std::make_unique<std::atomic<std::uint64_t>[]>(static_cast<std::size_t>(w) * h);
        for (std::size_t i = 0; i < static_cast<std::size_t>(w) * h; ++i)
            cells[i].store(kEmpty, std::memory_order_relaxed);
    }

    void offer(int x, int y, std::uint64_t key) {
        auto& cell = cells[static_cast<std::size_t>(y) * width + x];
        std::uint64_t cur = cell.load(std::memory_order_relaxed);
        while (key < cur &&
               !cell.compare_exchange_weak(cur, key, std::memory_order_relaxed)) {
        }
    }
};

double auto_footprint(const std::vector<double>& distances, double pixel_angle) {
    std::vector<double> positive;
    positive.reserve(distances.size());
    for (double d : distances)
        if (d > 0.0) positive.push_back(d);
    if (positive.empty()) return pixel_angle;  // arbitrary, nothing to splat
    return 2.0 * median(std::move(positive)) * pixel_angle;
}

RenderOutput finalize(const ZBuffer& zbuf, const geom::PointCloud& cloud,
                      const std::vector<double>& distances, std::size_t skipped) {
    RenderOutput out;
    out.image = geom::EqrImage(zbuf.width, zbuf.height);
    out.depth = geom::DepthMap(zbuf.width, zbuf.height);
    out.visibility = geom::BitMask(zbuf.width, zbuf.height);
    out.skipped_points = skipped;
    for (int y = 0; y < zbuf.height; ++y) {
        for (int x = 0; x < zbuf.width; ++x) {
            std::uint64_t key = zbuf.cells[static_cast<std::size_t>(y) * zbuf.width + x].load(
                std::memory_order_relaxed);
            if (key == kEmpty) continue;
            std::uint32_t idx = static_cast<std::uint32_t>(key & 0xffffffffull);
            out.image.at(x, y) = cloud.colors[idx];
            out.depth.at(x, y) = distances[idx];  // exact double distance of the winner
            out.visibility.set(x, y, true);
        }
    }
    return out;
}

}  // namespace

RenderOutput render_eqr(const geom::PointCloud& cloud, const geom::Pose& pose, int width,
                        int height, const SplatParams& splat) {
    if (width != 2 * height || height <= 0) throw Error("render_eqr: width must equal 2*height");
    if (cloud.size() > 0xffffffffull) throw Error("render_eqr: cloud too large");

    const double pixel_angle = 2.0 * kPi / width;
    const Eigen::Matrix3d r_inv = pose.rotation.transpose();

    // Camera-frame distances first; needed for the automatic footprint.
    std::vector<double> distances(cloud.size(), 0.0);
    std::atomic<std::size_t> skipped{0};
    parallel_for(cloud.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            double d = (cloud.positions[i] - pose.translation).norm();
            if (d < 1e-9) {
                distances[i] = 0.0;
                skipped.fetch_add(1, std::memory_order_relaxed);
            } else {
                distances[i] = d;
            }
        }
    });

    double footprint = splat.footprint > 0.0 ? splat.footprint
                                             : auto_footprint(distances, pixel_angle);

    ZBuffer zbuf(width, height);
    parallel_for(cloud.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            double d = distances[i];
            if (d <= 0.0) continue;
            Eigen::Vector3d cam = r_inv * (cloud.positions[i] - pose.translation);
            Eigen::Vector2d px = geom::direction_to_pixel(cam, width, height);
            int cx = static_cast<int>(std::lround(px.x()));
            int cy = static_cast<int>(std::lround(px.y()));
            cy = std::clamp(cy, 0, height - 1);
            double r = std::clamp(footprint / (d * pixel_angle), splat.min_radius_px,
                                  splat.max_radius_px);
            std::uint64_t key = pack(static_cast<float>(d), static_cast<std::uint32_t>(i));

            if (r <= 1.0) {  // single-pixel splat covers exactly its own pixel
                zbuf.offer(wrap_x(cx, width), cy, key);
                continue;
            }

            // Azimuthal stretch near the poles: a splat spans more columns
            // where rows are compressed.
            double phi = kPi / 2.0 - (cy + 0.5) / height * kPi;
            double cphi = std::max(std::abs(std::cos(phi)), 1e-3);
            int half_y = static_cast<int>(std::ceil(r)) - 1;
            for (int dy = -half_y; dy <= half_y; ++dy) {
                int yy = cy + dy;
                if (yy < 0 || yy >= height) continue;
                double span = r * r - static_cast<double>(dy) * dy;
                if (span <= 0.0) continue;
                int half_x = static_cast<int>(std::ceil(std::sqrt(span) / cphi)) - 1;
                half_x = std::min(half_x, width / 2);
                for (int dx = -half_x; dx <= half_x; ++dx) {
                    double ex = dx * cphi;
                    if (ex * ex + static_cast<double>(dy) * dy >= r * r) continue;
                    zbuf.offer(wrap_x(cx + dx, width), yy, key);
                }
            }
        }
    });

    return finalize(zbuf, cloud, distances, skipped.load());
}

RenderOutput render_perspective(const geom::PointCloud& cloud, const geom::Pose& pose,
                                const PerspectiveIntrinsics& intrinsics,
                                const SplatParams& splat) {
    if (intrinsics.width <= 0 || intrinsics.height <= 0)
        throw Error("render_perspective: invalid image size");
    if (!(intrinsics.fov_x > 0.0 && intrinsics.fov_x < kPi))
        throw Error("render_perspective: fov_x out of range");
    if (cloud.size() > 0xffffffffull) throw Error("render_perspective: cloud too large");

    const int width = intrinsics.width, height = intrinsics.height;
    const double fx = (width / 2.0) / std::tan(intrinsics.fov_x / 2.0);
    const double cx0 = width / 2.0 - 0.5;
    const double cy0 = height / 2.0 - 0.5;
    const double pixel_angle = intrinsics.fov_x / width;
    const Eigen::Matrix3d r_inv = pose.rotation.transpose();

    // Planar depth; points behind the camera get 0 and are culled.
    std::vector<double> depths(cloud.size(), 0.0);
    std::vector<Eigen::Vector2d> proj(cloud.size());
    std::atomic<std::size_t> skipped{0};
    parallel_for(cloud.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            Eigen::Vector3d cam = r_inv * (cloud.positions[i] - pose.translation);
            if (cam.norm() < 1e-9) {
                skipped.fetch_add(1, std::memory_order_relaxed);
                continue;
            }
            if (cam.z() <= 1e-9) continue;
            depths[i] = cam.z();
            // +X right, +Y up camera frame; image y grows downward.
            proj[i] = {fx * cam.x() / cam.z() + cx0, -fx * cam.y() / cam.z() + cy0};
        }
    });

    double footprint = splat.footprint > 0.0 ? splat.footprint
                                             : auto_footprint(depths, pixel_angle);

    ZBuffer zbuf(width, height);
    parallel_for(cloud.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            double z = depths[i];
            if (z <= 0.0) continue;
            double r = std::clamp(footprint / (z * pixel_angle), splat.min_radius_px,
                                  splat.max_radius_px);
            int cx = static_cast<int>(std::lround(proj[i].x()));
            int cy = static_cast<int>(std::lround(proj[i].y()));
            int half = static_cast<int>(std::ceil(r)) - 1;
            if (cx + half < 0 || cx - half >= width || cy + half < 0 || cy - half >= height)
                continue;
            std::uint64_t key = pack(static_cast<float>(z), static_cast<std::uint32_t>(i));
            for (int dy = -half; dy <= half; ++dy) {
                int yy = cy + dy;
                if (yy < 0 || yy >= height) continue;
                for (int dx = -half; dx <= half; ++dx) {
                    int xx = cx + dx;
                    if (xx < 0 || xx >= width) continue;
                    if (static_cast<double>(dx) * dx + static_cast<double>(dy) * dy >= r * r)
                        continue;
                    zbuf.offer(xx, yy, key);
                }
            }
        }
    });

    return finalize(zbuf, cloud, depths, skipped.load());
}

}  // namespace panofuse::render
