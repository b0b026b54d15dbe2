#include "panofuse/blend/harmonic.hpp"

#include <cmath>
#include <iostream>
#include <mutex>

#include "panofuse/blend/kdtree.hpp"
#include "panofuse/geom/backproject.hpp"
#include "panofuse/raster_ops.hpp"
#include "panofuse/util.hpp"

namespace panofuse::blend {

using geom::BitMask;
using geom::DepthMap;

namespace {

struct PcgResult {
    Eigen::VectorXd x;
    int iterations = 0;
    double residual = 0.0;
};

PcgResult pcg_jacobi(const SparseMatrix& a, const Eigen::VectorXd& b, double tol, int max_iter) {
    const int n = static_cast<int>(b.size());
    PcgResult res;
    res.x = Eigen::VectorXd::Zero(n);
    double bnorm = b.norm();
    if (bnorm == 0.0) return res;

    Eigen::VectorXd inv_diag = a.diagonal();
    for (int i = 0; i < n; ++i) inv_diag[i] = inv_diag[i] > 0.0 ? 1.0 / inv_diag[i] : 1.0;

    Eigen::VectorXd r = b;
    Eigen::VectorXd z = inv_diag.cwiseProduct(r);
    Eigen::VectorXd p = z;
    double rz = r.dot(z);
    for (int it = 1; it <= max_iter; ++it) {
        Eigen::VectorXd ap = a.apply(p);
        double pap = p.dot(ap);
        if (pap <= 0.0) break;  // loss of positive definiteness (numerical)
        double alpha = rz / pap;
        res.x += alpha * p;
        r -= alpha * ap;
        res.iterations = it;
        res.residual = r.norm() / bnorm;
        if (res.residual < tol) return res;
        Eigen::VectorXd z2 = inv_diag.cwiseProduct(r);
        double rz2 = r.dot(z2);
        p = z2 + (rz2 / rz) * p;
        rz = rz2;
        z.swap(z2);
    }
    throw SolverError("harmonic solve did not converge: relative residual " +
                          std::to_string(res.residual) + " after " +
                          std::to_string(res.iterations) + " iterations",
                      res.residual);
}

}  // namespace

std::vector<Eigen::Vector3d> harmonic_displacements(const KnnGraph& graph,
                                                    const std::vector<Eigen::Vector3d>& boundary_disp,
                                                    double tol, int max_iter, SolveStats* stats) {
    const int n = static_cast<int>(graph.size());
    if (boundary_disp.size() != graph.fixed.size())
        throw Error("harmonic_displacements: boundary data misaligned with fixed set");

    std::vector<std::uint8_t> is_fixed(n, 0);
    for (int f : graph.fixed) is_fixed[f] = 1;

    // Solvable unknowns: free nodes whose component reaches the boundary.
    std::vector<int> solve_index(n, -1);
    int nf = 0;
    for (int i = 0; i < n; ++i)
        if (!is_fixed[i] && !graph.disconnected[i]) solve_index[i] = nf++;

    std::vector<Eigen::Vector3d> u(n, Eigen::Vector3d::Zero());
    for (std::size_t i = 0; i < graph.fixed.size(); ++i) u[graph.fixed[i]] = boundary_disp[i];
    if (nf == 0) {
        if (stats) *stats = {};
        return u;
    }

    // Reduced system L_ff x = -L_fb u_b, assembled per free node.
    SparseMatrix a(nf, nf);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nf, 3);
    for (const auto& e : graph.edges) {
        int si = solve_index[e.i];
        int sj = solve_index[e.j];
        if (si >= 0) a.add(si, si, e.w);
        if (sj >= 0) a.add(sj, sj, e.w);
        if (si >= 0 && sj >= 0) {
            a.add(si, sj, -e.w);
            a.add(sj, si, -e.w);
        } else if (si >= 0 && is_fixed[e.j]) {
            rhs.row(si) += e.w * u[e.j].transpose();
        } else if (sj >= 0 && is_fixed[e.i]) {
            rhs.row(sj) += e.w * u[e.i].transpose();
        }
    }
    a.compress();

    if (max_iter <= 0) max_iter = 10 * n;

    SolveStats local;
    std::exception_ptr solve_error;
    std::mutex mutex;
    parallel_for(3, [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
            try {
                PcgResult res = pcg_jacobi(a, rhs.col(static_cast<int>(c)), tol, max_iter);
                std::lock_guard<std::mutex> lock(mutex);
                local.iterations = std::max(local.iterations, res.iterations);
                local.residual = std::max(local.residual, res.residual);
                for (int i = 0; i < static_cast<int>(graph.size()); ++i)
                    if (solve_index[i] >= 0) u[i][static_cast<int>(c)] = res.x[solve_index[i]];
            } catch (...) {
                std::lock_guard<std::mutex> lock(mutex);
                if (!solve_error) solve_error = std::current_exception();
            }
        }
    }, 3);
    if (solve_error) std::rethrow_exception(solve_error);
    if (stats) *stats = local;
    return u;
}

BitMask boundary_mask(const BitMask& m_r) {
    BitMask out(m_r.width, m_r.height);
    if (!m_r.any() || m_r.all()) {
        std::cerr << "boundary_mask: mask is " << (m_r.any() ? "full" : "empty")
                  << "; boundary is empty\n";
        return out;
    }
    BitMask eroded = erode4(m_r);
    for (std::size_t i = 0; i < m_r.bits.size(); ++i)
        out.bits[i] = (m_r.bits[i] && !eroded.bits[i]) ? 1 : 0;
    return out;
}

namespace {

void check_blend_inputs(const DepthMap& d_r, const DepthMap& d_est, const BitMask& m_r) {
    if (!d_est.same_size(d_r.width, d_r.height) || !m_r.same_size(d_r.width, d_r.height))
        throw Error("blend: raster size mismatch");
    for (int y = 0; y < d_r.height; ++y)
        for (int x = 0; x < d_r.width; ++x)
            if (m_r.get(x, y) && !d_r.defined(x, y))
                throw Error("blend: rendered depth undefined inside its mask");
    if (!d_est.fully_defined()) throw Error("blend: estimated depth must be fully defined");
}

}  // namespace

DepthMap harmonic_blend_depth(const DepthMap& d_r, const DepthMap& d_est, const BitMask& m_r,
                              const geom::Pose& pose, const BlendParams& params,
                              BlendDiagnostics* diag) {
    check_blend_inputs(d_r, d_est, m_r);
    if (diag) *diag = {};

    const BitMask unknown = mask_not(m_r);
    if (!unknown.any()) return d_r;   // nothing to synthesize
    if (!m_r.any()) return d_est;     // nothing trusted to anchor to

    const BitMask boundary = boundary_mask(m_r);
    if (!boundary.any()) return naive_blend(d_r, d_est, m_r);

    geom::LiftedPoints deformable = geom::lift_depth(d_est, pose, &unknown);
    geom::LiftedPoints source_boundary = geom::lift_depth(d_est, pose, &boundary);
    geom::LiftedPoints target_boundary = geom::lift_depth(d_r, pose, &boundary);

    // Optional uniform subsampling of the deformable set.
    const std::size_t total = deformable.positions.size();
    std::size_t stride = 1;
    if (params.node_cap > 0 && total > params.node_cap)
        stride = (total + params.node_cap - 1) / params.node_cap;
    std::vector<std::size_t> kept;
    kept.reserve(total / stride + 1);
    for (std::size_t i = 0; i < total; i += stride) kept.push_back(i);

    std::vector<Eigen::Vector3d> nodes;
    nodes.reserve(kept.size() + source_boundary.positions.size());
    for (std::size_t i : kept) nodes.push_back(deformable.positions[i]);
    std::vector<int> fixed;
    fixed.reserve(source_boundary.positions.size());
    std::vector<Eigen::Vector3d> boundary_disp;
    boundary_disp.reserve(source_boundary.positions.size());
    for (std::size_t b = 0; b < source_boundary.positions.size(); ++b) {
        fixed.push_back(static_cast<int>(nodes.size()));
        nodes.push_back(source_boundary.positions[b]);
        boundary_disp.push_back(target_boundary.positions[b] - source_boundary.positions[b]);
    }

    KnnGraph graph = build_knn_graph(nodes, params.k, fixed);
    SolveStats stats;
    int max_iter = params.max_iter_factor > 0
                       ? params.max_iter_factor * static_cast<int>(graph.size())
                       : 0;
    std::vector<Eigen::Vector3d> u =
        harmonic_displacements(graph, boundary_disp, params.tol, max_iter, &stats);

    if (diag) {
        diag->solver_residual = stats.residual;
        diag->solver_iterations = stats.iterations;
        diag->deformable_nodes = kept.size();
        diag->boundary_nodes = fixed.size();
        diag->subsampled = stride > 1;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (graph.disconnected[i]) diag->disconnected_nodes++;
        for (std::size_t b = 0; b < fixed.size(); ++b) {
            double mismatch =
                (nodes[fixed[b]] + u[fixed[b]] - target_boundary.positions[b]).norm();
            diag->max_boundary_mismatch = std::max(diag->max_boundary_mismatch, mismatch);
        }
        if (graph.has_disconnected())
            std::cerr << "harmonic_blend_depth: " << diag->disconnected_nodes
                      << " nodes disconnected from the boundary kept zero displacement\n";
    }

    // Write back per source pixel. Kept nodes use their solved displacement;
    // skipped pixels interpolate displacements from nearby solved nodes.
    DepthMap out(d_r.width, d_r.height);
    for (int y = 0; y < d_r.height; ++y)
        for (int x = 0; x < d_r.width; ++x)
            if (m_r.get(x, y)) out.at(x, y) = d_r.at(x, y);

    std::vector<std::uint8_t> written(total, 0);
    for (std::size_t n = 0; n < kept.size(); ++n) {
        std::size_t i = kept[n];
        Eigen::Vector3d deformed = deformable.positions[i] + u[n];
        const auto& px = deformable.pixels[i];
        out.at(px.x(), px.y()) = (deformed - pose.translation).norm();
        written[i] = 1;
    }

    if (stride > 1) {
        KdTree3 tree(nodes);
        const int kq = std::min<int>(params.k, static_cast<int>(nodes.size()));
        parallel_for(total, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                if (written[i]) continue;
                const Eigen::Vector3d& p = deformable.positions[i];
                std::vector<int> nn = tree.knn(p, kq);
                Eigen::Vector3d disp = Eigen::Vector3d::Zero();
                double wsum = 0.0;
                for (int j : nn) {
                    double d2 = (nodes[j] - p).squaredNorm();
                    double w = 1.0 / std::max(d2, 1e-18);
                    disp += w * u[j];
                    wsum += w;
                }
                if (wsum > 0.0) disp /= wsum;
                const auto& px = deformable.pixels[i];
                out.at(px.x(), px.y()) = (p + disp - pose.translation).norm();
            }
        });
    }
    return out;
}

DepthMap naive_blend(const DepthMap& d_r, const DepthMap& d_est, const BitMask& m_r) {
    check_blend_inputs(d_r, d_est, m_r);
    DepthMap out(d_r.width, d_r.height);
    for (int y = 0; y < d_r.height; ++y)
        for (int x = 0; x < d_r.width; ++x)
            out.at(x, y) = m_r.get(x, y) ? d_r.at(x, y) : d_est.at(x, y);
    return out;
}

DepthMap offset_interpolation_blend(const DepthMap& d_r, const DepthMap& d_est,
                                    const BitMask& m_r) {
    check_blend_inputs(d_r, d_est, m_r);
    const BitMask boundary = boundary_mask(m_r);
    if (!boundary.any()) return naive_blend(d_r, d_est, m_r);

    struct Sample {
        int x, y;
        double offset;
    };
    std::vector<Sample> samples;
    for (int y = 0; y < m_r.height; ++y)
        for (int x = 0; x < m_r.width; ++x)
            if (boundary.get(x, y)) samples.push_back({x, y, d_r.at(x, y) - d_est.at(x, y)});

    DepthMap out(d_r.width, d_r.height);
    const int w = d_r.width;
    parallel_for(static_cast<std::size_t>(d_r.height), [&](std::size_t begin, std::size_t end) {
        for (std::size_t yy = begin; yy < end; ++yy) {
            int y = static_cast<int>(yy);
            for (int x = 0; x < w; ++x) {
                if (m_r.get(x, y)) {
                    out.at(x, y) = d_r.at(x, y);
                    continue;
                }
                double acc = 0.0, wsum = 0.0;
                for (const auto& s : samples) {
                    int dx = std::abs(s.x - x);
                    dx = std::min(dx, w - dx);  // azimuthal wrap
                    double d2 = static_cast<double>(dx) * dx +
                                static_cast<double>(s.y - y) * (s.y - y);
                    double wgt = 1.0 / d2;
                    acc += wgt * s.offset;
                    wsum += wgt;
                }
                out.at(x, y) = d_est.at(x, y) + acc / wsum;
            }
        }
    });
    return out;
}

}  // namespace panofuse::blend
