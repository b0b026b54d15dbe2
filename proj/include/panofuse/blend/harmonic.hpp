#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <vector>

#include "panofuse/blend/graph.hpp"
#include "panofuse/geom/pose.hpp"
#include "panofuse/geom/raster.hpp"

namespace panofuse::blend {

class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual)
        : Error(what), final_residual(residual) {}
    double final_residual = 0.0;
};

struct SolveStats {
    int iterations = 0;
    double residual = 0.0;  // worst relative residual across coordinates
};

/// Minimizes the graph Dirichlet energy tr(U^T L U) subject to exact values
/// on fixed nodes. boundary_disp is aligned with graph.fixed and is assigned
/// verbatim (never solved). Free nodes in components that do not reach the
/// boundary receive zero displacement. Solves the reduced SPD system with
/// Jacobi-preconditioned conjugate gradient, one solve per coordinate;
/// throws SolverError when the relative residual fails to reach tol within
/// max_iter (pass max_iter <= 0 for 10 * n).
std::vector<Eigen::Vector3d> harmonic_displacements(const KnnGraph& graph,
                                                    const std::vector<Eigen::Vector3d>& boundary_disp,
                                                    double tol, int max_iter,
                                                    SolveStats* stats = nullptr);

/// One-pixel-erosion boundary of the trusted mask: every returned pixel is in
/// m_r and 4-adjacent (with azimuthal wrap) to its complement. Full or empty
/// input yields an empty boundary.
geom::BitMask boundary_mask(const geom::BitMask& m_r);

struct BlendParams {
    int k = 8;
    double tol = 1e-8;
    int max_iter_factor = 10;
    std::size_t node_cap = 1'000'000;
};

struct BlendDiagnostics {
    double max_boundary_mismatch = 0.0;  // ||deformed boundary - target||, post-assignment
    double solver_residual = 0.0;
    int solver_iterations = 0;
    std::size_t deformable_nodes = 0;
    std::size_t boundary_nodes = 0;
    std::size_t disconnected_nodes = 0;
    bool subsampled = false;
};

/// Deforms the geometry of d_est so it exactly meets d_r along the boundary
/// of m_r and writes the blended depth per source pixel. On m_r the output is
/// bit-identical to d_r; elsewhere it is the radial distance of the deformed
/// point. Defined everywhere on exit.
geom::DepthMap harmonic_blend_depth(const geom::DepthMap& d_r, const geom::DepthMap& d_est,
                                    const geom::BitMask& m_r, const geom::Pose& pose,
                                    const BlendParams& params = {},
                                    BlendDiagnostics* diag = nullptr);

/// Pointwise selection baseline: d_r where the mask is set, d_est elsewhere.
geom::DepthMap naive_blend(const geom::DepthMap& d_r, const geom::DepthMap& d_est,
                           const geom::BitMask& m_r);

/// Ablation baseline: the boundary offset d_r - d_est is extended into the
/// unknown region by inverse-distance-weighted interpolation (power 2, all
/// boundary samples, azimuthal wrap) and added to d_est there.
geom::DepthMap offset_interpolation_blend(const geom::DepthMap& d_r, const geom::DepthMap& d_est,
                                          const geom::BitMask& m_r);

}  // namespace panofuse::blend
