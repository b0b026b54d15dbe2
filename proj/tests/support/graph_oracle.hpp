#pragma once

// Test-only dense reference for harmonic displacement solves. Independent of
// the library's sparse path: assembles the full Laplacian densely and uses
// Eigen's LDLT on the free block.

#include <Eigen/Dense>
#include <vector>

#include "panofuse/blend/graph.hpp"

namespace panofuse_test {

inline Eigen::MatrixXd dense_laplacian(const panofuse::blend::KnnGraph& graph) {
    const int n = static_cast<int>(graph.size());
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : graph.edges) {
        lap(e.i, e.i) += e.w;
        lap(e.j, e.j) += e.w;
        lap(e.i, e.j) -= e.w;
        lap(e.j, e.i) -= e.w;
    }
    return lap;
}

/// Dense direct solve of the constrained minimization; disconnected free
/// nodes receive zero displacement like the library solver.
inline std::vector<Eigen::Vector3d> dense_harmonic(
    const panofuse::blend::KnnGraph& graph, const std::vector<Eigen::Vector3d>& boundary_disp) {
    const int n = static_cast<int>(graph.size());
    Eigen::MatrixXd lap = dense_laplacian(graph);

    std::vector<std::uint8_t> is_fixed(n, 0);
    for (int f : graph.fixed) is_fixed[f] = 1;
    std::vector<int> free_index(n, -1);
    std::vector<int> free_nodes;
    for (int i = 0; i < n; ++i)
        if (!is_fixed[i] && !graph.disconnected[i]) {
            free_index[i] = static_cast<int>(free_nodes.size());
            free_nodes.push_back(i);
        }

    std::vector<Eigen::Vector3d> u(n, Eigen::Vector3d::Zero());
    for (std::size_t b = 0; b < graph.fixed.size(); ++b) u[graph.fixed[b]] = boundary_disp[b];
    if (free_nodes.empty()) return u;

    const int nf = static_cast<int>(free_nodes.size());
    Eigen::MatrixXd a(nf, nf);
    for (int r = 0; r < nf; ++r)
        for (int c = 0; c < nf; ++c) a(r, c) = lap(free_nodes[r], free_nodes[c]);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nf, 3);
    for (int r = 0; r < nf; ++r)
        for (int j = 0; j < n; ++j)
            if (is_fixed[j] && lap(free_nodes[r], j) != 0.0)
                rhs.row(r) -= lap(free_nodes[r], j) * u[j].transpose();

    Eigen::MatrixXd x = a.ldlt().solve(rhs);
    for (int r = 0; r < nf; ++r) u[free_nodes[r]] = x.row(r).transpose();
    return u;
}

inline double dirichlet_energy(const panofuse::blend::KnnGraph& graph,
                               const std::vector<Eigen::Vector3d>& u) {
    double e = 0.0;
    for (const auto& edge : graph.edges) e += edge.w * (u[edge.i] - u[edge.j]).squaredNorm();
    return e;
}

}  // namespace panofuse_test
