#pragma once

#include <Eigen/Core>
#include <vector>

namespace panofuse::blend {

/// Weighted neighbor graph over deformable points. Edges are undirected and
/// stored once with i < j; adjacency is logically symmetric. `fixed` lists
/// the Dirichlet (boundary) nodes. Free nodes whose component contains no
/// fixed node are flagged in `disconnected`.
struct KnnGraph {
    struct Edge {
        int i = 0;
        int j = 0;
        double w = 0.0;
    };

    std::vector<Eigen::Vector3d> node_positions;
    std::vector<Edge> edges;
    std::vector<int> fixed;
    std::vector<std::uint8_t> disconnected;  // per node
    double weight_epsilon = 0.0;             // the distance guard used for weights

    std::size_t size() const { return node_positions.size(); }
    bool has_disconnected() const {
        for (auto d : disconnected)
            if (d) return true;
        return false;
    }
};

/// Union-symmetrized k-nearest-neighbor graph with weights
/// w_ij = 1 / (dist + eps), eps = 1e-6 * median candidate edge length
/// (floored away from zero so coincident points stay finite).
KnnGraph build_knn_graph(const std::vector<Eigen::Vector3d>& points, int k,
                         const std::vector<int>& fixed);

/// Sparse symmetric matrix assembled from (row, col, value) triples, CSR
/// compressed for products. Laplacian instances have zero row sums and
/// nonpositive off-diagonals.
class SparseMatrix {
public:
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_start_(rows + 1, 0) {}

    void add(int row, int col, double value);
    void compress();  // sums duplicates, builds CSR; required before apply()

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    Eigen::VectorXd diagonal() const;

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t nonzeros() const { return values_.size(); }

private:
    int rows_ = 0;
    int cols_ = 0;
    bool compressed_ = false;
    std::vector<std::pair<std::pair<int, int>, double>> triples_;
    std::vector<int> row_start_;
    std::vector<int> col_index_;
    std::vector<double> values_;
};

/// Unnormalized graph Laplacian L = D - W over all nodes.
SparseMatrix graph_laplacian(const KnnGraph& graph);

}  // namespace panofuse::blend
