#include "panofuse/blend/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "panofuse/blend/kdtree.hpp"
#include "panofuse/util.hpp"

namespace panofuse::blend {

KnnGraph build_knn_graph(const std::vector<Eigen::Vector3d>& points, int k,
                         const std::vector<int>& fixed) {
    const int n = static_cast<int>(points.size());
    if (n < 2) throw Error("build_knn_graph: need at least 2 points");
    if (k < 1) throw Error("build_knn_graph: k must be >= 1");
    k = std::min(k, n - 1);

    KdTree3 tree(points);
    std::vector<std::vector<int>> neighbors(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            neighbors[i] = tree.knn(points[i], k, static_cast<int>(i));
    });

    // union symmetrization over normalized pairs
    std::set<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j : neighbors[i]) pairs.insert({std::min(i, j), std::max(i, j)});

    std::vector<double> lengths;
    lengths.reserve(pairs.size());
    for (const auto& [a, b] : pairs) lengths.push_back((points[a] - points[b]).norm());
    double eps = std::max(1e-6 * median(lengths), 1e-12);

    KnnGraph graph;
    graph.node_positions = points;
    graph.fixed = fixed;
    graph.weight_epsilon = eps;
    graph.edges.reserve(pairs.size());
    std::size_t li = 0;
    for (const auto& [a, b] : pairs)
        graph.edges.push_back({a, b, 1.0 / (lengths[li++] + eps)});

    // flag free components that never reach a fixed node (BFS from fixed set)
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : graph.edges) {
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
    }
    std::vector<std::uint8_t> reached(n, 0);
    std::vector<int> queue;
    for (int f : fixed) {
        if (f < 0 || f >= n) throw Error("build_knn_graph: fixed index out of range");
        if (!reached[f]) {
            reached[f] = 1;
            queue.push_back(f);
        }
    }
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        for (int u : adj[v]) {
            if (!reached[u]) {
                reached[u] = 1;
                queue.push_back(u);
            }
        }
    }
    graph.disconnected.assign(n, 0);
    if (!fixed.empty())
        for (int i = 0; i < n; ++i) graph.disconnected[i] = reached[i] ? 0 : 1;
    return graph;
}

void SparseMatrix::add(int row, int col, double value) {
    if (row < 0 || row >= rows_ || col < 0 || col >= cols_)
        throw Error("SparseMatrix::add: index out of range");
    triples_.push_back({{row, col}, value});
    compressed_ = false;
}

void SparseMatrix::compress() {
    std::sort(triples_.begin(), triples_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    col_index_.clear();
    values_.clear();
    std::fill(row_start_.begin(), row_start_.end(), 0);
    for (std::size_t t = 0; t < triples_.size();) {
        auto key = triples_[t].first;
        double sum = 0.0;
        while (t < triples_.size() && triples_[t].first == key) sum += triples_[t++].second;
        col_index_.push_back(key.second);
        values_.push_back(sum);
        row_start_[key.first + 1]++;
    }
    for (int r = 0; r < rows_; ++r) row_start_[r + 1] += row_start_[r];
    compressed_ = true;
}

Eigen::VectorXd SparseMatrix::apply(const Eigen::VectorXd& x) const {
    if (!compressed_) throw Error("SparseMatrix::apply before compress");
    if (x.size() != cols_) throw Error("SparseMatrix::apply: size mismatch");
    Eigen::VectorXd y = Eigen::VectorXd::Zero(rows_);
    for (int r = 0; r < rows_; ++r) {
        double acc = 0.0;
        for (int t = row_start_[r]; t < row_start_[r + 1]; ++t)
            acc += values_[t] * x[col_index_[t]];
        y[r] = acc;
    }
    return y;
}

Eigen::VectorXd SparseMatrix::diagonal() const {
    if (!compressed_) throw Error("SparseMatrix::diagonal before compress");
    Eigen::VectorXd d = Eigen::VectorXd::Zero(rows_);
    for (int r = 0; r < rows_; ++r)
        for (int t = row_start_[r]; t < row_start_[r + 1]; ++t)
            if (col_index_[t] == r) d[r] += values_[t];
    return d;
}

SparseMatrix graph_laplacian(const KnnGraph& graph) {
    const int n = static_cast<int>(graph.size());
    SparseMatrix lap(n, n);
    for (const auto& e : graph.edges) {
        lap.add(e.i, e.i, e.w);
        lap.add(e.j, e.j, e.w);
        lap.add(e.i, e.j, -e.w);
        lap.add(e.j, e.i, -e.w);
    }
    lap.compress();
    return lap;
}

}  // namespace panofuse::blend
