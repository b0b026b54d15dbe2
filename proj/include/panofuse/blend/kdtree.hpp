#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace panofuse::blend {

/// Static 3-d tree over a point set; supports k-nearest-neighbor queries.
/// Ties on distance break toward the smaller point index so queries are
/// deterministic for coincident points.
class KdTree3 {
public:
    explicit KdTree3(const std::vector<Eigen::Vector3d>& points);

    /// Indices of the k nearest points to `query`, nearest first. `skip` is
    /// excluded (pass a negative value to keep all points).
    std::vector<int> knn(const Eigen::Vector3d& query, int k, int skip = -1) const;

    std::size_t size() const { return points_.size(); }

private:
    struct Node {
        int point = -1;      // index into points_
        int left = -1;
        int right = -1;
        std::uint8_t axis = 0;
    };

    int build(std::vector<int>& idx, int begin, int end, int depth);

    const std::vector<Eigen::Vector3d>& points_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

}  // namespace panofuse::blend
