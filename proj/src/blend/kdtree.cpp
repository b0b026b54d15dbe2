#include "panofuse/blend/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <utility>

namespace panofuse::blend {

KdTree3::KdTree3(const std::vector<Eigen::Vector3d>& points) : points_(points) {
    std::vector<int> idx(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) idx[i] = static_cast<int>(i);
    nodes_.reserve(points.size());
    root_ = build(idx, 0, static_cast<int>(points.size()), 0);
}

int KdTree3::build(std::vector<int>& idx, int begin, int end, int depth) {
    if (begin >= end) return -1;
    int axis = depth % 3;
    int mid = (begin + end) / 2;
    std::nth_element(idx.begin() + begin, idx.begin() + mid, idx.begin() + end,
                     [&](int a, int b) {
                         double va = points_[a][axis], vb = points_[b][axis];
                         return va < vb || (va == vb && a < b);
                     });
    Node node;
    node.point = idx[mid];
    node.axis = static_cast<std::uint8_t>(axis);
    int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    int left = build(idx, begin, mid, depth + 1);
    int right = build(idx, mid + 1, end, depth + 1);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
}

std::vector<int> KdTree3::knn(const Eigen::Vector3d& query, int k, int skip) const {
    // max-heap of (dist2, point index); worst candidate on top.
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry> heap;

    auto consider = [&](int point) {
        if (point == skip) return;
        double d2 = (points_[point] - query).squaredNorm();
        Entry e{d2, point};
        if (static_cast<int>(heap.size()) < k) {
            heap.push(e);
        } else if (e < heap.top()) {
            heap.pop();
            heap.push(e);
        }
    };

    // iterative traversal with explicit stack
    std::vector<int> stack;
    stack.reserve(64);
    if (root_ >= 0) stack.push_back(root_);
    while (!stack.empty()) {
        int ni = stack.back();
        stack.pop_back();
        const Node& node = nodes_[ni];
        consider(node.point);
        double delta = query[node.axis] - points_[node.point][node.axis];
        int near = delta < 0.0 ? node.left : node.right;
        int far = delta < 0.0 ? node.right : node.left;
        bool heap_full = static_cast<int>(heap.size()) >= k;
        double worst = heap_full ? heap.top().first : std::numeric_limits<double>::infinity();
        if (far >= 0 && delta * delta <= worst) stack.push_back(far);
        if (near >= 0) stack.push_back(near);
    }

    std::vector<int> out(heap.size());
    for (std::size_t i = heap.size(); i-- > 0;) {
        out[i] = heap.top().second;
        heap.pop();
    }
    return out;
}

}  // namespace panofuse::blend
