#include "wsnids/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wsnids/errors.hpp"
#include "wsnids/parallel.hpp"

namespace wsnids {

namespace {

constexpr std::size_t kNoSkip = std::numeric_limits<std::size_t>::max();

// Squared distance with early abandoning: once the partial sum strictly
// exceeds `bound` the point cannot enter the result (ties are never
// abandoned, so the lowest-id rule stays exact).
double squared_distance_bounded(std::span<const double> a, const double* b, double bound) {
    // Accumulation order matches squared_distance exactly so results are
    // bit-identical with and without the early exit.
    double s = 0.0;
    const std::size_t m = a.size();
    std::size_t j = 0;
    for (; j + 4 <= m; j += 4) {
        double d = a[j] - b[j];
        s += d * d;
        d = a[j + 1] - b[j + 1];
        s += d * d;
        d = a[j + 2] - b[j + 2];
        s += d * d;
        d = a[j + 3] - b[j + 3];
        s += d * d;
        if (s > bound) return s;
    }
    for (; j < m; ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

}  // namespace

NeighborIndex::NeighborIndex(const Matrix& features, std::size_t leaf_size)
    : data_(&features), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
    if (features.empty()) throw ConfigError("NeighborIndex: empty matrix");
    perm_.resize(features.rows());
    std::iota(perm_.begin(), perm_.end(), 0u);
    nodes_.reserve(2 * features.rows() / leaf_size_ + 2);
    root_ = build(0, static_cast<std::uint32_t>(perm_.size()));
}

std::uint32_t NeighborIndex::build(std::uint32_t begin, std::uint32_t end) {
    const std::uint32_t idx = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    nodes_[idx].begin = begin;
    nodes_[idx].end = end;
    if (end - begin <= leaf_size_) return idx;

    // Split on the dimension with the widest spread.
    const std::size_t m = data_->cols();
    std::int32_t best_dim = -1;
    double best_spread = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        double lo = data_->at(perm_[begin], j);
        double hi = lo;
        for (std::uint32_t i = begin + 1; i < end; ++i) {
            const double v = data_->at(perm_[i], j);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double spread = hi - lo;
        if (spread > best_spread) {
            best_spread = spread;
            best_dim = static_cast<std::int32_t>(j);
        }
    }
    if (best_dim < 0) return idx;  // all points identical: keep as leaf

    const std::uint32_t mid = begin + (end - begin) / 2;
    const std::size_t dim = static_cast<std::size_t>(best_dim);
    std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                         const double va = data_->at(a, dim);
                         const double vb = data_->at(b, dim);
                         return va < vb || (va == vb && a < b);
                     });

    const double split = data_->at(perm_[mid], dim);
    const std::uint32_t left = build(begin, mid);
    const std::uint32_t right = build(mid, end);
    nodes_[idx].dim = best_dim;
    nodes_[idx].split = split;
    nodes_[idx].left = left;
    nodes_[idx].right = right;
    return idx;
}

void NeighborIndex::search(std::uint32_t node_id, std::span<const double> q, std::size_t k,
                           std::size_t skip, double region_d2, std::vector<double>& offsets,
                           std::vector<std::pair<double, std::uint32_t>>& heap) const {
    const Node& node = nodes_[node_id];
    if (node.dim < 0) {
        for (std::uint32_t i = node.begin; i < node.end; ++i) {
            const std::uint32_t id = perm_[i];
            if (id == skip) continue;
            const double bound = heap.size() < k ? std::numeric_limits<double>::infinity()
                                                 : heap.front().first;
            const double d2 = squared_distance_bounded(q, data_->row_ptr(id), bound);
            if (d2 > bound) continue;
            const std::pair<double, std::uint32_t> cand{d2, id};
            if (heap.size() < k) {
                heap.push_back(cand);
                std::push_heap(heap.begin(), heap.end());
            } else if (cand < heap.front()) {
                std::pop_heap(heap.begin(), heap.end());
                heap.back() = cand;
                std::push_heap(heap.begin(), heap.end());
            }
        }
        return;
    }

    const std::size_t dim = static_cast<std::size_t>(node.dim);
    const double diff = q[dim] - node.split;
    const std::uint32_t near = diff < 0.0 ? node.left : node.right;
    const std::uint32_t far = diff < 0.0 ? node.right : node.left;

    search(near, q, k, skip, region_d2, offsets, heap);

    // Lower bound for the far region: accumulated per-dim offsets, with this
    // split's plane distance folded in. Ties must still be visited (strict >)
    // so the lowest-id rule stays exact.
    const double old_offset = offsets[dim];
    const double new_offset = std::max(old_offset, std::abs(diff));
    const double far_d2 = region_d2 - old_offset * old_offset + new_offset * new_offset;
    if (heap.size() < k || far_d2 <= heap.front().first) {
        offsets[dim] = new_offset;
        search(far, q, k, skip, far_d2, offsets, heap);
        offsets[dim] = old_offset;
    }
}

std::vector<Neighbor> NeighborIndex::k_nearest(std::size_t row, std::size_t k,
                                               bool exclude_self) const {
    if (row >= size()) throw ConfigError("k_nearest: row id out of range");
    const std::size_t candidates = size() - (exclude_self ? 1 : 0);
    if (k == 0 || k > candidates)
        throw ConfigError("k_nearest: k exceeds the number of available candidates");

    std::vector<std::pair<double, std::uint32_t>> heap;
    heap.reserve(k);
    std::vector<double> offsets(data_->cols(), 0.0);
    search(root_, data_->row(row), k, exclude_self ? row : kNoSkip, 0.0, offsets, heap);

    std::sort(heap.begin(), heap.end());
    std::vector<Neighbor> out;
    out.reserve(heap.size());
    for (const auto& [d2, id] : heap) out.push_back({id, std::sqrt(d2)});
    return out;
}

std::vector<Neighbor> NeighborIndex::k_nearest(std::span<const double> point,
                                               std::size_t k) const {
    if (point.size() != data_->cols()) throw ConfigError("k_nearest: point width mismatch");
    if (k == 0 || k > size())
        throw ConfigError("k_nearest: k exceeds the number of available candidates");

    std::vector<std::pair<double, std::uint32_t>> heap;
    heap.reserve(k);
    std::vector<double> offsets(data_->cols(), 0.0);
    search(root_, point, k, kNoSkip, 0.0, offsets, heap);

    std::sort(heap.begin(), heap.end());
    std::vector<Neighbor> out;
    out.reserve(heap.size());
    for (const auto& [d2, id] : heap) out.push_back({id, std::sqrt(d2)});
    return out;
}

std::vector<std::size_t> NeighborIndex::all_nearest(int threads) const {
    if (size() < 2) throw ConfigError("all_nearest: need at least two rows");
    std::vector<std::size_t> nn(size());
    parallel_for(size(), threads,
                 [&](std::size_t i) { nn[i] = k_nearest(i, 1, /*exclude_self=*/true)[0].id; });
    return nn;
}

}  // namespace wsnids
