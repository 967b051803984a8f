#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wsnids/matrix.hpp"

namespace wsnids {

struct Neighbor {
    std::size_t id = 0;
    double distance = 0.0;
    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Exact Euclidean nearest-neighbor index backed by a kd-tree. Results are
// sorted ascending by distance with ties broken by ascending row id, which
// makes every query deterministic. The index only references the matrix it
// was built over; the matrix must outlive it. Queries are const and safe to
// run concurrently.
class NeighborIndex {
public:
    explicit NeighborIndex(const Matrix& features, std::size_t leaf_size = 32);

    std::size_t size() const { return data_->rows(); }

    // Neighbors of an indexed row; exclude_self omits the row itself.
    std::vector<Neighbor> k_nearest(std::size_t row, std::size_t k, bool exclude_self) const;

    // Neighbors of an external point (nothing is excluded).
    std::vector<Neighbor> k_nearest(std::span<const double> point, std::size_t k) const;

    // 1-NN id of every row under exclude_self, computed in parallel. The
    // output does not depend on the thread count.
    std::vector<std::size_t> all_nearest(int threads = 1) const;

private:
    struct Node {
        double split = 0.0;
        std::int32_t dim = -1;  // -1 marks a leaf over perm_[begin, end)
        std::uint32_t left = 0;
        std::uint32_t right = 0;
        std::uint32_t begin = 0;
        std::uint32_t end = 0;
    };

    std::uint32_t build(std::uint32_t begin, std::uint32_t end);
    void search(std::uint32_t node, std::span<const double> q, std::size_t k, std::size_t skip,
                double region_d2, std::vector<double>& offsets,
                std::vector<std::pair<double, std::uint32_t>>& heap) const;

    const Matrix* data_;
    std::size_t leaf_size_;
    std::vector<std::uint32_t> perm_;
    std::vector<Node> nodes_;
    std::uint32_t root_ = 0;
};

}  // namespace wsnids
