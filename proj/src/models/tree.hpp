#pragma once

#include <cstdint>
#include <vector>

#include "wsnids/matrix.hpp"
#include "wsnids/rng.hpp"

namespace wsnids::detail {

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;     // go left when x[feature] <= threshold
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t leaf = -1;     // index into leaf_values when feature < 0
};

// Binary decision tree shared by the classification and boosting builders.
// Classification leaves hold class frequencies, regression leaves one weight.
struct Tree {
    std::vector<TreeNode> nodes;
    std::vector<std::vector<double>> leaf_values;

    const std::vector<double>& values_for(const double* row) const {
        std::int32_t cur = 0;
        while (nodes[static_cast<std::size_t>(cur)].feature >= 0) {
            const TreeNode& nd = nodes[static_cast<std::size_t>(cur)];
            cur = row[nd.feature] <= nd.threshold ? nd.left : nd.right;
        }
        return leaf_values[static_cast<std::size_t>(nodes[static_cast<std::size_t>(cur)].leaf)];
    }
};

// Midpoint of two distinct sorted values, nudged so that `x <= t` separates
// them even when the midpoint rounds onto the upper value.
double split_midpoint(double lo, double hi);

struct GiniTreeOptions {
    int max_depth = 0;  // 0 = unlimited
    int min_samples_split = 2;
    bool feature_subsample = false;
    int n_sub_features = 0;
};

// CART-style greedy tree minimizing weighted Gini impurity. Candidate
// thresholds sit at midpoints of consecutive distinct sorted values; ties
// between equally good splits keep the lowest feature index and threshold.
// `rng` is only consumed when feature_subsample is on.
Tree build_gini_tree(const Matrix& features, const std::vector<int>& labels, int n_classes,
                     std::vector<std::uint32_t> sample_ids, const GiniTreeOptions& options,
                     Rng* rng);

struct GradTreeOptions {
    int max_depth = 6;
    double l2_lambda = 1.0;
};

// Second-order boosting tree: leaf weight -G/(H+lambda), split accepted when
// the regularized gain is positive. Exact greedy enumeration.
Tree build_grad_tree_exact(const Matrix& features, const std::vector<double>& grad,
                           const std::vector<double>& hess,
                           std::vector<std::uint32_t> sample_ids, const GradTreeOptions& options);

// Quantile-binned feature matrix for histogram split finding.
struct BinnedMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint16_t> bins;         // row-major bin ids
    std::vector<std::vector<double>> edges;  // ascending thresholds per feature

    std::uint16_t bin(std::size_t i, std::size_t j) const { return bins[i * cols + j]; }
};

BinnedMatrix bin_features(const Matrix& features, int max_bins);

Tree build_grad_tree_hist(const BinnedMatrix& binned, const std::vector<double>& grad,
                          const std::vector<double>& hess,
                          std::vector<std::uint32_t> sample_ids, const GradTreeOptions& options);

}  // namespace wsnids::detail
