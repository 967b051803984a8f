#include "models/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wsnids/errors.hpp"

namespace wsnids::detail {

double split_midpoint(double lo, double hi) {
    double t = lo + (hi - lo) * 0.5;
    if (t >= hi) t = lo;
    return t;
}

namespace {

// Feature candidates for one split: either every feature ascending, or a
// random subset (sorted so tie-breaks stay by feature index).
std::vector<std::uint32_t> candidate_features(std::size_t n_features,
                                              const GiniTreeOptions& options, Rng* rng) {
    std::vector<std::uint32_t> feats(n_features);
    std::iota(feats.begin(), feats.end(), 0u);
    if (!options.feature_subsample || rng == nullptr ||
        options.n_sub_features >= static_cast<int>(n_features)) {
        return feats;
    }
    const std::size_t take = static_cast<std::size_t>(std::max(options.n_sub_features, 1));
    for (std::size_t i = 0; i < take; ++i) {
        const std::size_t j = i + rng->below(n_features - i);
        std::swap(feats[i], feats[j]);
    }
    feats.resize(take);
    std::sort(feats.begin(), feats.end());
    return feats;
}

struct GiniBuilder {
    const Matrix& x;
    const std::vector<int>& y;
    int n_classes;
    const GiniTreeOptions& options;
    Rng* rng;
    Tree tree;

    struct ValueClass {
        double value;
        std::uint32_t cls;
    };
    std::vector<ValueClass> scratch;

    struct Pending {
        std::vector<std::uint32_t> ids;
        int depth = 0;
        bool as_left = false;  // which child pointer of the parent to fill
        std::int32_t parent = -1;
    };

    void make_leaf(std::int32_t node_id, const std::vector<std::int64_t>& counts,
                   std::int64_t n) {
        std::vector<double> freq(counts.size());
        for (std::size_t c = 0; c < counts.size(); ++c)
            freq[c] = static_cast<double>(counts[c]) / static_cast<double>(n);
        tree.nodes[static_cast<std::size_t>(node_id)].leaf =
            static_cast<std::int32_t>(tree.leaf_values.size());
        tree.leaf_values.push_back(std::move(freq));
    }

    // Explicit work stack: unlimited-depth trees must not be bounded by the
    // call stack.
    void build(std::vector<std::uint32_t>&& root_ids) {
        std::vector<Pending> stack;
        stack.push_back({std::move(root_ids), 0, false, -1});

        std::vector<std::int64_t> counts(static_cast<std::size_t>(n_classes));
        std::vector<std::int64_t> left_counts(static_cast<std::size_t>(n_classes));

        while (!stack.empty()) {
            Pending task = std::move(stack.back());
            stack.pop_back();

            const std::int32_t node_id = static_cast<std::int32_t>(tree.nodes.size());
            tree.nodes.emplace_back();
            if (task.parent >= 0) {
                auto& parent = tree.nodes[static_cast<std::size_t>(task.parent)];
                (task.as_left ? parent.left : parent.right) = node_id;
            }

            std::vector<std::uint32_t>& ids = task.ids;
            const std::int64_t n = static_cast<std::int64_t>(ids.size());
            std::fill(counts.begin(), counts.end(), 0);
            for (const std::uint32_t id : ids) ++counts[static_cast<std::size_t>(y[id])];

            const bool pure = std::count_if(counts.begin(), counts.end(),
                                            [](std::int64_t c) { return c > 0; }) <= 1;
            const bool depth_reached = options.max_depth > 0 && task.depth >= options.max_depth;
            if (pure || depth_reached || n < options.min_samples_split) {
                make_leaf(node_id, counts, n);
                continue;
            }

            // Maximize sum over children of (sum of squared class counts) /
            // size; equivalent to minimizing the weighted Gini impurity.
            std::int64_t parent_sumsq = 0;
            for (const std::int64_t c : counts) parent_sumsq += c * c;
            const double parent_score =
                static_cast<double>(parent_sumsq) / static_cast<double>(n);

            double best_score = parent_score;
            std::int32_t best_feature = -1;
            double best_threshold = 0.0;

            const auto feats = candidate_features(x.cols(), options, rng);
            scratch.resize(ids.size());

            for (const std::uint32_t f : feats) {
                // contiguous (value, class) pairs sort and scan much faster
                // than gathering through the id indirection
                for (std::size_t i = 0; i < ids.size(); ++i)
                    scratch[i] = {x.at(ids[i], f),
                                  static_cast<std::uint32_t>(y[ids[i]])};
                std::sort(scratch.begin(), scratch.end(),
                          [](const ValueClass& a, const ValueClass& b) {
                              return a.value < b.value;
                          });
                if (scratch.front().value == scratch.back().value) continue;

                std::fill(left_counts.begin(), left_counts.end(), 0);
                std::int64_t left_sumsq = 0;
                std::int64_t right_sumsq = parent_sumsq;

                for (std::int64_t i = 1; i < n; ++i) {
                    const auto cls =
                        static_cast<std::size_t>(scratch[static_cast<std::size_t>(i - 1)].cls);
                    left_sumsq += 2 * left_counts[cls] + 1;
                    const std::int64_t right_count = counts[cls] - left_counts[cls];
                    right_sumsq -= 2 * right_count - 1;
                    ++left_counts[cls];

                    const double lo = scratch[static_cast<std::size_t>(i - 1)].value;
                    const double hi = scratch[static_cast<std::size_t>(i)].value;
                    if (lo == hi) continue;

                    const double score =
                        static_cast<double>(left_sumsq) / static_cast<double>(i) +
                        static_cast<double>(right_sumsq) / static_cast<double>(n - i);
                    if (score > best_score) {
                        best_score = score;
                        best_feature = static_cast<std::int32_t>(f);
                        best_threshold = split_midpoint(lo, hi);
                    }
                }
            }

            if (best_feature < 0) {
                make_leaf(node_id, counts, n);
                continue;
            }

            const auto mid =
                std::stable_partition(ids.begin(), ids.end(), [&](std::uint32_t id) {
                    return x.at(id, static_cast<std::size_t>(best_feature)) <= best_threshold;
                });
            std::vector<std::uint32_t> left_ids(ids.begin(), mid);
            std::vector<std::uint32_t> right_ids(mid, ids.end());
            ids.clear();
            ids.shrink_to_fit();

            tree.nodes[static_cast<std::size_t>(node_id)].feature = best_feature;
            tree.nodes[static_cast<std::size_t>(node_id)].threshold = best_threshold;
            // right pushed first so the left child is processed (and
            // numbered) before it, keeping depth-first node order
            stack.push_back({std::move(right_ids), task.depth + 1, false, node_id});
            stack.push_back({std::move(left_ids), task.depth + 1, true, node_id});
        }
    }
};

struct GradBuilder {
    const Matrix* x = nullptr;             // exact mode
    const BinnedMatrix* binned = nullptr;  // histogram mode
    const std::vector<double>& grad;
    const std::vector<double>& hess;
    const GradTreeOptions& options;
    Tree tree;

    struct ValueGradHess {
        double value, g, h;
    };
    std::vector<ValueGradHess> scratch;

    std::int32_t make_leaf(double sum_g, double sum_h) {
        const std::int32_t node_id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.back().leaf = static_cast<std::int32_t>(tree.leaf_values.size());
        tree.leaf_values.push_back({-sum_g / (sum_h + options.l2_lambda)});
        return node_id;
    }

    struct Split {
        double gain = 0.0;
        std::int32_t feature = -1;
        double threshold = 0.0;
        std::int32_t edge = -1;  // histogram mode: index of the chosen edge
    };

    Split find_split_exact(const std::vector<std::uint32_t>& ids, double sum_g, double sum_h) {
        const double lambda = options.l2_lambda;
        const double parent = sum_g * sum_g / (sum_h + lambda);
        Split best;

        scratch.resize(ids.size());
        for (std::size_t f = 0; f < x->cols(); ++f) {
            for (std::size_t i = 0; i < ids.size(); ++i)
                scratch[i] = {x->at(ids[i], f), grad[ids[i]], hess[ids[i]]};
            std::sort(scratch.begin(), scratch.end(),
                      [](const ValueGradHess& a, const ValueGradHess& b) {
                          return a.value < b.value;
                      });
            if (scratch.front().value == scratch.back().value) continue;

            double gl = 0.0, hl = 0.0;
            for (std::size_t i = 1; i < scratch.size(); ++i) {
                gl += scratch[i - 1].g;
                hl += scratch[i - 1].h;
                const double lo = scratch[i - 1].value;
                const double hi = scratch[i].value;
                if (lo == hi) continue;

                const double gr = sum_g - gl;
                const double hr = sum_h - hl;
                const double gain =
                    0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - parent);
                if (gain > best.gain) {
                    best.gain = gain;
                    best.feature = static_cast<std::int32_t>(f);
                    best.threshold = split_midpoint(lo, hi);
                }
            }
        }
        return best;
    }

    Split find_split_hist(const std::vector<std::uint32_t>& ids, double sum_g,
                          double sum_h) const {
        const double lambda = options.l2_lambda;
        const double parent = sum_g * sum_g / (sum_h + lambda);
        Split best;

        std::vector<double> bin_g, bin_h;
        std::vector<std::int64_t> bin_n;
        for (std::size_t f = 0; f < binned->cols; ++f) {
            const auto& edges = binned->edges[f];
            if (edges.empty()) continue;
            const std::size_t n_bins = edges.size() + 1;
            bin_g.assign(n_bins, 0.0);
            bin_h.assign(n_bins, 0.0);
            bin_n.assign(n_bins, 0);
            for (const std::uint32_t id : ids) {
                const std::uint16_t b = binned->bin(id, f);
                bin_g[b] += grad[id];
                bin_h[b] += hess[id];
                ++bin_n[b];
            }

            double gl = 0.0, hl = 0.0;
            std::int64_t nl = 0;
            for (std::size_t b = 0; b + 1 < n_bins; ++b) {
                gl += bin_g[b];
                hl += bin_h[b];
                nl += bin_n[b];
                if (nl == 0) continue;
                if (nl == static_cast<std::int64_t>(ids.size())) break;

                const double gr = sum_g - gl;
                const double hr = sum_h - hl;
                const double gain =
                    0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - parent);
                if (gain > best.gain) {
                    best.gain = gain;
                    best.feature = static_cast<std::int32_t>(f);
                    best.threshold = edges[b];
                    best.edge = static_cast<std::int32_t>(b);
                }
            }
        }
        return best;
    }

    std::int32_t build(std::vector<std::uint32_t>& ids, int depth) {
        double sum_g = 0.0, sum_h = 0.0;
        for (const std::uint32_t id : ids) {
            sum_g += grad[id];
            sum_h += hess[id];
        }
        if (ids.size() < 2 || depth >= options.max_depth) return make_leaf(sum_g, sum_h);

        const Split split =
            x != nullptr ? find_split_exact(ids, sum_g, sum_h) : find_split_hist(ids, sum_g, sum_h);
        if (split.feature < 0 || !(split.gain > 0.0)) return make_leaf(sum_g, sum_h);

        const std::size_t f = static_cast<std::size_t>(split.feature);
        const auto mid = std::stable_partition(ids.begin(), ids.end(), [&](std::uint32_t id) {
            if (x != nullptr) return x->at(id, f) <= split.threshold;
            // bin index <= chosen edge is exactly x <= edges[edge]
            return static_cast<std::int32_t>(binned->bin(id, f)) <= split.edge;
        });
        std::vector<std::uint32_t> left_ids(ids.begin(), mid);
        std::vector<std::uint32_t> right_ids(mid, ids.end());
        ids.clear();
        ids.shrink_to_fit();

        const std::int32_t node_id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[static_cast<std::size_t>(node_id)].feature = split.feature;
        tree.nodes[static_cast<std::size_t>(node_id)].threshold = split.threshold;
        const std::int32_t left = build(left_ids, depth + 1);
        const std::int32_t right = build(right_ids, depth + 1);
        tree.nodes[static_cast<std::size_t>(node_id)].left = left;
        tree.nodes[static_cast<std::size_t>(node_id)].right = right;
        return node_id;
    }
};

}  // namespace

Tree build_gini_tree(const Matrix& features, const std::vector<int>& labels, int n_classes,
                     std::vector<std::uint32_t> sample_ids, const GiniTreeOptions& options,
                     Rng* rng) {
    if (sample_ids.empty()) throw ConfigError("build_gini_tree: no samples");
    GiniBuilder builder{features, labels, n_classes, options, rng, {}};
    builder.build(std::move(sample_ids));
    return std::move(builder.tree);
}

Tree build_grad_tree_exact(const Matrix& features, const std::vector<double>& grad,
                           const std::vector<double>& hess,
                           std::vector<std::uint32_t> sample_ids,
                           const GradTreeOptions& options) {
    if (sample_ids.empty()) throw ConfigError("build_grad_tree: no samples");
    GradBuilder builder{&features, nullptr, grad, hess, options, {}};
    builder.build(sample_ids, 0);
    return std::move(builder.tree);
}

BinnedMatrix bin_features(const Matrix& features, int max_bins) {
    if (max_bins < 2) throw ConfigError("bin_features: max_bins must be >= 2");
    BinnedMatrix out;
    out.rows = features.rows();
    out.cols = features.cols();
    out.bins.assign(out.rows * out.cols, 0);
    out.edges.resize(out.cols);

    std::vector<double> column(out.rows);
    for (std::size_t f = 0; f < out.cols; ++f) {
        for (std::size_t i = 0; i < out.rows; ++i) column[i] = features.at(i, f);
        std::sort(column.begin(), column.end());

        // Edges at quantile positions, deduplicated.
        auto& edges = out.edges[f];
        for (int b = 1; b < max_bins; ++b) {
            const std::size_t pos =
                static_cast<std::size_t>(static_cast<std::uint64_t>(b) * out.rows / max_bins);
            if (pos >= out.rows) break;
            const double v = column[pos];
            if (edges.empty() || v > edges.back()) edges.push_back(v);
        }
        // Drop a top edge equal to the maximum: it cannot separate anything.
        while (!edges.empty() && edges.back() >= column.back()) edges.pop_back();

        for (std::size_t i = 0; i < out.rows; ++i) {
            const double v = features.at(i, f);
            const std::size_t b = static_cast<std::size_t>(
                std::lower_bound(edges.begin(), edges.end(), v) - edges.begin());
            out.bins[i * out.cols + f] = static_cast<std::uint16_t>(b);
        }
    }
    return out;
}

Tree build_grad_tree_hist(const BinnedMatrix& binned, const std::vector<double>& grad,
                          const std::vector<double>& hess,
                          std::vector<std::uint32_t> sample_ids, const GradTreeOptions& options) {
    if (sample_ids.empty()) throw ConfigError("build_grad_tree: no samples");
    GradBuilder builder{nullptr, &binned, grad, hess, options, {}};
    builder.build(sample_ids, 0);
    return std::move(builder.tree);
}

}  // namespace wsnids::detail
