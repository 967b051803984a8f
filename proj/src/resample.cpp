#include "wsnids/resample.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "wsnids/errors.hpp"
#include "wsnids/neighbors.hpp"
#include "wsnids/parallel.hpp"
#include "wsnids/rng.hpp"

namespace wsnids {

std::string to_string(RemovePolicy policy) {
    return policy == RemovePolicy::Both ? "both" : "majority_only";
}

RemovePolicy remove_policy_from_string(const std::string& s) {
    if (s == "both") return RemovePolicy::Both;
    if (s == "majority_only" || s == "majority-only") return RemovePolicy::MajorityOnly;
    throw ConfigError("unknown removal policy '" + s + "' (expected both or majority_only)");
}

double interpolate_coord(double base, double neighbor, double delta) {
    const double v = base + delta * (neighbor - base);
    const double lo = std::min(base, neighbor);
    const double hi = std::max(base, neighbor);
    return std::clamp(v, lo, hi);
}

SmoteResult smote(const Matrix& features, const std::vector<int>& labels,
                  const SmoteParams& params, int threads) {
    const std::size_t n = features.rows();
    const std::size_t m = features.cols();
    if (n == 0) throw DataError("smote: empty input");
    if (labels.size() != n) throw DataError("smote: label count does not match rows");
    if (params.k_neighbors < 1) throw ConfigError("smote: k_neighbors must be >= 1");

    const ClassDistribution dist = class_distribution(labels);
    const int n_classes = static_cast<int>(dist.counts.size());

    std::map<int, std::int64_t> targets = params.targets;
    if (targets.empty()) {
        const std::int64_t majority = *std::max_element(dist.counts.begin(), dist.counts.end());
        for (int c = 0; c < n_classes; ++c) targets[c] = majority;
    }
    for (const auto& [c, t] : targets) {
        if (c < 0 || c >= n_classes) throw ConfigError("smote: target class out of range");
        if (t < dist.counts[static_cast<std::size_t>(c)])
            throw ConfigError("smote: target count below the current count for class " +
                              std::to_string(c));
    }

    SmoteResult out;
    out.features = features;
    out.labels = labels;
    for (int c = 0; c < n_classes; ++c) out.synthetic_per_class[c] = 0;

    std::int64_t total_need = 0;
    for (const auto& [c, t] : targets) total_need += t - dist.counts[static_cast<std::size_t>(c)];
    out.features.data().reserve((n + static_cast<std::size_t>(total_need)) * m);
    out.labels.reserve(n + static_cast<std::size_t>(total_need));

    std::vector<double> synth(m);
    for (int c = 0; c < n_classes; ++c) {
        const std::int64_t have = dist.counts[static_cast<std::size_t>(c)];
        const auto it = targets.find(c);
        const std::int64_t want = it == targets.end() ? have : it->second;
        const std::int64_t need = want - have;
        if (need <= 0) continue;
        if (have < 2)
            throw DataError("smote: class " + std::to_string(c) +
                            " has fewer than 2 samples and cannot be interpolated");

        std::vector<std::size_t> class_rows;
        for (std::size_t i = 0; i < n; ++i) {
            if (labels[i] == c) class_rows.push_back(i);
        }

        const std::size_t k =
            std::min<std::size_t>(static_cast<std::size_t>(params.k_neighbors),
                                  class_rows.size() - 1);

        // k nearest same-class neighbors of every class member, local ids.
        Matrix class_matrix = features.select_rows(class_rows);
        NeighborIndex index(class_matrix);
        std::vector<std::vector<std::size_t>> neigh(class_rows.size());
        parallel_for(class_rows.size(), threads, [&](std::size_t i) {
            const auto found = index.k_nearest(i, k, /*exclude_self=*/true);
            neigh[i].reserve(found.size());
            for (const auto& nb : found) neigh[i].push_back(nb.id);
        });

        Rng rng = derive_rng(params.seed, 0x534D4F5445ULL /*"SMOTE"*/, static_cast<std::uint64_t>(c));
        std::vector<std::size_t> order(class_rows.size());
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);

        for (std::int64_t t = 0; t < need; ++t) {
            const std::size_t local = order[static_cast<std::size_t>(t) % order.size()];
            const std::size_t base = class_rows[local];
            const std::size_t neighbor_local = neigh[local][rng.below(k)];
            const std::size_t neighbor = class_rows[neighbor_local];
            const double delta = rng.unit();

            const double* xb = features.row_ptr(base);
            const double* xz = features.row_ptr(neighbor);
            for (std::size_t j = 0; j < m; ++j) synth[j] = interpolate_coord(xb[j], xz[j], delta);

            out.provenance.push_back({out.features.rows(), base, neighbor, delta});
            out.features.push_row(synth);
            out.labels.push_back(c);
            ++out.synthetic_per_class[c];
        }
    }
    return out;
}

std::vector<TomekPair> tomek_links(const Matrix& features, const std::vector<int>& labels,
                                   int threads) {
    const std::size_t n = features.rows();
    if (n < 2) throw DataError("tomek_links: need at least two rows");
    if (labels.size() != n) throw DataError("tomek_links: label count does not match rows");

    NeighborIndex index(features);
    const std::vector<std::size_t> nn = index.all_nearest(threads);

    std::vector<TomekPair> pairs;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = nn[i];
        if (i < j && nn[j] == i && labels[i] != labels[j]) pairs.push_back({i, j});
    }
    return pairs;
}

RemovalResult remove_tomek(const Matrix& features, const std::vector<int>& labels,
                           const std::vector<TomekPair>& pairs, RemovePolicy policy) {
    const std::size_t n = features.rows();
    if (labels.size() != n) throw DataError("remove_tomek: label count does not match rows");

    const ClassDistribution dist =
        labels.empty() ? ClassDistribution{} : class_distribution(labels);

    std::set<std::size_t> drop;
    for (const auto& pair : pairs) {
        if (pair.i >= n || pair.j >= n) throw DataError("remove_tomek: pair row out of range");
        if (policy == RemovePolicy::Both) {
            drop.insert(pair.i);
            drop.insert(pair.j);
        } else {
            const std::int64_t ci = dist.counts[static_cast<std::size_t>(labels[pair.i])];
            const std::int64_t cj = dist.counts[static_cast<std::size_t>(labels[pair.j])];
            // Majority endpoint by pre-removal counts. After balancing the
            // counts tie exactly; the lower class code (the Normal side) is
            // then treated as the majority, which keeps grown minority
            // classes at their oversampling targets.
            if (ci > cj || (ci == cj && labels[pair.i] < labels[pair.j])) {
                drop.insert(pair.i);
            } else {
                drop.insert(pair.j);
            }
        }
    }

    RemovalResult out;
    out.features = Matrix(0, features.cols());
    for (std::size_t i = 0; i < n; ++i) {
        if (drop.count(i)) {
            ++out.removed_per_class[labels[i]];
        } else {
            out.features.push_row(features.row(i));
            out.labels.push_back(labels[i]);
        }
    }
    return out;
}

SmoteTomekResult smote_tomek(const Matrix& features, const std::vector<int>& labels,
                             const SmoteParams& params, RemovePolicy policy, int threads) {
    SmoteTomekResult out;
    out.report.policy = policy;
    out.report.k_neighbors = params.k_neighbors;
    out.report.seed = params.seed;
    out.report.before = class_distribution(labels);

    SmoteResult oversampled = smote(features, labels, params, threads);
    out.report.after_smote = class_distribution(oversampled.labels);
    out.provenance = std::move(oversampled.provenance);

    const std::vector<TomekPair> pairs =
        tomek_links(oversampled.features, oversampled.labels, threads);
    out.report.tomek_pairs = static_cast<std::int64_t>(pairs.size());

    RemovalResult cleaned =
        remove_tomek(oversampled.features, oversampled.labels, pairs, policy);
    out.report.removed_per_class = cleaned.removed_per_class;
    out.report.after = class_distribution(cleaned.labels);

    out.features = std::move(cleaned.features);
    out.labels = std::move(cleaned.labels);
    return out;
}

}  // namespace wsnids
