#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "wsnids/matrix.hpp"
#include "wsnids/neighbors.hpp"
#include "wsnids/resample.hpp"
#include "wsnids/rng.hpp"

namespace testutil {

using wsnids::Matrix;

// Gaussian class blobs with configurable per-class counts; class c is
// centered at (c * spread, c * spread, ...).
struct Blobs {
    Matrix features;
    std::vector<int> labels;
};

inline Blobs make_blobs(const std::vector<std::size_t>& class_counts, std::size_t n_features,
                        double spread, double sigma, std::uint64_t seed) {
    wsnids::Rng rng(seed);
    Blobs out;
    out.features = Matrix(0, n_features);
    std::vector<double> row(n_features);
    for (std::size_t c = 0; c < class_counts.size(); ++c) {
        for (std::size_t i = 0; i < class_counts[c]; ++i) {
            for (std::size_t j = 0; j < n_features; ++j)
                row[j] = static_cast<double>(c) * spread + sigma * rng.normal();
            out.features.push_row(row);
            out.labels.push_back(static_cast<int>(c));
        }
    }
    return out;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    wsnids::Rng rng(seed);
    Matrix m(rows, cols);
    for (double& v : m.data()) v = rng.unit() * 10.0 - 5.0;
    return m;
}

// O(n^2) reference k-NN with the same ordering contract as the index:
// ascending (distance, id), optional self-exclusion.
inline std::vector<wsnids::Neighbor> brute_force_knn(const Matrix& data,
                                                     std::span<const double> query, std::size_t k,
                                                     std::size_t skip_id) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t i = 0; i < data.rows(); ++i) {
        if (i == skip_id) continue;
        all.emplace_back(wsnids::squared_distance(query, data.row(i)), i);
    }
    std::sort(all.begin(), all.end());
    all.resize(std::min(k, all.size()));
    std::vector<wsnids::Neighbor> out;
    for (const auto& [d2, id] : all) out.push_back({id, std::sqrt(d2)});
    return out;
}

constexpr std::size_t kNoSkip = static_cast<std::size_t>(-1);

// O(n^2) mutual-1-NN oracle for Tomek links.
inline std::vector<wsnids::TomekPair> brute_force_tomek(const Matrix& data,
                                                        const std::vector<int>& labels) {
    const std::size_t n = data.rows();
    std::vector<std::size_t> nn(n);
    for (std::size_t i = 0; i < n; ++i)
        nn[i] = brute_force_knn(data, data.row(i), 1, i)[0].id;
    std::vector<wsnids::TomekPair> pairs;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = nn[i];
        if (i < j && nn[j] == i && labels[i] != labels[j]) pairs.push_back({i, j});
    }
    return pairs;
}

// Mann-Whitney AUC: P(score_pos > score_neg) + 0.5 * P(tie) over all pairs.
inline double pair_count_auc(const std::vector<int>& y, const std::vector<double>& scores) {
    double wins = 0.0;
    std::int64_t pairs = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] != 1) continue;
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (y[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j]) {
                wins += 1.0;
            } else if (scores[i] == scores[j]) {
                wins += 0.5;
            }
        }
    }
    return wins / static_cast<double>(pairs);
}

}  // namespace testutil
