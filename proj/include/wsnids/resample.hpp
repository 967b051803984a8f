#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wsnids/dataset.hpp"
#include "wsnids/matrix.hpp"

namespace wsnids {

struct SmoteParams {
    int k_neighbors = 5;                      // clamped to class size - 1 per class
    std::map<int, std::int64_t> targets;      // empty: grow every class to the majority count
    std::uint64_t seed = 0;
};

// Provenance of one synthetic row: interpolation endpoints and the draw.
struct SyntheticRecord {
    std::size_t row;       // index of the synthetic row in the output matrix
    std::size_t base;      // original row the interpolation started from
    std::size_t neighbor;  // same-class neighbor it interpolated towards
    double delta;          // uniform draw in [0, 1)
};

struct SmoteResult {
    Matrix features;
    std::vector<int> labels;
    std::map<int, std::int64_t> synthetic_per_class;
    std::vector<SyntheticRecord> provenance;
};

// Pair of mutual exact 1-NNs with differing labels; stored with i < j.
struct TomekPair {
    std::size_t i = 0;
    std::size_t j = 0;
    friend bool operator==(const TomekPair&, const TomekPair&) = default;
};

enum class RemovePolicy { Both, MajorityOnly };

std::string to_string(RemovePolicy policy);
RemovePolicy remove_policy_from_string(const std::string& s);

struct ResampleReport {
    ClassDistribution before;
    ClassDistribution after_smote;
    std::int64_t tomek_pairs = 0;
    std::map<int, std::int64_t> removed_per_class;
    ClassDistribution after;
    RemovePolicy policy = RemovePolicy::Both;
    int k_neighbors = 5;
    std::uint64_t seed = 0;
};

// Linear interpolation used for synthetic samples, clamped per coordinate to
// the segment's bounding box so the segment-membership invariant holds under
// floating-point rounding.
double interpolate_coord(double base, double neighbor, double delta);

// Grows minority classes by interpolating between same-class nearest
// neighbors. Original rows come first and are never modified; synthetic rows
// follow, grouped by ascending class code.
SmoteResult smote(const Matrix& features, const std::vector<int>& labels,
                  const SmoteParams& params, int threads = 1);

// All pairs of differing-label rows that are each other's exact 1-NN.
// Detected in a single pass over the input as given.
std::vector<TomekPair> tomek_links(const Matrix& features, const std::vector<int>& labels,
                                   int threads = 1);

struct RemovalResult {
    Matrix features;
    std::vector<int> labels;
    std::map<int, std::int64_t> removed_per_class;
};

RemovalResult remove_tomek(const Matrix& features, const std::vector<int>& labels,
                           const std::vector<TomekPair>& pairs, RemovePolicy policy);

struct SmoteTomekResult {
    Matrix features;
    std::vector<int> labels;
    ResampleReport report;
    std::vector<SyntheticRecord> provenance;  // rows refer to the pre-removal matrix
};

// SMOTE to majority-count targets, Tomek-link detection on the combined data,
// then link removal.
SmoteTomekResult smote_tomek(const Matrix& features, const std::vector<int>& labels,
                             const SmoteParams& params,
                             RemovePolicy policy = RemovePolicy::Both, int threads = 1);

}  // namespace wsnids
