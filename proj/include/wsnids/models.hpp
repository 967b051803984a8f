#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wsnids/matrix.hpp"

namespace wsnids {

enum class ModelKind {
    DecisionTree,
    RandomForest,
    Knn,
    Mlp,
    GbtExact,      // exact greedy split enumeration (XGB-flavored)
    GbtHistogram,  // histogram split finding (LGB-flavored)
};

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);
const std::vector<ModelKind>& all_model_kinds();

struct DtParams {
    int max_depth = 0;  // 0 = unlimited
    int min_samples_split = 2;
};

struct RfParams {
    int n_trees = 100;
    bool bootstrap = true;
    bool feature_subsample = true;  // ceil(sqrt(n_features)) per split
    int max_depth = 0;
    int min_samples_split = 2;
};

struct KnnParams {
    int k = 5;
};

struct MlpParams {
    std::vector<int> hidden = {100};
    double learning_rate = 1e-3;
    int batch_size = 256;
    int epochs = 50;
};

struct GbtParams {
    int rounds = 100;
    double learning_rate = 0.3;
    double l2_lambda = 1.0;
    int max_depth = 6;
    int max_bins = 255;  // histogram variant only
};

struct TrainConfig {
    std::uint64_t seed = 0;
    DtParams dt;
    RfParams rf;
    KnnParams knn;
    MlpParams mlp;
    GbtParams gbt;
};

class ClassifierImpl;

// Trained classifier behind one contract. Immutable; cheap to copy and safe
// to share across threads.
class Model {
public:
    explicit Model(std::shared_ptr<const ClassifierImpl> impl);

    ModelKind kind() const;
    int n_classes() const;
    std::size_t n_features() const;

    // One row of probability-like scores per input row; rows sum to 1.
    Matrix predict_scores(const Matrix& features, int threads = 1) const;

    // Argmax of predict_scores; ties break toward the lowest class code.
    std::vector<int> predict(const Matrix& features, int threads = 1) const;

    // Self-describing versioned JSON.
    void save(const std::string& path) const;
    static Model load(const std::string& path);

private:
    std::shared_ptr<const ClassifierImpl> impl_;
};

Model train(ModelKind kind, const Matrix& features, const std::vector<int>& labels,
            int n_classes, const TrainConfig& config = {}, int threads = 1);

}  // namespace wsnids
