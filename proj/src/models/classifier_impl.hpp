#pragma once

#include <json.hpp>
#include <optional>
#include <vector>

#include "models/tree.hpp"
#include "wsnids/matrix.hpp"
#include "wsnids/models.hpp"
#include "wsnids/neighbors.hpp"
#include "wsnids/detail/mlp_net.hpp"

namespace wsnids {

using ordered_json = nlohmann::ordered_json;

class ClassifierImpl {
public:
    virtual ~ClassifierImpl() = default;
    virtual ModelKind kind() const = 0;
    virtual int n_classes() const = 0;
    virtual std::size_t n_features() const = 0;
    virtual Matrix predict_scores(const Matrix& features, int threads) const = 0;
    virtual ordered_json to_json() const = 0;
};

namespace detail {

ordered_json tree_to_json(const Tree& tree);
Tree tree_from_json(const ordered_json& j);

class DecisionTreeImpl : public ClassifierImpl {
public:
    DecisionTreeImpl(Tree tree, int n_classes, std::size_t n_features)
        : tree_(std::move(tree)), n_classes_(n_classes), n_features_(n_features) {}

    ModelKind kind() const override { return ModelKind::DecisionTree; }
    int n_classes() const override { return n_classes_; }
    std::size_t n_features() const override { return n_features_; }
    Matrix predict_scores(const Matrix& features, int threads) const override;
    ordered_json to_json() const override;
    static std::shared_ptr<DecisionTreeImpl> from_json(const ordered_json& j);

private:
    Tree tree_;
    int n_classes_;
    std::size_t n_features_;
};

class RandomForestImpl : public ClassifierImpl {
public:
    RandomForestImpl(std::vector<Tree> trees, int n_classes, std::size_t n_features)
        : trees_(std::move(trees)), n_classes_(n_classes), n_features_(n_features) {}

    ModelKind kind() const override { return ModelKind::RandomForest; }
    int n_classes() const override { return n_classes_; }
    std::size_t n_features() const override { return n_features_; }
    Matrix predict_scores(const Matrix& features, int threads) const override;
    ordered_json to_json() const override;
    static std::shared_ptr<RandomForestImpl> from_json(const ordered_json& j);

private:
    std::vector<Tree> trees_;
    int n_classes_;
    std::size_t n_features_;
};

class KnnImpl : public ClassifierImpl {
public:
    KnnImpl(Matrix train_features, std::vector<int> train_labels, int n_classes, int k);

    // the index references train_features_, so the object must stay put
    KnnImpl(const KnnImpl&) = delete;
    KnnImpl& operator=(const KnnImpl&) = delete;

    ModelKind kind() const override { return ModelKind::Knn; }
    int n_classes() const override { return n_classes_; }
    std::size_t n_features() const override { return train_features_.cols(); }
    Matrix predict_scores(const Matrix& features, int threads) const override;
    ordered_json to_json() const override;
    static std::shared_ptr<KnnImpl> from_json(const ordered_json& j);

private:
    Matrix train_features_;
    std::vector<int> train_labels_;
    int n_classes_;
    int k_;
    std::optional<NeighborIndex> index_;
};

class MlpImpl : public ClassifierImpl {
public:
    MlpImpl(MlpNet net, int n_classes) : net_(std::move(net)), n_classes_(n_classes) {}

    ModelKind kind() const override { return ModelKind::Mlp; }
    int n_classes() const override { return n_classes_; }
    std::size_t n_features() const override { return static_cast<std::size_t>(net_.sizes.front()); }
    Matrix predict_scores(const Matrix& features, int threads) const override;
    ordered_json to_json() const override;
    static std::shared_ptr<MlpImpl> from_json(const ordered_json& j);

private:
    MlpNet net_;
    int n_classes_;
};

class GbtImpl : public ClassifierImpl {
public:
    GbtImpl(ModelKind kind, std::vector<std::vector<Tree>> round_trees,
            std::vector<double> base_logits, std::size_t n_features)
        : kind_(kind),
          round_trees_(std::move(round_trees)),
          base_logits_(std::move(base_logits)),
          n_features_(n_features) {}

    ModelKind kind() const override { return kind_; }
    int n_classes() const override { return static_cast<int>(base_logits_.size()); }
    std::size_t n_features() const override { return n_features_; }
    Matrix predict_scores(const Matrix& features, int threads) const override;
    ordered_json to_json() const override;
    static std::shared_ptr<GbtImpl> from_json(const ordered_json& j);

private:
    ModelKind kind_;
    std::vector<std::vector<Tree>> round_trees_;  // [round][class], leaves pre-scaled
    std::vector<double> base_logits_;
    std::size_t n_features_;
};

}  // namespace detail
}  // namespace wsnids
