#include <algorithm>
#include <cmath>

#include "models/classifier_impl.hpp"
#include "wsnids/errors.hpp"
#include "wsnids/parallel.hpp"

namespace wsnids::detail {

ordered_json tree_to_json(const Tree& tree) {
    ordered_json nodes = ordered_json::array();
    for (const auto& n : tree.nodes)
        nodes.push_back({n.feature, n.threshold, n.left, n.right, n.leaf});
    ordered_json j;
    j["nodes"] = std::move(nodes);
    j["leaf_values"] = tree.leaf_values;
    return j;
}

Tree tree_from_json(const ordered_json& j) {
    Tree tree;
    for (const auto& n : j.at("nodes")) {
        TreeNode node;
        node.feature = n.at(0).get<std::int32_t>();
        node.threshold = n.at(1).get<double>();
        node.left = n.at(2).get<std::int32_t>();
        node.right = n.at(3).get<std::int32_t>();
        node.leaf = n.at(4).get<std::int32_t>();
        tree.nodes.push_back(node);
    }
    tree.leaf_values = j.at("leaf_values").get<std::vector<std::vector<double>>>();
    return tree;
}

Matrix DecisionTreeImpl::predict_scores(const Matrix& features, int threads) const {
    Matrix scores(features.rows(), static_cast<std::size_t>(n_classes_));
    parallel_for(features.rows(), threads, [&](std::size_t i) {
        const auto& freq = tree_.values_for(features.row_ptr(i));
        auto row = scores.row(i);
        std::copy(freq.begin(), freq.end(), row.begin());
    });
    return scores;
}

ordered_json DecisionTreeImpl::to_json() const {
    ordered_json j;
    j["n_classes"] = n_classes_;
    j["n_features"] = n_features_;
    j["tree"] = tree_to_json(tree_);
    return j;
}

std::shared_ptr<DecisionTreeImpl> DecisionTreeImpl::from_json(const ordered_json& j) {
    return std::make_shared<DecisionTreeImpl>(tree_from_json(j.at("tree")),
                                              j.at("n_classes").get<int>(),
                                              j.at("n_features").get<std::size_t>());
}

Matrix RandomForestImpl::predict_scores(const Matrix& features, int threads) const {
    Matrix scores(features.rows(), static_cast<std::size_t>(n_classes_));
    const double inv_trees = 1.0 / static_cast<double>(trees_.size());
    parallel_for(features.rows(), threads, [&](std::size_t i) {
        auto row = scores.row(i);
        for (const auto& tree : trees_) {
            const auto& freq = tree.values_for(features.row_ptr(i));
            for (std::size_t c = 0; c < row.size(); ++c) row[c] += freq[c];
        }
        for (double& v : row) v *= inv_trees;
    });
    return scores;
}

ordered_json RandomForestImpl::to_json() const {
    ordered_json trees = ordered_json::array();
    for (const auto& t : trees_) trees.push_back(tree_to_json(t));
    ordered_json j;
    j["n_classes"] = n_classes_;
    j["n_features"] = n_features_;
    j["trees"] = std::move(trees);
    return j;
}

std::shared_ptr<RandomForestImpl> RandomForestImpl::from_json(const ordered_json& j) {
    std::vector<Tree> trees;
    for (const auto& t : j.at("trees")) trees.push_back(tree_from_json(t));
    return std::make_shared<RandomForestImpl>(std::move(trees), j.at("n_classes").get<int>(),
                                              j.at("n_features").get<std::size_t>());
}

KnnImpl::KnnImpl(Matrix train_features, std::vector<int> train_labels, int n_classes, int k)
    : train_features_(std::move(train_features)),
      train_labels_(std::move(train_labels)),
      n_classes_(n_classes),
      k_(k) {
    index_.emplace(train_features_);
}

Matrix KnnImpl::predict_scores(const Matrix& features, int threads) const {
    Matrix scores(features.rows(), static_cast<std::size_t>(n_classes_));
    const auto k = static_cast<std::size_t>(k_);
    const double inv_k = 1.0 / static_cast<double>(k);
    parallel_for(features.rows(), threads, [&](std::size_t i) {
        const auto neighbors = index_->k_nearest(features.row(i), k);
        auto row = scores.row(i);
        for (const auto& nb : neighbors)
            row[static_cast<std::size_t>(train_labels_[nb.id])] += inv_k;
    });
    return scores;
}

ordered_json KnnImpl::to_json() const {
    ordered_json j;
    j["n_classes"] = n_classes_;
    j["k"] = k_;
    j["n_features"] = train_features_.cols();
    j["labels"] = train_labels_;
    j["features"] = train_features_.data();
    return j;
}

std::shared_ptr<KnnImpl> KnnImpl::from_json(const ordered_json& j) {
    const auto n_features = j.at("n_features").get<std::size_t>();
    const auto labels = j.at("labels").get<std::vector<int>>();
    const auto flat = j.at("features").get<std::vector<double>>();
    Matrix features(labels.size(), n_features);
    features.data() = flat;
    return std::make_shared<KnnImpl>(std::move(features), labels, j.at("n_classes").get<int>(),
                                     j.at("k").get<int>());
}

Matrix MlpImpl::predict_scores(const Matrix& features, int threads) const {
    (void)threads;  // per-sample forward pass is already cheap and serial-deterministic
    return net_.forward(features);
}

ordered_json MlpImpl::to_json() const {
    ordered_json weights = ordered_json::array();
    for (const auto& w : net_.weights) weights.push_back(w.data());
    ordered_json j;
    j["n_classes"] = n_classes_;
    j["sizes"] = net_.sizes;
    j["weights"] = std::move(weights);
    j["biases"] = net_.biases;
    return j;
}

std::shared_ptr<MlpImpl> MlpImpl::from_json(const ordered_json& j) {
    MlpNet net;
    net.sizes = j.at("sizes").get<std::vector<int>>();
    const auto& weights = j.at("weights");
    for (std::size_t l = 0; l + 1 < net.sizes.size(); ++l) {
        Matrix w(static_cast<std::size_t>(net.sizes[l + 1]),
                 static_cast<std::size_t>(net.sizes[l]));
        w.data() = weights.at(l).get<std::vector<double>>();
        net.weights.push_back(std::move(w));
    }
    net.biases = j.at("biases").get<std::vector<std::vector<double>>>();
    return std::make_shared<MlpImpl>(std::move(net), j.at("n_classes").get<int>());
}

Matrix GbtImpl::predict_scores(const Matrix& features, int threads) const {
    const std::size_t k = base_logits_.size();
    Matrix scores(features.rows(), k);
    parallel_for(features.rows(), threads, [&](std::size_t i) {
        const double* row = features.row_ptr(i);
        auto out = scores.row(i);
        for (std::size_t c = 0; c < k; ++c) out[c] = base_logits_[c];
        for (const auto& trees : round_trees_) {
            for (std::size_t c = 0; c < k; ++c) out[c] += trees[c].values_for(row)[0];
        }
        double zmax = out[0];
        for (std::size_t c = 1; c < k; ++c) zmax = std::max(zmax, out[c]);
        double sum = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            out[c] = std::exp(out[c] - zmax);
            sum += out[c];
        }
        for (std::size_t c = 0; c < k; ++c) out[c] /= sum;
    });
    return scores;
}

ordered_json GbtImpl::to_json() const {
    ordered_json rounds = ordered_json::array();
    for (const auto& trees : round_trees_) {
        ordered_json per_class = ordered_json::array();
        for (const auto& t : trees) per_class.push_back(tree_to_json(t));
        rounds.push_back(std::move(per_class));
    }
    ordered_json j;
    j["variant"] = to_string(kind_);
    j["n_features"] = n_features_;
    j["base_logits"] = base_logits_;
    j["rounds"] = std::move(rounds);
    return j;
}

std::shared_ptr<GbtImpl> GbtImpl::from_json(const ordered_json& j) {
    std::vector<std::vector<Tree>> rounds;
    for (const auto& r : j.at("rounds")) {
        std::vector<Tree> trees;
        for (const auto& t : r) trees.push_back(tree_from_json(t));
        rounds.push_back(std::move(trees));
    }
    return std::make_shared<GbtImpl>(model_kind_from_string(j.at("variant").get<std::string>()),
                                     std::move(rounds),
                                     j.at("base_logits").get<std::vector<double>>(),
                                     j.at("n_features").get<std::size_t>());
}

}  // namespace wsnids::detail
