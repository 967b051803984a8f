#include "wsnids/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "models/classifier_impl.hpp"
#include "wsnids/errors.hpp"
#include "wsnids/parallel.hpp"
#include "wsnids/rng.hpp"

namespace wsnids {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::DecisionTree: return "dt";
        case ModelKind::RandomForest: return "rf";
        case ModelKind::Knn: return "knn";
        case ModelKind::Mlp: return "mlp";
        case ModelKind::GbtExact: return "xgb";
        case ModelKind::GbtHistogram: return "lgb";
    }
    return "dt";
}

ModelKind model_kind_from_string(const std::string& name) {
    std::string s = name;
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "dt" || s == "decision_tree") return ModelKind::DecisionTree;
    if (s == "rf" || s == "random_forest") return ModelKind::RandomForest;
    if (s == "knn") return ModelKind::Knn;
    if (s == "mlp") return ModelKind::Mlp;
    if (s == "xgb" || s == "gbt_exact") return ModelKind::GbtExact;
    if (s == "lgb" || s == "gbt_histogram") return ModelKind::GbtHistogram;
    throw ConfigError("unknown model kind '" + name +
                      "' (expected dt, rf, knn, mlp, xgb or lgb)");
}

const std::vector<ModelKind>& all_model_kinds() {
    static const std::vector<ModelKind> kinds = {ModelKind::DecisionTree, ModelKind::RandomForest,
                                                 ModelKind::Knn,          ModelKind::Mlp,
                                                 ModelKind::GbtExact,     ModelKind::GbtHistogram};
    return kinds;
}

Model::Model(std::shared_ptr<const ClassifierImpl> impl) : impl_(std::move(impl)) {}

ModelKind Model::kind() const { return impl_->kind(); }
int Model::n_classes() const { return impl_->n_classes(); }
std::size_t Model::n_features() const { return impl_->n_features(); }

Matrix Model::predict_scores(const Matrix& features, int threads) const {
    if (features.cols() != impl_->n_features())
        throw DataError("predict: feature width does not match training");
    return impl_->predict_scores(features, threads);
}

std::vector<int> Model::predict(const Matrix& features, int threads) const {
    const Matrix scores = predict_scores(features, threads);
    std::vector<int> labels(scores.rows());
    for (std::size_t i = 0; i < scores.rows(); ++i) {
        const auto row = scores.row(i);
        std::size_t best = 0;
        for (std::size_t c = 1; c < row.size(); ++c) {
            if (row[c] > row[best]) best = c;
        }
        labels[i] = static_cast<int>(best);
    }
    return labels;
}

namespace {

using detail::Tree;

constexpr std::uint64_t kRfStream = 0x666F726573ULL;
constexpr std::uint64_t kMlpStream = 0x6D6C70ULL;

void validate_training_inputs(const Matrix& features, const std::vector<int>& labels,
                              int n_classes) {
    if (features.rows() == 0) throw DataError("train: empty feature matrix");
    if (features.rows() != labels.size()) throw DataError("train: label count does not match rows");
    if (n_classes < 1) throw ConfigError("train: n_classes must be >= 1");
    for (const int c : labels) {
        if (c < 0 || c >= n_classes) throw DataError("train: label code out of range");
    }
}

std::vector<std::uint32_t> identity_ids(std::size_t n) {
    std::vector<std::uint32_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0u);
    return ids;
}

Model train_decision_tree(const Matrix& x, const std::vector<int>& y, int n_classes,
                          const TrainConfig& config) {
    detail::GiniTreeOptions opt;
    opt.max_depth = config.dt.max_depth;
    opt.min_samples_split = std::max(config.dt.min_samples_split, 2);
    Tree tree = detail::build_gini_tree(x, y, n_classes, identity_ids(x.rows()), opt, nullptr);
    return Model(std::make_shared<detail::DecisionTreeImpl>(std::move(tree), n_classes, x.cols()));
}

Model train_random_forest(const Matrix& x, const std::vector<int>& y, int n_classes,
                          const TrainConfig& config, int threads) {
    const RfParams& p = config.rf;
    if (p.n_trees < 1) throw ConfigError("random forest: n_trees must be >= 1");

    detail::GiniTreeOptions opt;
    opt.max_depth = p.max_depth;
    opt.min_samples_split = std::max(p.min_samples_split, 2);
    opt.feature_subsample = p.feature_subsample;
    opt.n_sub_features =
        static_cast<int>(std::ceil(std::sqrt(static_cast<double>(x.cols()))));

    std::vector<Tree> trees(static_cast<std::size_t>(p.n_trees));
    parallel_for(trees.size(), threads, [&](std::size_t t) {
        Rng rng = derive_rng(config.seed, kRfStream, t);
        std::vector<std::uint32_t> ids;
        if (p.bootstrap) {
            ids.resize(x.rows());
            for (auto& id : ids) id = static_cast<std::uint32_t>(rng.below(x.rows()));
        } else {
            ids = identity_ids(x.rows());
        }
        trees[t] = detail::build_gini_tree(x, y, n_classes, std::move(ids), opt, &rng);
    });
    return Model(std::make_shared<detail::RandomForestImpl>(std::move(trees), n_classes, x.cols()));
}

Model train_knn(const Matrix& x, const std::vector<int>& y, int n_classes,
                const TrainConfig& config) {
    if (config.knn.k < 1) throw ConfigError("knn: k must be >= 1");
    const int k = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(config.knn.k), x.rows()));
    return Model(std::make_shared<detail::KnnImpl>(x, y, n_classes, k));
}

Model train_mlp(const Matrix& x, const std::vector<int>& y, int n_classes,
                const TrainConfig& config) {
    const MlpParams& p = config.mlp;
    for (const int h : p.hidden) {
        if (h < 1) throw ConfigError("mlp: hidden layers need at least one unit");
    }
    if (p.learning_rate <= 0.0) throw ConfigError("mlp: learning rate must be > 0");
    if (p.batch_size < 1) throw ConfigError("mlp: batch size must be >= 1");
    if (p.epochs < 0) throw ConfigError("mlp: epochs must be >= 0");

    std::vector<int> sizes;
    sizes.push_back(static_cast<int>(x.cols()));
    sizes.insert(sizes.end(), p.hidden.begin(), p.hidden.end());
    sizes.push_back(n_classes);

    Rng rng = derive_rng(config.seed, kMlpStream, 0);
    detail::MlpNet net;
    net.init(sizes, rng);

    const std::size_t n = x.rows();

    // Output bias starts at the log class priors, so an untrained (or barely
    // trained) net already predicts the prior distribution.
    {
        std::vector<double> prior(static_cast<std::size_t>(n_classes), 0.0);
        for (const int c : y) prior[static_cast<std::size_t>(c)] += 1.0;
        auto& out_bias = net.biases.back();
        for (std::size_t c = 0; c < out_bias.size(); ++c)
            out_bias[c] = std::log(std::max(prior[c] / static_cast<double>(n), 1e-12));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    std::vector<Matrix> grad_w;
    std::vector<std::vector<double>> grad_b;
    const std::size_t batch = static_cast<std::size_t>(p.batch_size);

    for (int epoch = 0; epoch < p.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t end = std::min(start + batch, n);
            Matrix bx(end - start, x.cols());
            std::vector<int> by(end - start);
            for (std::size_t i = start; i < end; ++i) {
                const auto src = x.row(order[i]);
                auto dst = bx.row(i - start);
                std::copy(src.begin(), src.end(), dst.begin());
                by[i - start] = y[order[i]];
            }
            net.backward(bx, by, grad_w, grad_b);
            net.step(grad_w, grad_b, p.learning_rate);
        }
    }
    return Model(std::make_shared<detail::MlpImpl>(std::move(net), n_classes));
}

Model train_gbt(ModelKind kind, const Matrix& x, const std::vector<int>& y, int n_classes,
                const TrainConfig& config, int threads) {
    const GbtParams& p = config.gbt;
    if (p.rounds < 0) throw ConfigError("gbt: rounds must be >= 0");
    if (p.learning_rate < 0.0) throw ConfigError("gbt: learning rate must be >= 0");
    if (p.l2_lambda < 0.0) throw ConfigError("gbt: lambda must be >= 0");
    if (p.max_depth < 1) throw ConfigError("gbt: max_depth must be >= 1");

    const std::size_t n = x.rows();
    const std::size_t k = static_cast<std::size_t>(n_classes);

    // Base score: log class priors, so zero rounds (or zero learning rate)
    // predict the prior distribution.
    std::vector<double> base_logits(k, 0.0);
    {
        std::vector<double> prior(k, 0.0);
        for (const int c : y) prior[static_cast<std::size_t>(c)] += 1.0;
        for (std::size_t c = 0; c < k; ++c)
            base_logits[c] = std::log(std::max(prior[c] / static_cast<double>(n), 1e-12));
    }

    detail::BinnedMatrix binned;
    const bool histogram = kind == ModelKind::GbtHistogram;
    if (histogram) binned = detail::bin_features(x, p.max_bins);

    detail::GradTreeOptions opt;
    opt.max_depth = p.max_depth;
    opt.l2_lambda = p.l2_lambda;

    std::vector<double> logits(n * k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < k; ++c) logits[i * k + c] = base_logits[c];

    std::vector<double> probs(n * k);
    std::vector<std::vector<double>> grad(k, std::vector<double>(n));
    std::vector<std::vector<double>> hess(k, std::vector<double>(n));
    std::vector<std::vector<Tree>> round_trees;
    round_trees.reserve(static_cast<std::size_t>(p.rounds));

    for (int round = 0; round < p.rounds; ++round) {
        // Softmax probabilities from the logits at the start of the round;
        // all class trees of one round share this snapshot.
        parallel_for(n, threads, [&](std::size_t i) {
            const double* z = logits.data() + i * k;
            double zmax = z[0];
            for (std::size_t c = 1; c < k; ++c) zmax = std::max(zmax, z[c]);
            double sum = 0.0;
            for (std::size_t c = 0; c < k; ++c) {
                probs[i * k + c] = std::exp(z[c] - zmax);
                sum += probs[i * k + c];
            }
            for (std::size_t c = 0; c < k; ++c) {
                const double pr = probs[i * k + c] / sum;
                probs[i * k + c] = pr;
                grad[c][i] = pr - (static_cast<std::size_t>(y[i]) == c ? 1.0 : 0.0);
                hess[c][i] = pr * (1.0 - pr);
            }
        });

        std::vector<Tree> trees(k);
        parallel_for(k, threads, [&](std::size_t c) {
            Tree tree = histogram
                            ? detail::build_grad_tree_hist(binned, grad[c], hess[c],
                                                           identity_ids(n), opt)
                            : detail::build_grad_tree_exact(x, grad[c], hess[c],
                                                            identity_ids(n), opt);
            // Bake the shrinkage into the leaves so prediction is a plain sum.
            for (auto& leaf : tree.leaf_values) leaf[0] *= p.learning_rate;
            trees[c] = std::move(tree);
        });

        parallel_for(n, threads, [&](std::size_t i) {
            const double* row = x.row_ptr(i);
            for (std::size_t c = 0; c < k; ++c)
                logits[i * k + c] += trees[c].values_for(row)[0];
        });
        round_trees.push_back(std::move(trees));
    }

    return Model(std::make_shared<detail::GbtImpl>(kind, std::move(round_trees),
                                                   std::move(base_logits), x.cols()));
}

}  // namespace

Model train(ModelKind kind, const Matrix& features, const std::vector<int>& labels, int n_classes,
            const TrainConfig& config, int threads) {
    validate_training_inputs(features, labels, n_classes);
    switch (kind) {
        case ModelKind::DecisionTree: return train_decision_tree(features, labels, n_classes, config);
        case ModelKind::RandomForest:
            return train_random_forest(features, labels, n_classes, config, threads);
        case ModelKind::Knn: return train_knn(features, labels, n_classes, config);
        case ModelKind::Mlp: return train_mlp(features, labels, n_classes, config);
        case ModelKind::GbtExact:
        case ModelKind::GbtHistogram:
            return train_gbt(kind, features, labels, n_classes, config, threads);
    }
    throw ConfigError("train: unknown model kind");
}

void Model::save(const std::string& path) const {
    ordered_json j;
    j["format_version"] = 1;
    j["kind"] = to_string(impl_->kind());
    j["model"] = impl_->to_json();
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file: " + path);
    out << j.dump(2) << '\n';
}

Model Model::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed model file " + path + ": " + e.what());
    }
    if (!j.contains("format_version") || j["format_version"].get<int>() != 1)
        throw DataError("unsupported model format version in " + path);

    const ModelKind kind = model_kind_from_string(j.at("kind").get<std::string>());
    const ordered_json& m = j.at("model");
    switch (kind) {
        case ModelKind::DecisionTree: return Model(detail::DecisionTreeImpl::from_json(m));
        case ModelKind::RandomForest: return Model(detail::RandomForestImpl::from_json(m));
        case ModelKind::Knn: return Model(detail::KnnImpl::from_json(m));
        case ModelKind::Mlp: return Model(detail::MlpImpl::from_json(m));
        case ModelKind::GbtExact:
        case ModelKind::GbtHistogram: return Model(detail::GbtImpl::from_json(m));
    }
    throw DataError("unknown model kind in " + path);
}

}  // namespace wsnids
