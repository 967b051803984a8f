#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "helpers.hpp"
#include "wsnids/detail/mlp_net.hpp"
#include "wsnids/errors.hpp"
#include "wsnids/models.hpp"

using namespace wsnids;

namespace {

// Exhaustive depth-1 CART oracle for one feature: tries every midpoint of
// consecutive distinct sorted values, minimizes weighted Gini, predicts the
// majority class per side (ties toward the lowest code).
std::vector<int> stump_oracle_predict(const std::vector<double>& x, const std::vector<int>& y,
                                      int n_classes) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    auto gini_of = [&](const std::vector<std::int64_t>& counts, std::int64_t total) {
        if (total == 0) return 0.0;
        double g = 1.0;
        for (const auto c : counts) {
            const double p = static_cast<double>(c) / static_cast<double>(total);
            g -= p * p;
        }
        return g;
    };
    auto majority = [&](const std::vector<std::int64_t>& counts) {
        int best = 0;
        for (int c = 1; c < n_classes; ++c) {
            if (counts[static_cast<std::size_t>(c)] > counts[static_cast<std::size_t>(best)])
                best = c;
        }
        return best;
    };

    std::vector<std::int64_t> total_counts(static_cast<std::size_t>(n_classes), 0);
    for (const int c : y) ++total_counts[static_cast<std::size_t>(c)];
    const double parent = gini_of(total_counts, static_cast<std::int64_t>(n));

    double best_impurity = parent;
    double best_threshold = 0.0;
    bool found = false;

    std::vector<std::int64_t> left(static_cast<std::size_t>(n_classes), 0);
    for (std::size_t i = 1; i < n; ++i) {
        ++left[static_cast<std::size_t>(y[order[i - 1]])];
        const double lo = x[order[i - 1]];
        const double hi = x[order[i]];
        if (lo == hi) continue;
        std::vector<std::int64_t> right(static_cast<std::size_t>(n_classes), 0);
        for (int c = 0; c < n_classes; ++c)
            right[static_cast<std::size_t>(c)] =
                total_counts[static_cast<std::size_t>(c)] - left[static_cast<std::size_t>(c)];
        const double wl = static_cast<double>(i) / static_cast<double>(n);
        const double wr = 1.0 - wl;
        const double impurity = wl * gini_of(left, static_cast<std::int64_t>(i)) +
                                wr * gini_of(right, static_cast<std::int64_t>(n - i));
        if (impurity < best_impurity - 1e-12) {
            best_impurity = impurity;
            best_threshold = lo + (hi - lo) / 2.0;
            found = true;
        }
    }

    std::vector<int> pred(n);
    if (!found) {
        std::fill(pred.begin(), pred.end(), majority(total_counts));
        return pred;
    }
    std::vector<std::int64_t> left_final(static_cast<std::size_t>(n_classes), 0);
    std::vector<std::int64_t> right_final(static_cast<std::size_t>(n_classes), 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto& side = x[i] <= best_threshold ? left_final : right_final;
        ++side[static_cast<std::size_t>(y[i])];
    }
    for (std::size_t i = 0; i < n; ++i)
        pred[i] = x[i] <= best_threshold ? majority(left_final) : majority(right_final);
    return pred;
}

Matrix column_matrix(const std::vector<double>& x) {
    Matrix m(x.size(), 1);
    for (std::size_t i = 0; i < x.size(); ++i) m.at(i, 0) = x[i];
    return m;
}

double training_cross_entropy(const Model& model, const Matrix& x, const std::vector<int>& y) {
    const Matrix p = model.predict_scores(x);
    double loss = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i)
        loss += -std::log(std::max(p.at(i, static_cast<std::size_t>(y[i])), 1e-300));
    return loss / static_cast<double>(x.rows());
}

}  // namespace

TEST_CASE("decision tree splits the textbook 1-D dataset at 1.5") {
    const Matrix x = column_matrix({0.0, 1.0, 2.0, 3.0});
    const std::vector<int> y = {0, 0, 1, 1};
    const Model model = train(ModelKind::DecisionTree, x, y, 2);

    CHECK(model.predict(x) == y);  // 100% training accuracy
    const Matrix probe = column_matrix({1.4, 1.6});
    const std::vector<int> p = model.predict(probe);
    CHECK(p[0] == 0);
    CHECK(p[1] == 1);
}

TEST_CASE("depth-1 decision tree matches the exhaustive stump oracle") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        wsnids::Rng rng(seed);
        const std::size_t n = 10 + rng.below(40);
        std::vector<double> x(n);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = std::floor(rng.unit() * 10.0);  // coarse grid to exercise ties
            y[i] = static_cast<int>(rng.below(3));
        }
        const Matrix xm = column_matrix(x);
        TrainConfig config;
        config.dt.max_depth = 1;
        const Model model = train(ModelKind::DecisionTree, xm, y, 3, config);
        CHECK(model.predict(xm) == stump_oracle_predict(x, y, 3));
    }
}

TEST_CASE("unlimited-depth tree is exact on consistent data") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const testutil::Blobs blobs = testutil::make_blobs({30, 30, 30}, 4, 2.0, 1.5, seed);
        const Model model = train(ModelKind::DecisionTree, blobs.features, blobs.labels, 3);
        CHECK(model.predict(blobs.features) == blobs.labels);
    }
}

TEST_CASE("every kind handles single-class training data") {
    const Matrix x = testutil::random_matrix(12, 3, 2);
    const std::vector<int> y(12, 1);
    TrainConfig config;
    config.rf.n_trees = 5;
    config.mlp.epochs = 2;
    config.gbt.rounds = 3;
    for (const ModelKind kind : all_model_kinds()) {
        const Model model = train(kind, x, y, 3, config);
        const std::vector<int> pred = model.predict(x);
        for (const int p : pred) CHECK(p == 1);
        const Matrix scores = model.predict_scores(x);
        CHECK(scores.at(0, 1) > 0.5);
    }
}

TEST_CASE("degenerate random forest equals the decision tree") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const testutil::Blobs train_data = testutil::make_blobs({40, 35}, 3, 2.0, 1.4, seed);
        const testutil::Blobs held_out = testutil::make_blobs({25, 25}, 3, 2.0, 1.4, seed + 100);

        TrainConfig config;
        config.seed = seed;
        config.rf.n_trees = 1;
        config.rf.bootstrap = false;
        config.rf.feature_subsample = false;

        const Model rf = train(ModelKind::RandomForest, train_data.features, train_data.labels, 2,
                               config);
        const Model dt = train(ModelKind::DecisionTree, train_data.features, train_data.labels, 2,
                               config);
        CHECK(rf.predict(held_out.features) == dt.predict(held_out.features));
    }
}

TEST_CASE("random forest rejects zero trees") {
    const Matrix x = testutil::random_matrix(10, 2, 1);
    const std::vector<int> y = {0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
    TrainConfig config;
    config.rf.n_trees = 0;
    CHECK_THROWS_AS(train(ModelKind::RandomForest, x, y, 2, config), ConfigError);
}

TEST_CASE("knn with k=1 reproduces training labels on distinct rows") {
    const Matrix x = testutil::random_matrix(40, 3, 9);
    std::vector<int> y(40);
    wsnids::Rng rng(4);
    for (auto& v : y) v = static_cast<int>(rng.below(3));
    TrainConfig config;
    config.knn.k = 1;
    const Model model = train(ModelKind::Knn, x, y, 3, config);
    CHECK(model.predict(x) == y);
}

TEST_CASE("knn scores are vote fractions") {
    const Matrix x = column_matrix({0.0, 0.1, 0.2, 10.0, 10.1});
    const std::vector<int> y = {0, 0, 1, 1, 1};
    TrainConfig config;
    config.knn.k = 3;
    const Model model = train(ModelKind::Knn, x, y, 2, config);
    const Matrix scores = model.predict_scores(column_matrix({0.05}));
    CHECK(scores.at(0, 0) == doctest::Approx(2.0 / 3.0));
    CHECK(scores.at(0, 1) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("mlp with zero epochs still emits valid probabilities") {
    const Matrix x = testutil::random_matrix(20, 4, 3);
    std::vector<int> y(20);
    wsnids::Rng rng(8);
    for (auto& v : y) v = static_cast<int>(rng.below(3));
    TrainConfig config;
    config.mlp.epochs = 0;
    const Model model = train(ModelKind::Mlp, x, y, 3, config);
    const Matrix scores = model.predict_scores(x);
    for (std::size_t i = 0; i < scores.rows(); ++i) {
        double sum = 0.0;
        for (std::size_t c = 0; c < 3; ++c) sum += scores.at(i, c);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
    for (const int p : model.predict(x)) {
        CHECK(p >= 0);
        CHECK(p < 3);
    }
}

TEST_CASE("mlp learns a separable problem") {
    const testutil::Blobs blobs = testutil::make_blobs({60, 60}, 2, 4.0, 0.7, 12);
    TrainConfig config;
    config.mlp.hidden = {16};
    config.mlp.epochs = 60;
    config.mlp.learning_rate = 0.05;
    config.mlp.batch_size = 16;
    const Model model = train(ModelKind::Mlp, blobs.features, blobs.labels, 2, config);
    const std::vector<int> pred = model.predict(blobs.features);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == blobs.labels[i];
    CHECK(static_cast<double>(correct) / static_cast<double>(pred.size()) > 0.95);
}

TEST_CASE("mlp analytic gradients match central finite differences") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        wsnids::Rng rng(seed);
        detail::MlpNet net;
        net.init({5, 8, 3}, rng);

        const Matrix x = testutil::random_matrix(16, 5, seed + 50);
        std::vector<int> y(16);
        for (auto& v : y) v = static_cast<int>(rng.below(3));

        std::vector<Matrix> grad_w;
        std::vector<std::vector<double>> grad_b;
        net.backward(x, y, grad_w, grad_b);

        const double step = 1e-5;
        std::size_t flat = 0;
        double worst = 0.0;
        for (std::size_t l = 0; l < net.weights.size(); ++l) {
            const std::size_t wn = net.weights[l].data().size();
            for (std::size_t i = 0; i < wn + net.biases[l].size(); ++i, ++flat) {
                const double original = net.get_parameter(flat);
                net.set_parameter(flat, original + step);
                const double up = net.loss(x, y);
                net.set_parameter(flat, original - step);
                const double down = net.loss(x, y);
                net.set_parameter(flat, original);
                const double numeric = (up - down) / (2.0 * step);
                const double analytic =
                    i < wn ? grad_w[l].data()[i] : grad_b[l][i - wn];
                const double rel = std::abs(analytic - numeric) /
                                   std::max({std::abs(analytic), std::abs(numeric), 1e-8});
                worst = std::max(worst, rel);
            }
        }
        CHECK(worst < 1e-4);
    }
}

TEST_CASE("gbt with zero learning rate predicts the class priors") {
    const Matrix x = testutil::random_matrix(40, 3, 6);
    std::vector<int> y(40);
    for (std::size_t i = 0; i < 40; ++i) y[i] = i < 30 ? 0 : 1;  // priors 0.75 / 0.25
    TrainConfig config;
    config.gbt.rounds = 10;
    config.gbt.learning_rate = 0.0;
    for (const ModelKind kind : {ModelKind::GbtExact, ModelKind::GbtHistogram}) {
        const Model model = train(kind, x, y, 2, config);
        const Matrix scores = model.predict_scores(x);
        for (std::size_t i = 0; i < scores.rows(); ++i) {
            CHECK(scores.at(i, 0) == doctest::Approx(0.75).epsilon(1e-9));
            CHECK(scores.at(i, 1) == doctest::Approx(0.25).epsilon(1e-9));
        }
    }
}

TEST_CASE("gbt training cross-entropy is non-increasing over rounds") {
    for (const ModelKind kind : {ModelKind::GbtExact, ModelKind::GbtHistogram}) {
        const testutil::Blobs blobs = testutil::make_blobs({50, 40, 30}, 3, 2.5, 1.2, 21);
        double previous = std::numeric_limits<double>::infinity();
        for (int rounds = 0; rounds <= 10; rounds += 2) {
            TrainConfig config;
            config.gbt.rounds = rounds;
            config.gbt.max_depth = 3;
            const Model model = train(kind, blobs.features, blobs.labels, 3, config);
            const double loss = training_cross_entropy(model, blobs.features, blobs.labels);
            CHECK(loss <= previous + 1e-12);
            previous = loss;
        }
    }
}

TEST_CASE("both gbt variants separate blob data") {
    const testutil::Blobs blobs = testutil::make_blobs({60, 50, 40}, 4, 3.0, 1.0, 33);
    TrainConfig config;
    config.gbt.rounds = 20;
    for (const ModelKind kind : {ModelKind::GbtExact, ModelKind::GbtHistogram}) {
        const Model model = train(kind, blobs.features, blobs.labels, 3, config);
        const std::vector<int> pred = model.predict(blobs.features);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == blobs.labels[i];
        CHECK(static_cast<double>(correct) / static_cast<double>(pred.size()) > 0.97);
    }
}

TEST_CASE("scores are probability rows and predict is their argmax") {
    const testutil::Blobs blobs = testutil::make_blobs({25, 20, 15}, 3, 2.0, 1.5, 14);
    const Matrix probe = testutil::random_matrix(30, 3, 15);
    TrainConfig config;
    config.seed = 5;
    config.rf.n_trees = 7;
    config.mlp.epochs = 3;
    config.gbt.rounds = 5;
    for (const ModelKind kind : all_model_kinds()) {
        const Model model = train(kind, blobs.features, blobs.labels, 3, config);
        const Matrix scores = model.predict_scores(probe);
        const std::vector<int> pred = model.predict(probe);
        for (std::size_t i = 0; i < probe.rows(); ++i) {
            double sum = 0.0;
            std::size_t best = 0;
            for (std::size_t c = 0; c < 3; ++c) {
                sum += scores.at(i, c);
                if (scores.at(i, c) > scores.at(i, best)) best = c;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(pred[i] == static_cast<int>(best));
        }
    }
}

TEST_CASE("training is deterministic given seed and input order") {
    const testutil::Blobs blobs = testutil::make_blobs({30, 30}, 3, 2.0, 1.3, 18);
    const Matrix probe = testutil::random_matrix(25, 3, 19);
    TrainConfig config;
    config.seed = 123;
    config.rf.n_trees = 9;
    config.mlp.epochs = 4;
    config.gbt.rounds = 6;
    for (const ModelKind kind : all_model_kinds()) {
        const Model a = train(kind, blobs.features, blobs.labels, 2, config, /*threads=*/1);
        const Model b = train(kind, blobs.features, blobs.labels, 2, config, /*threads=*/4);
        CHECK(a.predict_scores(probe) == b.predict_scores(probe));
    }
}

TEST_CASE("dt and knn are invariant to training-row permutation") {
    const testutil::Blobs blobs = testutil::make_blobs({26, 22}, 3, 2.2, 1.1, 27);
    const Matrix probe = testutil::random_matrix(30, 3, 28);

    std::vector<std::size_t> perm(blobs.features.rows());
    std::iota(perm.begin(), perm.end(), 0);
    wsnids::Rng rng(55);
    rng.shuffle(perm);
    const Matrix shuffled_x = blobs.features.select_rows(perm);
    std::vector<int> shuffled_y(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) shuffled_y[i] = blobs.labels[perm[i]];

    for (const ModelKind kind : {ModelKind::DecisionTree, ModelKind::Knn}) {
        const Model a = train(kind, blobs.features, blobs.labels, 2);
        const Model b = train(kind, shuffled_x, shuffled_y, 2);
        CHECK(a.predict(probe) == b.predict(probe));
    }
}

TEST_CASE("save and load round-trips predictions for every kind") {
    const testutil::Blobs blobs = testutil::make_blobs({20, 18}, 3, 2.5, 1.0, 40);
    const Matrix probe = testutil::random_matrix(15, 3, 41);
    TrainConfig config;
    config.rf.n_trees = 4;
    config.mlp.epochs = 2;
    config.gbt.rounds = 3;
    for (const ModelKind kind : all_model_kinds()) {
        const Model model = train(kind, blobs.features, blobs.labels, 2, config);
        const std::string path = "model_" + to_string(kind) + ".json";
        model.save(path);
        const Model loaded = Model::load(path);
        CHECK(loaded.kind() == kind);
        CHECK(loaded.n_classes() == 2);
        CHECK(model.predict_scores(probe) == loaded.predict_scores(probe));
        std::remove(path.c_str());
    }
}

TEST_CASE("predict rejects mismatched feature width") {
    const Matrix x = testutil::random_matrix(10, 3, 1);
    const std::vector<int> y = {0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
    const Model model = train(ModelKind::DecisionTree, x, y, 2);
    CHECK_THROWS_AS(model.predict(testutil::random_matrix(5, 4, 2)), DataError);
}

TEST_CASE("degenerate mlp configs are rejected") {
    const Matrix x = testutil::random_matrix(10, 2, 1);
    const std::vector<int> y = {0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
    TrainConfig config;
    config.mlp.hidden = {0};
    CHECK_THROWS_AS(train(ModelKind::Mlp, x, y, 2, config), ConfigError);
}
