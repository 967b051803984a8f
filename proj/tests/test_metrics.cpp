#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "wsnids/errors.hpp"
#include "wsnids/metrics.hpp"

using namespace wsnids;

TEST_CASE("hand-counted binary confusion matrix") {
    // truth [1,1,0,0], pred [1,0,0,0]
    const ConfusionMatrix cm = confusion_matrix({1, 1, 0, 0}, {1, 0, 0, 0}, 2);
    const auto ovr = cm.one_vs_rest(1);
    CHECK(ovr.tp == 1);
    CHECK(ovr.fn == 1);
    CHECK(ovr.fp == 0);
    CHECK(ovr.tn == 2);
    CHECK(cm.total() == 4);
}

TEST_CASE("perfect predictions give a diagonal matrix") {
    const std::vector<int> y = {0, 1, 2, 1, 0, 2};
    const ConfusionMatrix cm = confusion_matrix(y, y, 3);
    for (int t = 0; t < 3; ++t)
        for (int p = 0; p < 3; ++p)
            CHECK(cm.at(t, p) == (t == p ? 2 : 0));
}

TEST_CASE("confusion matrix error paths") {
    CHECK_THROWS_AS(confusion_matrix({0, 1}, {0}, 2), DataError);
    CHECK_THROWS_AS(confusion_matrix({0, 2}, {0, 1}, 2), DataError);
}

TEST_CASE("row sums equal class supports") {
    const std::vector<int> y_true = {0, 0, 1, 1, 1, 2};
    const std::vector<int> y_pred = {0, 1, 1, 1, 0, 2};
    const ConfusionMatrix cm = confusion_matrix(y_true, y_pred, 3);
    std::vector<std::int64_t> support(3, 0);
    for (const int c : y_true) ++support[static_cast<std::size_t>(c)];
    for (int t = 0; t < 3; ++t) {
        std::int64_t row_sum = 0;
        for (int p = 0; p < 3; ++p) row_sum += cm.at(t, p);
        CHECK(row_sum == support[static_cast<std::size_t>(t)]);
        const auto ovr = cm.one_vs_rest(t);
        CHECK(ovr.tp + ovr.fn == support[static_cast<std::size_t>(t)]);
    }
}

TEST_CASE("basic metrics on the hand-evaluated 4-count case") {
    ConfusionMatrix cm(2);
    cm.at(1, 1) = 1;  // TP
    cm.at(1, 0) = 1;  // FN
    cm.at(0, 1) = 0;  // FP
    cm.at(0, 0) = 2;  // TN
    const BasicMetrics m = basic_metrics(cm, Averaging::BinaryPositive);
    CHECK(m.accuracy == doctest::Approx(75.0));
    CHECK(m.precision == doctest::Approx(100.0));
    CHECK(m.recall == doctest::Approx(50.0));
    CHECK(m.f1 == doctest::Approx(100.0 * 2.0 / 3.0));
}

TEST_CASE("perfect matrix scores 100 everywhere") {
    ConfusionMatrix cm(3);
    cm.at(0, 0) = 5;
    cm.at(1, 1) = 7;
    cm.at(2, 2) = 2;
    for (const Averaging avg : {Averaging::Macro, Averaging::Weighted}) {
        const BasicMetrics m = basic_metrics(cm, avg);
        CHECK(m.accuracy == doctest::Approx(100.0));
        CHECK(m.precision == doctest::Approx(100.0));
        CHECK(m.recall == doctest::Approx(100.0));
        CHECK(m.f1 == doctest::Approx(100.0));
    }
}

TEST_CASE("published RF binary confusion counts reproduce the headline accuracy") {
    ConfusionMatrix cm(2);
    cm.at(1, 1) = 33873;  // TP
    cm.at(0, 0) = 33898;  // TN
    cm.at(0, 1) = 77;     // FP
    cm.at(1, 0) = 74;     // FN
    const BasicMetrics m = basic_metrics(cm, Averaging::BinaryPositive);
    CHECK(m.accuracy == doctest::Approx(100.0 * 67771.0 / 67922.0).epsilon(1e-12));
    CHECK(std::round(m.accuracy * 100.0) / 100.0 == doctest::Approx(99.78));
    CHECK(m.precision == doctest::Approx(100.0 * 33873.0 / 33950.0).epsilon(1e-12));
}

TEST_CASE("zero-denominator classes contribute zero with a flag") {
    ConfusionMatrix cm(3);
    cm.at(0, 0) = 4;
    cm.at(1, 0) = 3;  // class 1 never predicted, class 2 absent entirely
    const BasicMetrics m = basic_metrics(cm, Averaging::Macro);
    CHECK(m.zero_division_flag);
    CHECK(m.per_class[1].precision == 0.0);
    CHECK(m.per_class[2].recall == 0.0);
}

TEST_CASE("f1 is the harmonic mean whenever precision and recall are nonzero") {
    const ConfusionMatrix cm = confusion_matrix({0, 0, 1, 1, 1}, {0, 1, 1, 1, 0}, 2);
    const BasicMetrics m = basic_metrics(cm, Averaging::Macro);
    for (const auto& pc : m.per_class) {
        if (pc.precision > 0.0 && pc.recall > 0.0) {
            CHECK(pc.f1 ==
                  doctest::Approx(2.0 * pc.precision * pc.recall / (pc.precision + pc.recall)));
        }
    }
}

TEST_CASE("regression-style errors on integer labels") {
    SUBCASE("perfect predictions") {
        const RegressionErrors e = regression_style_errors({0, 1, 2}, {0, 1, 2});
        CHECK(e.mae == 0.0);
        CHECK(e.mse == 0.0);
        CHECK(e.rmse == 0.0);
    }
    SUBCASE("one binary error in four") {
        const RegressionErrors e = regression_style_errors({0, 0, 1, 1}, {0, 1, 1, 1});
        CHECK(e.mae == doctest::Approx(0.25));
        CHECK(e.mse == doctest::Approx(0.25));
        CHECK(e.rmse == doctest::Approx(0.5));
    }
    SUBCASE("binary mae equals one minus accuracy") {
        const std::vector<int> y_true = {0, 1, 1, 0, 1, 0, 0, 1};
        const std::vector<int> y_pred = {0, 1, 0, 1, 1, 0, 1, 1};
        const RegressionErrors e = regression_style_errors(y_true, y_pred);
        const BasicMetrics m =
            basic_metrics(confusion_matrix(y_true, y_pred, 2), Averaging::BinaryPositive);
        CHECK(e.mae == doctest::Approx(1.0 - m.accuracy / 100.0).epsilon(1e-12));
    }
    SUBCASE("length mismatch") {
        CHECK_THROWS_AS(regression_style_errors({0}, {0, 1}), DataError);
    }
}

TEST_CASE("roc endpoints and known aucs") {
    SUBCASE("perfectly separating scores") {
        const RocCurve c = roc_curve({0, 0, 1, 1}, {0.1, 0.2, 0.8, 0.9});
        CHECK(c.auc == doctest::Approx(1.0));
        CHECK(c.fpr.front() == 0.0);
        CHECK(c.tpr.front() == 0.0);
        CHECK(c.fpr.back() == 1.0);
        CHECK(c.tpr.back() == 1.0);
    }
    SUBCASE("constant scores give the chance diagonal") {
        const RocCurve c = roc_curve({0, 1, 0, 1}, {0.5, 0.5, 0.5, 0.5});
        CHECK(c.auc == doctest::Approx(0.5));
        CHECK(c.fpr.size() == 2);  // single segment (0,0) -> (1,1)
    }
    SUBCASE("single-class truth is an error") {
        CHECK_THROWS_AS(roc_curve({1, 1}, {0.2, 0.4}), DataError);
    }
    SUBCASE("curve is monotone") {
        const Matrix scores = testutil::random_matrix(200, 1, 4);
        std::vector<int> y(200);
        wsnids::Rng rng(6);
        for (auto& v : y) v = static_cast<int>(rng.below(2));
        std::vector<double> s(200);
        for (std::size_t i = 0; i < 200; ++i) s[i] = scores.at(i, 0);
        const RocCurve c = roc_curve(y, s);
        for (std::size_t i = 1; i < c.fpr.size(); ++i) {
            CHECK(c.fpr[i] >= c.fpr[i - 1]);
            CHECK(c.tpr[i] >= c.tpr[i - 1]);
        }
    }
}

TEST_CASE("trapezoidal auc equals the pair-count oracle") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const std::size_t n = 20 + (seed * 29) % 280;
        wsnids::Rng rng(seed);
        std::vector<int> y(n);
        std::vector<double> s(n);
        bool has_pos = false, has_neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = static_cast<int>(rng.below(2));
            (y[i] ? has_pos : has_neg) = true;
            // coarse grid so score ties actually happen
            s[i] = std::floor(rng.unit() * 8.0) / 8.0;
        }
        if (!has_pos || !has_neg) continue;
        const double trap = roc_curve(y, s).auc;
        const double oracle = testutil::pair_count_auc(y, s);
        CHECK(std::abs(trap - oracle) < 1e-12);

        // invariance under a strictly increasing transform
        std::vector<double> cubed(n);
        for (std::size_t i = 0; i < n; ++i) cubed[i] = s[i] * s[i] * s[i];
        CHECK(std::abs(roc_curve(y, cubed).auc - trap) < 1e-12);
    }
}

TEST_CASE("one-vs-rest multiclass roc") {
    // class 2 absent from the truth: skipped, macro over the rest
    const std::vector<int> y = {0, 0, 1, 1};
    Matrix scores(4, 3);
    const double rows[4][3] = {{0.8, 0.1, 0.1}, {0.7, 0.2, 0.1}, {0.2, 0.7, 0.1}, {0.1, 0.8, 0.1}};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 3; ++j) scores.at(i, j) = rows[i][j];
    const MulticlassRoc roc = one_vs_rest_roc(y, scores);
    CHECK(roc.skipped[2]);
    CHECK_FALSE(roc.skipped[0]);
    CHECK(roc.macro_auc == doctest::Approx(1.0));
}

TEST_CASE("evaluate_predictions assembles percent-scale errors") {
    const std::vector<int> y_true = {0, 0, 1, 1};
    const std::vector<int> y_pred = {0, 1, 1, 1};
    Matrix scores(4, 2);
    for (std::size_t i = 0; i < 4; ++i) {
        scores.at(i, 1) = y_pred[i] == 1 ? 0.9 : 0.2;
        scores.at(i, 0) = 1.0 - scores.at(i, 1);
    }
    const MetricsReport r = evaluate_predictions(y_true, y_pred, scores, 2,
                                                 Averaging::BinaryPositive);
    CHECK(r.accuracy == doctest::Approx(75.0));
    CHECK(r.mae == doctest::Approx(25.0));
    CHECK(r.mse == doctest::Approx(25.0));
    CHECK(r.rmse == doctest::Approx(50.0));
    CHECK(r.auc == doctest::Approx(0.75));
}
