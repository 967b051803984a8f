#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wsnids/matrix.hpp"

namespace wsnids {

// Row = true class, column = predicted class.
struct ConfusionMatrix {
    int n_classes = 0;
    std::vector<std::int64_t> counts;

    ConfusionMatrix() = default;
    explicit ConfusionMatrix(int k)
        : n_classes(k), counts(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), 0) {}

    std::int64_t& at(int t, int p) { return counts[static_cast<std::size_t>(t) * n_classes + p]; }
    std::int64_t at(int t, int p) const {
        return counts[static_cast<std::size_t>(t) * n_classes + p];
    }
    std::int64_t total() const;

    struct OneVsRest {
        std::int64_t tp = 0, fn = 0, fp = 0, tn = 0;
    };
    OneVsRest one_vs_rest(int c) const;

    ConfusionMatrix& operator+=(const ConfusionMatrix& other);
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion_matrix(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                                 int n_classes);

enum class Averaging { Macro, Weighted, BinaryPositive };

std::string to_string(Averaging averaging);
Averaging averaging_from_string(const std::string& s);

struct PerClassMetrics {
    double precision = 0.0;  // percent
    double recall = 0.0;     // percent
    double f1 = 0.0;         // percent
    std::int64_t support = 0;
    bool zero_division = false;  // a 0/0 was coerced to 0
};

struct BasicMetrics {
    double accuracy = 0.0;   // percent
    double precision = 0.0;  // percent, averaged per `averaging`
    double recall = 0.0;     // percent
    double f1 = 0.0;         // percent
    Averaging averaging = Averaging::Macro;
    std::vector<PerClassMetrics> per_class;
    bool zero_division_flag = false;
};

BasicMetrics basic_metrics(const ConfusionMatrix& cm, Averaging averaging);

// MAE / MSE / RMSE over integer-encoded labels, returned as raw fractions.
struct RegressionErrors {
    double mae = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
};

RegressionErrors regression_style_errors(const std::vector<int>& y_true,
                                         const std::vector<int>& y_pred);

struct RocCurve {
    std::vector<double> fpr;
    std::vector<double> tpr;
    std::vector<double> thresholds;  // thresholds[0] is +infinity
    double auc = 0.0;
};

// Threshold sweep over distinct scores descending; AUC by the trapezoidal
// rule. Requires at least one positive and one negative label.
RocCurve roc_curve(const std::vector<int>& y_true_binary,
                   const std::vector<double>& scores_positive);

struct MulticlassRoc {
    std::vector<RocCurve> per_class;   // some may be empty (see skipped)
    std::vector<bool> skipped;         // class had no positives or no negatives
    double macro_auc = 0.0;            // mean over non-skipped classes
};

MulticlassRoc one_vs_rest_roc(const std::vector<int>& y_true, const Matrix& scores);

// Everything the experiment reports for one model on one test set.
struct MetricsReport {
    double accuracy = 0.0;   // percent
    double precision = 0.0;  // percent
    double recall = 0.0;     // percent
    double f1 = 0.0;         // percent
    double mae = 0.0;        // percent scale (100 * fraction)
    double mse = 0.0;        // percent scale
    double rmse = 0.0;       // percent scale
    double auc = 0.0;        // in [0, 1]
    Averaging averaging = Averaging::Macro;
    std::vector<PerClassMetrics> per_class;
    bool zero_division_flag = false;
};

// Assembles a MetricsReport from predictions and scores. For binary tasks the
// AUC comes from the positive-class score column; multiclass uses the macro
// one-vs-rest AUC.
MetricsReport evaluate_predictions(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                                   const Matrix& scores, int n_classes, Averaging averaging);

}  // namespace wsnids
