#include "wsnids/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wsnids/errors.hpp"

namespace wsnids {

std::int64_t ConfusionMatrix::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

ConfusionMatrix::OneVsRest ConfusionMatrix::one_vs_rest(int c) const {
    OneVsRest r;
    r.tp = at(c, c);
    for (int p = 0; p < n_classes; ++p) {
        if (p != c) r.fn += at(c, p);
    }
    for (int t = 0; t < n_classes; ++t) {
        if (t != c) r.fp += at(t, c);
    }
    r.tn = total() - r.tp - r.fn - r.fp;
    return r;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    if (n_classes != other.n_classes) throw DataError("ConfusionMatrix: size mismatch");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    return *this;
}

ConfusionMatrix confusion_matrix(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                                 int n_classes) {
    if (y_true.size() != y_pred.size())
        throw DataError("confusion_matrix: length mismatch between truth and predictions");
    if (n_classes < 1) throw ConfigError("confusion_matrix: n_classes must be >= 1");

    ConfusionMatrix cm(n_classes);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const int t = y_true[i];
        const int p = y_pred[i];
        if (t < 0 || t >= n_classes || p < 0 || p >= n_classes)
            throw DataError("confusion_matrix: label code out of range at row " +
                            std::to_string(i));
        ++cm.at(t, p);
    }
    return cm;
}

std::string to_string(Averaging averaging) {
    switch (averaging) {
        case Averaging::Macro: return "macro";
        case Averaging::Weighted: return "weighted";
        case Averaging::BinaryPositive: return "binary";
    }
    return "macro";
}

Averaging averaging_from_string(const std::string& s) {
    if (s == "macro") return Averaging::Macro;
    if (s == "weighted") return Averaging::Weighted;
    if (s == "binary" || s == "binary-positive") return Averaging::BinaryPositive;
    throw ConfigError("unknown averaging '" + s + "' (expected macro, weighted or binary)");
}

BasicMetrics basic_metrics(const ConfusionMatrix& cm, Averaging averaging) {
    const std::int64_t total = cm.total();
    if (total <= 0) throw DataError("basic_metrics: empty confusion matrix");
    if (averaging == Averaging::BinaryPositive && cm.n_classes != 2)
        throw ConfigError("basic_metrics: binary averaging needs exactly 2 classes");

    BasicMetrics out;
    out.averaging = averaging;

    std::int64_t diag = 0;
    for (int c = 0; c < cm.n_classes; ++c) diag += cm.at(c, c);
    out.accuracy = 100.0 * static_cast<double>(diag) / static_cast<double>(total);

    out.per_class.resize(static_cast<std::size_t>(cm.n_classes));
    for (int c = 0; c < cm.n_classes; ++c) {
        const auto ovr = cm.one_vs_rest(c);
        auto& pc = out.per_class[static_cast<std::size_t>(c)];
        pc.support = ovr.tp + ovr.fn;
        if (ovr.tp + ovr.fp > 0) {
            pc.precision = 100.0 * static_cast<double>(ovr.tp) /
                           static_cast<double>(ovr.tp + ovr.fp);
        } else {
            pc.zero_division = true;
        }
        if (ovr.tp + ovr.fn > 0) {
            pc.recall = 100.0 * static_cast<double>(ovr.tp) /
                        static_cast<double>(ovr.tp + ovr.fn);
        } else {
            pc.zero_division = true;
        }
        if (pc.precision + pc.recall > 0.0) {
            pc.f1 = 2.0 * pc.precision * pc.recall / (pc.precision + pc.recall);
        }
        out.zero_division_flag = out.zero_division_flag || pc.zero_division;
    }

    if (averaging == Averaging::BinaryPositive) {
        out.precision = out.per_class[1].precision;
        out.recall = out.per_class[1].recall;
        out.f1 = out.per_class[1].f1;
    } else if (averaging == Averaging::Macro) {
        for (const auto& pc : out.per_class) {
            out.precision += pc.precision;
            out.recall += pc.recall;
            out.f1 += pc.f1;
        }
        const double k = static_cast<double>(cm.n_classes);
        out.precision /= k;
        out.recall /= k;
        out.f1 /= k;
    } else {
        for (const auto& pc : out.per_class) {
            const double w = static_cast<double>(pc.support) / static_cast<double>(total);
            out.precision += w * pc.precision;
            out.recall += w * pc.recall;
            out.f1 += w * pc.f1;
        }
    }
    return out;
}

RegressionErrors regression_style_errors(const std::vector<int>& y_true,
                                         const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size())
        throw DataError("regression_style_errors: length mismatch");
    if (y_true.empty()) throw DataError("regression_style_errors: empty input");

    RegressionErrors out;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double d = static_cast<double>(y_pred[i]) - static_cast<double>(y_true[i]);
        out.mae += std::abs(d);
        out.mse += d * d;
    }
    const double n = static_cast<double>(y_true.size());
    out.mae /= n;
    out.mse /= n;
    out.rmse = std::sqrt(out.mse);
    return out;
}

RocCurve roc_curve(const std::vector<int>& y_true_binary,
                   const std::vector<double>& scores_positive) {
    const std::size_t n = y_true_binary.size();
    if (n != scores_positive.size()) throw DataError("roc_curve: length mismatch");

    std::int64_t positives = 0;
    for (int y : y_true_binary) {
        if (y != 0 && y != 1) throw DataError("roc_curve: labels must be 0 or 1");
        positives += y;
    }
    const std::int64_t negatives = static_cast<std::int64_t>(n) - positives;
    if (positives == 0 || negatives == 0)
        throw DataError("roc_curve: need at least one positive and one negative label");
    for (double s : scores_positive) {
        if (!std::isfinite(s)) throw DataError("roc_curve: scores must be finite");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores_positive[a] != scores_positive[b])
            return scores_positive[a] > scores_positive[b];
        return a < b;
    });

    RocCurve curve;
    curve.fpr.push_back(0.0);
    curve.tpr.push_back(0.0);
    curve.thresholds.push_back(std::numeric_limits<double>::infinity());

    std::int64_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < n) {
        const double threshold = scores_positive[order[i]];
        // everything scoring >= threshold is predicted positive
        while (i < n && scores_positive[order[i]] == threshold) {
            if (y_true_binary[order[i]] == 1) {
                ++tp;
            } else {
                ++fp;
            }
            ++i;
        }
        curve.fpr.push_back(static_cast<double>(fp) / static_cast<double>(negatives));
        curve.tpr.push_back(static_cast<double>(tp) / static_cast<double>(positives));
        curve.thresholds.push_back(threshold);
    }

    double auc = 0.0;
    for (std::size_t p = 1; p < curve.fpr.size(); ++p) {
        auc += (curve.fpr[p] - curve.fpr[p - 1]) * (curve.tpr[p] + curve.tpr[p - 1]) * 0.5;
    }
    curve.auc = auc;
    return curve;
}

MulticlassRoc one_vs_rest_roc(const std::vector<int>& y_true, const Matrix& scores) {
    if (scores.rows() != y_true.size()) throw DataError("one_vs_rest_roc: length mismatch");
    const int k = static_cast<int>(scores.cols());

    MulticlassRoc out;
    out.per_class.resize(static_cast<std::size_t>(k));
    out.skipped.assign(static_cast<std::size_t>(k), false);

    double auc_sum = 0.0;
    int auc_count = 0;
    for (int c = 0; c < k; ++c) {
        std::vector<int> y_bin(y_true.size());
        std::vector<double> s(y_true.size());
        std::int64_t pos = 0;
        for (std::size_t i = 0; i < y_true.size(); ++i) {
            y_bin[i] = y_true[i] == c ? 1 : 0;
            pos += y_bin[i];
            s[i] = scores.at(i, static_cast<std::size_t>(c));
        }
        if (pos == 0 || pos == static_cast<std::int64_t>(y_true.size())) {
            out.skipped[static_cast<std::size_t>(c)] = true;
            continue;
        }
        out.per_class[static_cast<std::size_t>(c)] = roc_curve(y_bin, s);
        auc_sum += out.per_class[static_cast<std::size_t>(c)].auc;
        ++auc_count;
    }
    out.macro_auc = auc_count > 0 ? auc_sum / auc_count : 0.0;
    return out;
}

MetricsReport evaluate_predictions(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                                   const Matrix& scores, int n_classes, Averaging averaging) {
    const ConfusionMatrix cm = confusion_matrix(y_true, y_pred, n_classes);
    const BasicMetrics basic = basic_metrics(cm, averaging);
    const RegressionErrors err = regression_style_errors(y_true, y_pred);

    MetricsReport report;
    report.accuracy = basic.accuracy;
    report.precision = basic.precision;
    report.recall = basic.recall;
    report.f1 = basic.f1;
    report.averaging = basic.averaging;
    report.per_class = basic.per_class;
    report.zero_division_flag = basic.zero_division_flag;
    report.mae = 100.0 * err.mae;
    report.mse = 100.0 * err.mse;
    report.rmse = 100.0 * err.rmse;

    if (scores.rows() == y_true.size() && scores.cols() == static_cast<std::size_t>(n_classes)) {
        if (n_classes == 2) {
            std::vector<double> pos(y_true.size());
            for (std::size_t i = 0; i < y_true.size(); ++i) pos[i] = scores.at(i, 1);
            bool has_pos = false, has_neg = false;
            for (int y : y_true) (y == 1 ? has_pos : has_neg) = true;
            if (has_pos && has_neg) report.auc = roc_curve(y_true, pos).auc;
        } else {
            report.auc = one_vs_rest_roc(y_true, scores).macro_auc;
        }
    }
    return report;
}

}  // namespace wsnids
