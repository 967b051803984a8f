#include "wsnids/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "wsnids/errors.hpp"
#include "wsnids/parallel.hpp"
#include "wsnids/report_io.hpp"
#include "wsnids/rng.hpp"
#include "wsnids/standardize.hpp"

namespace wsnids {

namespace {

constexpr std::uint64_t kFoldStream = 0x666F6C64ULL;
constexpr std::uint64_t kBalanceStream = 0x62616CULL;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag0, std::uint64_t tag1 = 0) {
    std::uint64_t s = detail::mix64(seed + 0x9E3779B97F4A7C15ULL);
    s = detail::mix64(s ^ (tag0 + 0xD1B54A32D192ED03ULL));
    return detail::mix64(s ^ (tag1 + 0x8CB92BA72F3D8DD7ULL));
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

std::vector<int> argmax_labels(const Matrix& scores) {
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

std::vector<int> select_labels(const std::vector<int>& labels,
                               const std::vector<std::size_t>& ids) {
    std::vector<int> out;
    out.reserve(ids.size());
    for (const std::size_t id : ids) out.push_back(labels[id]);
    return out;
}

// Streams plot-ready CSVs (one row per ROC point / confusion cell / fold
// metric) while the folds run, so curves never have to be held in memory.
class PlotWriter {
public:
    explicit PlotWriter(const std::string& out_dir) {
        std::filesystem::create_directories(out_dir);
        const std::filesystem::path dir(out_dir);
        roc_.open(dir / "roc_points.csv");
        confusion_.open(dir / "confusion_cells.csv");
        per_fold_.open(dir / "metrics_per_fold.csv");
        if (!roc_ || !confusion_ || !per_fold_)
            throw DataError("cannot create output files in " + out_dir);
        roc_ << "model,fold,class,threshold,fpr,tpr\n";
        confusion_ << "model,fold,true,pred,count\n";
        per_fold_ << "model,fold,accuracy,precision,recall,f1,mae,mse,rmse,auc\n";
    }

    void add(const std::string& model, int fold, const std::vector<int>& y_test,
             const Matrix& scores, const ModelOutcome& outcome) {
        const ConfusionMatrix& cm = outcome.confusion;
        for (int t = 0; t < cm.n_classes; ++t)
            for (int p = 0; p < cm.n_classes; ++p)
                confusion_ << model << ',' << fold << ',' << t << ',' << p << ',' << cm.at(t, p)
                           << '\n';

        const MetricsReport& m = outcome.metrics;
        per_fold_ << model << ',' << fold << ',' << m.accuracy << ',' << m.precision << ','
                  << m.recall << ',' << m.f1 << ',' << m.mae << ',' << m.mse << ',' << m.rmse
                  << ',' << m.auc << '\n';

        const MulticlassRoc roc = one_vs_rest_roc(y_test, scores);
        for (std::size_t c = 0; c < roc.per_class.size(); ++c) {
            if (roc.skipped[c]) continue;
            const RocCurve& curve = roc.per_class[c];
            for (std::size_t p = 0; p < curve.fpr.size(); ++p)
                roc_ << model << ',' << fold << ',' << c << ',' << curve.thresholds[p] << ','
                     << curve.fpr[p] << ',' << curve.tpr[p] << '\n';
        }
    }

private:
    std::ofstream roc_;
    std::ofstream confusion_;
    std::ofstream per_fold_;
};

}  // namespace

std::string to_string(BalanceMode mode) {
    return mode == BalanceMode::None ? "none" : "smotetomek";
}

BalanceMode balance_mode_from_string(const std::string& s) {
    if (s == "none") return BalanceMode::None;
    if (s == "smotetomek" || s == "smote_tomek" || s == "smote-tomek")
        return BalanceMode::SmoteTomek;
    throw ConfigError("unknown balance mode '" + s + "' (expected none or smotetomek)");
}

std::string to_string(LeakageMode mode) {
    return mode == LeakageMode::PaperFaithful ? "paper-faithful" : "strict";
}

LeakageMode leakage_mode_from_string(const std::string& s) {
    if (s == "paper-faithful" || s == "paper_faithful" || s == "faithful")
        return LeakageMode::PaperFaithful;
    if (s == "strict") return LeakageMode::Strict;
    throw ConfigError("unknown leakage mode '" + s + "' (expected paper-faithful or strict)");
}

std::vector<FoldSplit> split_folds(std::size_t n_rows, int folds, bool shuffle,
                                   std::uint64_t seed) {
    if (folds < 2) throw ConfigError("split_folds: folds must be >= 2");
    if (static_cast<std::size_t>(folds) > n_rows)
        throw ConfigError("split_folds: more folds than rows");

    std::vector<std::size_t> ids(n_rows);
    std::iota(ids.begin(), ids.end(), 0);
    if (shuffle) {
        Rng rng = derive_rng(seed, kFoldStream, 0);
        rng.shuffle(ids);
    }

    const std::size_t base = n_rows / static_cast<std::size_t>(folds);
    const std::size_t rem = n_rows % static_cast<std::size_t>(folds);

    std::vector<FoldSplit> splits(static_cast<std::size_t>(folds));
    std::size_t start = 0;
    for (int f = 0; f < folds; ++f) {
        const std::size_t size = base + (static_cast<std::size_t>(f) < rem ? 1 : 0);
        auto& split = splits[static_cast<std::size_t>(f)];
        split.test_ids.assign(ids.begin() + start, ids.begin() + start + size);
        split.train_ids.reserve(n_rows - size);
        split.train_ids.insert(split.train_ids.end(), ids.begin(), ids.begin() + start);
        split.train_ids.insert(split.train_ids.end(), ids.begin() + start + size, ids.end());
        // canonical ascending order: training results must not depend on the
        // incidental position of a row inside the shuffled slice
        std::sort(split.test_ids.begin(), split.test_ids.end());
        std::sort(split.train_ids.begin(), split.train_ids.end());
        start += size;
    }
    return splits;
}

std::vector<FoldSplit> split_folds_stratified(const std::vector<int>& labels, int folds,
                                              bool shuffle, std::uint64_t seed) {
    if (folds < 2) throw ConfigError("split_folds: folds must be >= 2");
    if (static_cast<std::size_t>(folds) > labels.size())
        throw ConfigError("split_folds: more folds than rows");

    std::vector<std::size_t> ids(labels.size());
    std::iota(ids.begin(), ids.end(), 0);
    if (shuffle) {
        Rng rng = derive_rng(seed, kFoldStream, 1);
        rng.shuffle(ids);
    }

    int n_classes = 0;
    for (const int c : labels) n_classes = std::max(n_classes, c + 1);
    std::vector<std::vector<std::size_t>> per_class(static_cast<std::size_t>(n_classes));
    for (const std::size_t id : ids) per_class[static_cast<std::size_t>(labels[id])].push_back(id);

    std::vector<FoldSplit> splits(static_cast<std::size_t>(folds));
    std::size_t cursor = 0;
    for (const auto& members : per_class) {
        for (const std::size_t id : members) {
            splits[cursor % static_cast<std::size_t>(folds)].test_ids.push_back(id);
            ++cursor;
        }
    }
    for (int f = 0; f < folds; ++f) {
        auto& split = splits[static_cast<std::size_t>(f)];
        std::sort(split.test_ids.begin(), split.test_ids.end());
        split.train_ids.reserve(labels.size() - split.test_ids.size());
        std::size_t t = 0;
        for (std::size_t id = 0; id < labels.size(); ++id) {
            if (t < split.test_ids.size() && split.test_ids[t] == id) {
                ++t;
            } else {
                split.train_ids.push_back(id);
            }
        }
    }
    return splits;
}

MetricsReport aggregate_folds(const std::vector<MetricsReport>& fold_metrics) {
    if (fold_metrics.empty()) throw ConfigError("aggregate_folds: empty input");

    MetricsReport mean;
    mean.averaging = fold_metrics.front().averaging;
    const std::size_t n_classes = fold_metrics.front().per_class.size();
    mean.per_class.resize(n_classes);

    const double inv = 1.0 / static_cast<double>(fold_metrics.size());
    for (const auto& m : fold_metrics) {
        mean.accuracy += m.accuracy * inv;
        mean.precision += m.precision * inv;
        mean.recall += m.recall * inv;
        mean.f1 += m.f1 * inv;
        mean.mae += m.mae * inv;
        mean.mse += m.mse * inv;
        mean.rmse += m.rmse * inv;
        mean.auc += m.auc * inv;
        mean.zero_division_flag = mean.zero_division_flag || m.zero_division_flag;
        for (std::size_t c = 0; c < n_classes && c < m.per_class.size(); ++c) {
            mean.per_class[c].precision += m.per_class[c].precision * inv;
            mean.per_class[c].recall += m.per_class[c].recall * inv;
            mean.per_class[c].f1 += m.per_class[c].f1 * inv;
            mean.per_class[c].support += m.per_class[c].support;
            mean.per_class[c].zero_division =
                mean.per_class[c].zero_division || m.per_class[c].zero_division;
        }
    }
    return mean;
}

ExperimentReport run_experiment_on(const Dataset& dataset, const ExperimentConfig& config) {
    const auto t_start = std::chrono::steady_clock::now();
    if (config.models.empty()) throw ConfigError("run_experiment: empty model list");
    if (config.folds < 2) throw ConfigError("run_experiment: folds must be >= 2");

    std::vector<ModelKind> models;
    for (const ModelKind kind : config.models) {
        if (std::find(models.begin(), models.end(), kind) == models.end())
            models.push_back(kind);
    }

    const int threads = config.threads > 0 ? config.threads : default_thread_count();
    const int n_classes = dataset.label_map.n_classes();
    const Averaging averaging =
        config.task == Task::Binary ? Averaging::BinaryPositive : Averaging::Macro;

    ExperimentReport report;
    report.config = config;
    report.n_rows = dataset.n_rows();
    report.n_features = dataset.n_features();
    report.label_map = dataset.label_map;
    report.class_counts = class_distribution(dataset.labels, n_classes);

    if (config.leakage == LeakageMode::PaperFaithful) {
        report.warnings.push_back(
            "paper-faithful mode standardizes and balances the full dataset before fold "
            "splitting; test folds share those statistics (use --leakage-mode strict to avoid "
            "this)");
    }

    // Stage the data according to the leakage mode.
    Matrix features;
    std::vector<int> labels;
    if (config.leakage == LeakageMode::PaperFaithful) {
        const StandardizerParams params = fit_standardizer(dataset.features, config.sample_std);
        features = transform(params, dataset.features);
        labels = dataset.labels;
        report.standardizer = params;
        if (config.balance == BalanceMode::SmoteTomek) {
            SmoteParams smote_params;
            smote_params.k_neighbors = config.smote_k;
            smote_params.seed = derive_seed(config.seed, kBalanceStream);
            SmoteTomekResult balanced =
                smote_tomek(features, labels, smote_params, config.tomek_policy, threads);
            features = std::move(balanced.features);
            labels = std::move(balanced.labels);
            report.resample = std::move(balanced.report);
        }
    } else {
        features = dataset.features;
        labels = dataset.labels;
    }

    const std::vector<FoldSplit> splits =
        config.stratified
            ? split_folds_stratified(labels, config.folds, config.shuffle, config.seed)
            : split_folds(features.rows(), config.folds, config.shuffle, config.seed);

    std::map<std::string, std::vector<MetricsReport>> per_model_fold_metrics;
    struct Pool {
        std::vector<int> y_true;
        std::vector<int> y_pred;
        Matrix scores;
    };
    std::map<std::string, Pool> pools;

    std::optional<PlotWriter> plots;
    if (!config.out_dir.empty()) plots.emplace(config.out_dir);

    for (std::size_t f = 0; f < splits.size(); ++f) {
        const FoldSplit& split = splits[f];

        Matrix x_train = features.select_rows(split.train_ids);
        Matrix x_test = features.select_rows(split.test_ids);
        std::vector<int> y_train = select_labels(labels, split.train_ids);
        const std::vector<int> y_test = select_labels(labels, split.test_ids);

        FoldResult fold_result;
        fold_result.fold = static_cast<int>(f);

        if (config.leakage == LeakageMode::Strict) {
            const StandardizerParams params = fit_standardizer(x_train, config.sample_std);
            transform_in_place(params, x_train);
            transform_in_place(params, x_test);
            fold_result.standardizer = params;
            if (config.balance == BalanceMode::SmoteTomek) {
                SmoteParams smote_params;
                smote_params.k_neighbors = config.smote_k;
                smote_params.seed = derive_seed(config.seed, kBalanceStream, f + 1);
                SmoteTomekResult balanced =
                    smote_tomek(x_train, y_train, smote_params, config.tomek_policy, threads);
                x_train = std::move(balanced.features);
                y_train = std::move(balanced.labels);
            }
        }

        for (std::size_t m = 0; m < models.size(); ++m) {
            const ModelKind kind = models[m];
            const std::string name = to_string(kind);
            ModelOutcome outcome;
            try {
                TrainConfig train_config = config.train;
                train_config.seed = derive_seed(config.seed, f, static_cast<std::uint64_t>(kind));

                const auto t_train = std::chrono::steady_clock::now();
                const Model model = train(kind, x_train, y_train, n_classes, train_config, threads);
                outcome.train_ms = elapsed_ms(t_train);

                const auto t_predict = std::chrono::steady_clock::now();
                const Matrix scores = model.predict_scores(x_test, threads);
                outcome.predict_ms = elapsed_ms(t_predict);

                const std::vector<int> y_pred = argmax_labels(scores);
                outcome.metrics =
                    evaluate_predictions(y_test, y_pred, scores, n_classes, averaging);
                outcome.confusion = confusion_matrix(y_test, y_pred, n_classes);
                outcome.ok = true;

                if (plots) plots->add(name, static_cast<int>(f), y_test, scores, outcome);

                per_model_fold_metrics[name].push_back(outcome.metrics);
                auto& pool = pools[name];
                pool.y_true.insert(pool.y_true.end(), y_test.begin(), y_test.end());
                pool.y_pred.insert(pool.y_pred.end(), y_pred.begin(), y_pred.end());
                if (pool.scores.empty())
                    pool.scores = Matrix(0, static_cast<std::size_t>(n_classes));
                for (std::size_t i = 0; i < scores.rows(); ++i)
                    pool.scores.push_row(scores.row(i));
            } catch (const std::exception& e) {
                outcome.ok = false;
                outcome.error = e.what();
                report.warnings.push_back("fold " + std::to_string(f) + " model " + name +
                                          " failed: " + e.what());
            }
            fold_result.models.emplace(name, std::move(outcome));
        }
        report.folds.push_back(std::move(fold_result));
    }

    for (const auto& [name, fold_metrics] : per_model_fold_metrics) {
        report.fold_means[name] = aggregate_folds(fold_metrics);
        const auto& pool = pools[name];
        report.pooled[name] =
            evaluate_predictions(pool.y_true, pool.y_pred, pool.scores, n_classes, averaging);
    }

    report.total_ms = elapsed_ms(t_start);
    if (!config.out_dir.empty()) write_experiment_outputs(report, config.out_dir);
    return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    if (config.data_path.empty()) throw ConfigError("run_experiment: data path is required");

    std::string label_column = config.label_column;
    if (label_column.empty()) {
        label_column = detect_label_column(read_csv_header(config.data_path));
        if (label_column.empty())
            throw DataError(
                "could not auto-detect the label column; pass it explicitly");
    }

    RawDataset raw = load_csv(config.data_path, label_column, config.drop_columns);
    Dataset dataset = make_dataset(std::move(raw), config.task, config.normal_class);

    ExperimentConfig resolved = config;
    resolved.label_column = label_column;
    return run_experiment_on(dataset, resolved);
}

}  // namespace wsnids
