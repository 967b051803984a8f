#include "wsnids/report_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wsnids/errors.hpp"

namespace wsnids {

namespace {

ordered_json per_class_to_json(const std::vector<PerClassMetrics>& per_class) {
    ordered_json arr = ordered_json::array();
    for (const auto& pc : per_class) {
        ordered_json j;
        j["precision"] = pc.precision;
        j["recall"] = pc.recall;
        j["f1"] = pc.f1;
        j["support"] = pc.support;
        j["zero_division"] = pc.zero_division;
        arr.push_back(std::move(j));
    }
    return arr;
}

ordered_json train_config_to_json(const TrainConfig& t) {
    ordered_json j;
    j["dt"] = {{"max_depth", t.dt.max_depth}, {"min_samples_split", t.dt.min_samples_split}};
    j["rf"] = {{"n_trees", t.rf.n_trees},
               {"bootstrap", t.rf.bootstrap},
               {"feature_subsample", t.rf.feature_subsample},
               {"max_depth", t.rf.max_depth},
               {"min_samples_split", t.rf.min_samples_split}};
    j["knn"] = {{"k", t.knn.k}};
    j["mlp"] = {{"hidden", t.mlp.hidden},
                {"learning_rate", t.mlp.learning_rate},
                {"batch_size", t.mlp.batch_size},
                {"epochs", t.mlp.epochs}};
    j["gbt"] = {{"rounds", t.gbt.rounds},
                {"learning_rate", t.gbt.learning_rate},
                {"l2_lambda", t.gbt.l2_lambda},
                {"max_depth", t.gbt.max_depth},
                {"max_bins", t.gbt.max_bins}};
    return j;
}

ordered_json config_to_json(const ExperimentConfig& c) {
    ordered_json j;
    j["data"] = c.data_path;
    j["label_column"] = c.label_column;
    j["drop_columns"] = c.drop_columns;
    j["task"] = to_string(c.task);
    j["normal_class"] = c.normal_class;
    j["balance"] = to_string(c.balance);
    j["tomek_policy"] = to_string(c.tomek_policy);
    j["smote_k"] = c.smote_k;
    ordered_json models = ordered_json::array();
    for (const ModelKind kind : c.models) models.push_back(to_string(kind));
    j["models"] = std::move(models);
    j["folds"] = c.folds;
    j["shuffle"] = c.shuffle;
    j["stratified"] = c.stratified;
    j["seed"] = c.seed;
    j["leakage_mode"] = to_string(c.leakage);
    j["sample_std"] = c.sample_std;
    j["train"] = train_config_to_json(c.train);
    return j;
}

ordered_json standardizer_to_json(const StandardizerParams& p, const std::string& fitted_on) {
    ordered_json j;
    j["fitted_on"] = fitted_on;
    j["sample_std"] = p.sample_std;
    j["mean"] = p.mean;
    j["stdev"] = p.stdev;
    return j;
}

ordered_json environment_fingerprint() {
    ordered_json j;
#if defined(__clang__)
    j["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
    j["compiler"] = std::string("gcc ") + __VERSION__;
#else
    j["compiler"] = "unknown";
#endif
#if defined(__linux__)
    j["platform"] = "linux";
#elif defined(__APPLE__)
    j["platform"] = "macos";
#elif defined(_WIN32)
    j["platform"] = "windows";
#else
    j["platform"] = "unknown";
#endif
    j["pointer_bits"] = static_cast<int>(sizeof(void*) * 8);
#ifdef NDEBUG
    j["build"] = "release";
#else
    j["build"] = "debug";
#endif
    return j;
}

}  // namespace

ordered_json metrics_to_json(const MetricsReport& m) {
    ordered_json j;
    j["accuracy"] = m.accuracy;
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["f1"] = m.f1;
    j["mae"] = m.mae;
    j["mse"] = m.mse;
    j["rmse"] = m.rmse;
    j["auc"] = m.auc;
    j["averaging"] = to_string(m.averaging);
    j["zero_division"] = m.zero_division_flag;
    j["per_class"] = per_class_to_json(m.per_class);
    return j;
}

ordered_json confusion_to_json(const ConfusionMatrix& cm) {
    ordered_json rows = ordered_json::array();
    for (int t = 0; t < cm.n_classes; ++t) {
        ordered_json row = ordered_json::array();
        for (int p = 0; p < cm.n_classes; ++p) row.push_back(cm.at(t, p));
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json distribution_to_json(const ClassDistribution& dist, const LabelMap& map) {
    ordered_json j;
    for (std::size_t c = 0; c < dist.counts.size(); ++c) {
        const std::string name =
            c < map.names.size() ? map.names[c] : "class_" + std::to_string(c);
        j[name] = dist.counts[c];
    }
    j["total"] = dist.total;
    return j;
}

ordered_json resample_report_to_json(const ResampleReport& r, const LabelMap& map) {
    ordered_json j;
    j["before"] = distribution_to_json(r.before, map);
    j["after_smote"] = distribution_to_json(r.after_smote, map);
    j["tomek_pairs"] = r.tomek_pairs;
    ordered_json removed;
    for (const auto& [code, count] : r.removed_per_class) {
        const std::string name = code >= 0 && code < map.n_classes()
                                     ? map.names[static_cast<std::size_t>(code)]
                                     : "class_" + std::to_string(code);
        removed[name] = count;
    }
    j["removed_per_class"] = std::move(removed);
    j["after"] = distribution_to_json(r.after, map);
    j["policy"] = to_string(r.policy);
    j["k_neighbors"] = r.k_neighbors;
    j["seed"] = r.seed;
    return j;
}

ordered_json experiment_report_to_json(const ExperimentReport& report) {
    const bool timings = report.config.emit_timings;
    ordered_json j;
    j["format_version"] = kReportFormatVersion;
    j["config"] = config_to_json(report.config);
    j["environment"] = environment_fingerprint();
    j["dataset"] = {{"rows", report.n_rows},
                    {"features", report.n_features},
                    {"classes", report.label_map.names},
                    {"distribution", distribution_to_json(report.class_counts, report.label_map)}};
    if (report.standardizer) {
        j["standardizer"] = standardizer_to_json(*report.standardizer, "full_dataset");
    }
    if (report.resample) {
        j["resample"] = resample_report_to_json(*report.resample, report.label_map);
    }

    ordered_json folds = ordered_json::array();
    for (const auto& fold : report.folds) {
        ordered_json fj;
        fj["fold"] = fold.fold;
        if (fold.standardizer) {
            fj["standardizer"] = standardizer_to_json(
                *fold.standardizer, "train_fold_" + std::to_string(fold.fold));
        }
        ordered_json models;
        for (const auto& [name, outcome] : fold.models) {
            ordered_json mj;
            mj["ok"] = outcome.ok;
            if (outcome.ok) {
                mj["metrics"] = metrics_to_json(outcome.metrics);
                mj["confusion"] = confusion_to_json(outcome.confusion);
                if (timings) {
                    mj["train_ms"] = outcome.train_ms;
                    mj["predict_ms"] = outcome.predict_ms;
                }
            } else {
                mj["error"] = outcome.error;
            }
            models[name] = std::move(mj);
        }
        fj["models"] = std::move(models);
        folds.push_back(std::move(fj));
    }
    j["folds"] = std::move(folds);

    ordered_json means;
    for (const auto& [name, metrics] : report.fold_means) means[name] = metrics_to_json(metrics);
    j["fold_means"] = std::move(means);

    ordered_json pooled;
    for (const auto& [name, metrics] : report.pooled) pooled[name] = metrics_to_json(metrics);
    j["pooled"] = std::move(pooled);

    j["warnings"] = report.warnings;
    if (!report.config.out_dir.empty()) {
        j["files"] = {{"roc_points", "roc_points.csv"},
                      {"confusion_cells", "confusion_cells.csv"},
                      {"metrics_per_fold", "metrics_per_fold.csv"},
                      {"metrics_summary", "metrics_summary.csv"}};
    }
    if (timings) j["total_ms"] = report.total_ms;
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << content;
    if (!out) throw DataError("failed writing file: " + path);
}

void write_experiment_outputs(const ExperimentReport& report, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    write_text_file((dir / "report.json").string(),
                    experiment_report_to_json(report).dump(2) + "\n");

    std::ostringstream csv;
    csv << "model,scope,accuracy,precision,recall,f1,mae,mse,rmse,auc\n";
    auto emit = [&csv](const std::string& model, const std::string& scope,
                       const MetricsReport& m) {
        csv << model << ',' << scope << ',' << m.accuracy << ',' << m.precision << ',' << m.recall
            << ',' << m.f1 << ',' << m.mae << ',' << m.mse << ',' << m.rmse << ',' << m.auc
            << '\n';
    };
    for (const auto& [name, metrics] : report.fold_means) emit(name, "fold_mean", metrics);
    for (const auto& [name, metrics] : report.pooled) emit(name, "pooled", metrics);
    write_text_file((dir / "metrics_summary.csv").string(), csv.str());
}

}  // namespace wsnids
