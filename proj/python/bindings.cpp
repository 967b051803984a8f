// Python bindings for the wsnids core: CSV loading, standardization,
// SMOTE/Tomek balancing, the six classifiers, metrics and the experiment
// harness. Matrices cross the boundary as C-contiguous float64 numpy arrays.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "wsnids/dataset.hpp"
#include "wsnids/errors.hpp"
#include "wsnids/experiment.hpp"
#include "wsnids/metrics.hpp"
#include "wsnids/models.hpp"
#include "wsnids/report_io.hpp"
#include "wsnids/resample.hpp"
#include "wsnids/standardize.hpp"

namespace py = pybind11;
using namespace wsnids;

namespace {

Matrix matrix_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw DataError("expected a 2-D float array");
    Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    std::copy(a.data(), a.data() + a.size(), m.data().begin());
    return m;
}

py::array_t<double> array_from_matrix(const Matrix& m) {
    py::array_t<double> a({m.rows(), m.cols()});
    std::copy(m.data().begin(), m.data().end(), a.mutable_data());
    return a;
}

py::array_t<int> array_from_labels(const std::vector<int>& labels) {
    py::array_t<int> a(static_cast<py::ssize_t>(labels.size()));
    std::copy(labels.begin(), labels.end(), a.mutable_data());
    return a;
}

py::dict distribution_dict(const ClassDistribution& dist) {
    py::dict d;
    py::list counts;
    for (const auto c : dist.counts) counts.append(c);
    d["counts"] = counts;
    d["total"] = dist.total;
    return d;
}

py::dict metrics_dict(const MetricsReport& m) {
    py::dict d;
    d["accuracy"] = m.accuracy;
    d["precision"] = m.precision;
    d["recall"] = m.recall;
    d["f1"] = m.f1;
    d["mae"] = m.mae;
    d["mse"] = m.mse;
    d["rmse"] = m.rmse;
    d["auc"] = m.auc;
    d["averaging"] = to_string(m.averaging);
    return d;
}

ExperimentConfig config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad experiment config: ") + e.what());
    }
    ExperimentConfig c;
    if (j.contains("data")) c.data_path = j["data"].get<std::string>();
    if (j.contains("label_column")) c.label_column = j["label_column"].get<std::string>();
    if (j.contains("drop_columns"))
        c.drop_columns = j["drop_columns"].get<std::vector<std::string>>();
    if (j.contains("task")) c.task = task_from_string(j["task"].get<std::string>());
    if (j.contains("normal_class")) c.normal_class = j["normal_class"].get<std::string>();
    if (j.contains("balance")) c.balance = balance_mode_from_string(j["balance"].get<std::string>());
    if (j.contains("policy"))
        c.tomek_policy = remove_policy_from_string(j["policy"].get<std::string>());
    if (j.contains("smote_k")) c.smote_k = j["smote_k"].get<int>();
    if (j.contains("models")) {
        for (const auto& name : j["models"])
            c.models.push_back(model_kind_from_string(name.get<std::string>()));
    }
    if (j.contains("folds")) c.folds = j["folds"].get<int>();
    if (j.contains("shuffle")) c.shuffle = j["shuffle"].get<bool>();
    if (j.contains("stratified")) c.stratified = j["stratified"].get<bool>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("leakage_mode"))
        c.leakage = leakage_mode_from_string(j["leakage_mode"].get<std::string>());
    if (j.contains("sample_std")) c.sample_std = j["sample_std"].get<bool>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
    if (j.contains("out")) c.out_dir = j["out"].get<std::string>();
    if (j.contains("emit_timings")) c.emit_timings = j["emit_timings"].get<bool>();
    if (j.contains("train")) {
        const auto& t = j["train"];
        if (t.contains("dt")) {
            c.train.dt.max_depth = t["dt"].value("max_depth", c.train.dt.max_depth);
            c.train.dt.min_samples_split =
                t["dt"].value("min_samples_split", c.train.dt.min_samples_split);
        }
        if (t.contains("rf")) {
            c.train.rf.n_trees = t["rf"].value("n_trees", c.train.rf.n_trees);
            c.train.rf.bootstrap = t["rf"].value("bootstrap", c.train.rf.bootstrap);
            c.train.rf.feature_subsample =
                t["rf"].value("feature_subsample", c.train.rf.feature_subsample);
            c.train.rf.max_depth = t["rf"].value("max_depth", c.train.rf.max_depth);
        }
        if (t.contains("knn")) c.train.knn.k = t["knn"].value("k", c.train.knn.k);
        if (t.contains("mlp")) {
            if (t["mlp"].contains("hidden"))
                c.train.mlp.hidden = t["mlp"]["hidden"].get<std::vector<int>>();
            c.train.mlp.learning_rate =
                t["mlp"].value("learning_rate", c.train.mlp.learning_rate);
            c.train.mlp.batch_size = t["mlp"].value("batch_size", c.train.mlp.batch_size);
            c.train.mlp.epochs = t["mlp"].value("epochs", c.train.mlp.epochs);
        }
        if (t.contains("gbt")) {
            c.train.gbt.rounds = t["gbt"].value("rounds", c.train.gbt.rounds);
            c.train.gbt.learning_rate =
                t["gbt"].value("learning_rate", c.train.gbt.learning_rate);
            c.train.gbt.l2_lambda = t["gbt"].value("l2_lambda", c.train.gbt.l2_lambda);
            c.train.gbt.max_depth = t["gbt"].value("max_depth", c.train.gbt.max_depth);
            c.train.gbt.max_bins = t["gbt"].value("max_bins", c.train.gbt.max_bins);
        }
    }
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "WSN intrusion-detection pipeline: standardization, SMOTE-Tomek balancing, "
              "six classifiers, cross-validated evaluation";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def(
        "load_csv",
        [](const std::string& path, std::string label_column,
           const std::vector<std::string>& drop_columns) {
            if (label_column.empty()) {
                label_column = detect_label_column(read_csv_header(path));
                if (label_column.empty())
                    throw DataError("could not auto-detect the label column; pass label_column");
            }
            const RawDataset raw = load_csv(path, label_column, drop_columns);
            py::dict d;
            d["features"] = array_from_matrix(raw.features);
            d["raw_labels"] = raw.raw_labels;
            d["feature_names"] = raw.feature_names;
            d["label_column"] = raw.label_column;
            return d;
        },
        py::arg("path"), py::arg("label_column") = "",
        py::arg("drop_columns") = std::vector<std::string>{});

    m.def(
        "encode_labels",
        [](const std::vector<std::string>& raw, const std::string& task,
           const std::string& normal_class) {
            const auto [codes, map] = encode_labels(raw, task_from_string(task), normal_class);
            return py::make_tuple(array_from_labels(codes), map.names);
        },
        py::arg("raw_labels"), py::arg("task"), py::arg("normal_class") = "Normal");

    m.def(
        "class_distribution",
        [](const std::vector<int>& labels, int n_classes) {
            return distribution_dict(class_distribution(labels, n_classes));
        },
        py::arg("labels"), py::arg("n_classes") = -1);

    py::class_<StandardizerParams>(m, "Standardizer")
        .def(py::init([](const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
                         bool sample_std) {
                 return fit_standardizer(matrix_from_array(x), sample_std);
             }),
             py::arg("features"), py::arg("sample_std") = false)
        .def_readonly("mean", &StandardizerParams::mean)
        .def_readonly("stdev", &StandardizerParams::stdev)
        .def("transform",
             [](const StandardizerParams& p,
                const py::array_t<double, py::array::c_style | py::array::forcecast>& x) {
                 return array_from_matrix(transform(p, matrix_from_array(x)));
             },
             py::arg("features"));

    m.def(
        "smote",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
           const std::vector<int>& y, int k_neighbors, std::uint64_t seed, int threads) {
            SmoteParams params;
            params.k_neighbors = k_neighbors;
            params.seed = seed;
            const SmoteResult r = smote(matrix_from_array(x), y, params, threads);
            py::dict d;
            d["features"] = array_from_matrix(r.features);
            d["labels"] = array_from_labels(r.labels);
            py::list prov;
            for (const auto& rec : r.provenance)
                prov.append(py::make_tuple(rec.row, rec.base, rec.neighbor, rec.delta));
            d["provenance"] = prov;
            return d;
        },
        py::arg("features"), py::arg("labels"), py::arg("k_neighbors") = 5, py::arg("seed") = 0,
        py::arg("threads") = 1);

    m.def(
        "tomek_links",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
           const std::vector<int>& y, int threads) {
            const auto pairs = tomek_links(matrix_from_array(x), y, threads);
            py::list out;
            for (const auto& p : pairs) out.append(py::make_tuple(p.i, p.j));
            return out;
        },
        py::arg("features"), py::arg("labels"), py::arg("threads") = 1);

    m.def(
        "smote_tomek",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
           const std::vector<int>& y, int k_neighbors, std::uint64_t seed,
           const std::string& policy, int threads) {
            SmoteParams params;
            params.k_neighbors = k_neighbors;
            params.seed = seed;
            const SmoteTomekResult r = smote_tomek(matrix_from_array(x), y, params,
                                                   remove_policy_from_string(policy), threads);
            py::dict report;
            report["before"] = distribution_dict(r.report.before);
            report["after_smote"] = distribution_dict(r.report.after_smote);
            report["tomek_pairs"] = r.report.tomek_pairs;
            report["removed_per_class"] = r.report.removed_per_class;
            report["after"] = distribution_dict(r.report.after);
            py::dict d;
            d["features"] = array_from_matrix(r.features);
            d["labels"] = array_from_labels(r.labels);
            d["report"] = report;
            return d;
        },
        py::arg("features"), py::arg("labels"), py::arg("k_neighbors") = 5, py::arg("seed") = 0,
        py::arg("policy") = "both", py::arg("threads") = 1);

    py::class_<DtParams>(m, "DtParams")
        .def(py::init<>())
        .def_readwrite("max_depth", &DtParams::max_depth)
        .def_readwrite("min_samples_split", &DtParams::min_samples_split);
    py::class_<RfParams>(m, "RfParams")
        .def(py::init<>())
        .def_readwrite("n_trees", &RfParams::n_trees)
        .def_readwrite("bootstrap", &RfParams::bootstrap)
        .def_readwrite("feature_subsample", &RfParams::feature_subsample)
        .def_readwrite("max_depth", &RfParams::max_depth)
        .def_readwrite("min_samples_split", &RfParams::min_samples_split);
    py::class_<KnnParams>(m, "KnnParams")
        .def(py::init<>())
        .def_readwrite("k", &KnnParams::k);
    py::class_<MlpParams>(m, "MlpParams")
        .def(py::init<>())
        .def_readwrite("hidden", &MlpParams::hidden)
        .def_readwrite("learning_rate", &MlpParams::learning_rate)
        .def_readwrite("batch_size", &MlpParams::batch_size)
        .def_readwrite("epochs", &MlpParams::epochs);
    py::class_<GbtParams>(m, "GbtParams")
        .def(py::init<>())
        .def_readwrite("rounds", &GbtParams::rounds)
        .def_readwrite("learning_rate", &GbtParams::learning_rate)
        .def_readwrite("l2_lambda", &GbtParams::l2_lambda)
        .def_readwrite("max_depth", &GbtParams::max_depth)
        .def_readwrite("max_bins", &GbtParams::max_bins);
    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("dt", &TrainConfig::dt)
        .def_readwrite("rf", &TrainConfig::rf)
        .def_readwrite("knn", &TrainConfig::knn)
        .def_readwrite("mlp", &TrainConfig::mlp)
        .def_readwrite("gbt", &TrainConfig::gbt);

    py::class_<Model>(m, "Model")
        .def_property_readonly("kind", [](const Model& model) { return to_string(model.kind()); })
        .def_property_readonly("n_classes", &Model::n_classes)
        .def_property_readonly("n_features", &Model::n_features)
        .def("predict",
             [](const Model& model,
                const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
                int threads) { return array_from_labels(model.predict(matrix_from_array(x), threads)); },
             py::arg("features"), py::arg("threads") = 1)
        .def("predict_scores",
             [](const Model& model,
                const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
                int threads) { return array_from_matrix(model.predict_scores(matrix_from_array(x), threads)); },
             py::arg("features"), py::arg("threads") = 1)
        .def("save", &Model::save, py::arg("path"));

    m.def(
        "train",
        [](const std::string& kind,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
           const std::vector<int>& y, int n_classes, const TrainConfig& config, int threads) {
            return train(model_kind_from_string(kind), matrix_from_array(x), y, n_classes, config,
                         threads);
        },
        py::arg("kind"), py::arg("features"), py::arg("labels"), py::arg("n_classes"),
        py::arg("config") = TrainConfig{}, py::arg("threads") = 1);

    m.def("load_model", &Model::load, py::arg("path"));

    m.def(
        "confusion_matrix",
        [](const std::vector<int>& y_true, const std::vector<int>& y_pred, int n_classes) {
            const ConfusionMatrix cm = confusion_matrix(y_true, y_pred, n_classes);
            py::array_t<std::int64_t> a({static_cast<py::ssize_t>(cm.n_classes),
                                         static_cast<py::ssize_t>(cm.n_classes)});
            std::copy(cm.counts.begin(), cm.counts.end(), a.mutable_data());
            return a;
        },
        py::arg("y_true"), py::arg("y_pred"), py::arg("n_classes"));

    m.def(
        "basic_metrics",
        [](const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& counts,
           const std::string& averaging) {
            if (counts.ndim() != 2 || counts.shape(0) != counts.shape(1))
                throw DataError("confusion matrix must be square");
            ConfusionMatrix cm(static_cast<int>(counts.shape(0)));
            std::copy(counts.data(), counts.data() + counts.size(), cm.counts.begin());
            const BasicMetrics b = basic_metrics(cm, averaging_from_string(averaging));
            py::dict d;
            d["accuracy"] = b.accuracy;
            d["precision"] = b.precision;
            d["recall"] = b.recall;
            d["f1"] = b.f1;
            d["zero_division"] = b.zero_division_flag;
            return d;
        },
        py::arg("confusion"), py::arg("averaging") = "macro");

    m.def(
        "regression_errors",
        [](const std::vector<int>& y_true, const std::vector<int>& y_pred) {
            const RegressionErrors e = regression_style_errors(y_true, y_pred);
            py::dict d;
            d["mae"] = e.mae;
            d["mse"] = e.mse;
            d["rmse"] = e.rmse;
            return d;
        },
        py::arg("y_true"), py::arg("y_pred"));

    m.def(
        "roc_curve",
        [](const std::vector<int>& y_true, const std::vector<double>& scores) {
            const RocCurve c = roc_curve(y_true, scores);
            py::dict d;
            d["fpr"] = c.fpr;
            d["tpr"] = c.tpr;
            d["thresholds"] = c.thresholds;
            d["auc"] = c.auc;
            return d;
        },
        py::arg("y_true"), py::arg("scores"));

    m.def(
        "split_folds",
        [](std::size_t n_rows, int folds, bool shuffle, std::uint64_t seed) {
            py::list out;
            for (const auto& split : split_folds(n_rows, folds, shuffle, seed)) {
                py::list train_ids, test_ids;
                for (const auto id : split.train_ids) train_ids.append(id);
                for (const auto id : split.test_ids) test_ids.append(id);
                out.append(py::make_tuple(train_ids, test_ids));
            }
            return out;
        },
        py::arg("n_rows"), py::arg("folds"), py::arg("shuffle") = true, py::arg("seed") = 0);

    m.def(
        "run_experiment_json",
        [](const std::string& config_json) {
            const ExperimentConfig config = config_from_json(config_json);
            const ExperimentReport report = run_experiment(config);
            return experiment_report_to_json(report).dump();
        },
        py::arg("config_json"),
        "Run the full pipeline from a JSON config string; returns the report as JSON.");
}
