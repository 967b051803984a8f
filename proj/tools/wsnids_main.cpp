// wsnids: WSN intrusion-detection pipeline over WSN-DS-shaped CSVs.
//
// Subcommands:
//   run       cross-validated training + evaluation of the six classifiers
//   balance   SMOTE + Tomek-link balancing, written back as CSV + report
//   evaluate  metrics from prediction/score/confusion files
//   inspect   dataset summary (rows, features, class counts)
//
// Exit codes: 0 ok, 1 internal failure, 2 bad flags/config, 3 data errors.

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wsnids/dataset.hpp"
#include "wsnids/errors.hpp"
#include "wsnids/experiment.hpp"
#include "wsnids/metrics.hpp"
#include "wsnids/models.hpp"
#include "wsnids/parallel.hpp"
#include "wsnids/report_io.hpp"
#include "wsnids/resample.hpp"
#include "wsnids/standardize.hpp"

using namespace wsnids;

namespace {

struct DataFlags {
    std::string data;
    std::string label_column;
    std::vector<std::string> drop_columns;
    std::string task = "multiclass";
    std::string normal_class = "Normal";
};

void add_data_flags(CLI::App* cmd, DataFlags& flags) {
    cmd->add_option("--data", flags.data, "input CSV path")->required();
    cmd->add_option("--label-column", flags.label_column,
                    "label column name (default: auto-detect)");
    cmd->add_option("--drop-columns", flags.drop_columns,
                    "columns to drop before training (comma separated)")
        ->delimiter(',');
    cmd->add_option("--task", flags.task, "binary or multiclass")
        ->check(CLI::IsMember({"binary", "multiclass"}))
        ->capture_default_str();
    cmd->add_option("--normal-class", flags.normal_class,
                    "class name treated as Normal for the binary task")
        ->capture_default_str();
}

Dataset load_dataset(const DataFlags& flags, std::string* resolved_label = nullptr) {
    std::string label = flags.label_column;
    if (label.empty()) {
        label = detect_label_column(read_csv_header(flags.data));
        if (label.empty())
            throw DataError("could not auto-detect the label column in " + flags.data +
                            "; pass --label-column");
    }
    if (resolved_label) *resolved_label = label;
    RawDataset raw = load_csv(flags.data, label, flags.drop_columns);
    return make_dataset(std::move(raw), task_from_string(flags.task), flags.normal_class);
}

// Every subcommand takes --config: a flat key=value file whose keys mirror
// the long flag names. Command-line flags always win; unknown keys error.
void attach_config_file(CLI::App* cmd, std::string& path) {
    cmd->add_option("--config", path,
                    "flat key=value config file (keys mirror flags; flags take precedence; "
                    "default from $WSNIDS_CONFIG)");
}

std::string trim_copy(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    std::string t = s.substr(b, e - b);
    if (t.size() >= 2 && ((t.front() == '"' && t.back() == '"') ||
                          (t.front() == '\'' && t.back() == '\'')))
        t = t.substr(1, t.size() - 2);
    return t;
}

bool truthy(const std::string& v) {
    return v == "true" || v == "1" || v == "yes" || v == "on";
}

// Expands `--config file` into the equivalent flags, appended after the user
// arguments, skipping any key the user already passed explicitly.
void merge_config_file(CLI::App& app, std::vector<std::string>& args) {
    CLI::App* sub = nullptr;
    for (const auto& arg : args) {
        if (!arg.empty() && arg[0] != '-') {
            sub = app.get_subcommand_no_throw(arg);
            break;
        }
    }
    if (sub == nullptr) return;

    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        }
    }
    if (config_path.empty()) {
        if (const char* env = std::getenv("WSNIDS_CONFIG")) config_path = env;
    }
    if (config_path.empty()) return;

    std::ifstream in(config_path);
    if (!in) throw DataError("cannot open config file: " + config_path);

    std::string line;
    while (std::getline(in, line)) {
        const std::string stripped = trim_copy(line);
        if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config file line is not key=value: " + stripped);
        const std::string key = trim_copy(stripped.substr(0, eq));
        const std::string value = trim_copy(stripped.substr(eq + 1));
        const std::string flag = "--" + key;
        if (key == "config") continue;

        const CLI::Option* opt = sub->get_option_no_throw(flag);
        if (opt == nullptr) throw ConfigError("unknown config key '" + key + "'");

        bool user_set = false;
        for (const auto& arg : args) {
            if (arg == flag || arg.rfind(flag + "=", 0) == 0) user_set = true;
        }
        if (user_set) continue;

        if (opt->get_expected_max() == 0) {  // pure flag
            if (truthy(value)) args.push_back(flag);
        } else {
            args.push_back(flag);
            args.push_back(value);
        }
    }
}

// ----------------------------------------------------------------- run

struct RunFlags {
    DataFlags data;
    std::string balance = "none";
    std::string policy = "both";
    int smote_k = 5;
    std::vector<std::string> models = {"dt", "rf", "knn", "mlp", "lgb", "xgb"};
    int folds = 10;
    bool no_shuffle = false;
    bool stratified = false;
    std::uint64_t seed = 42;
    std::string leakage = "paper-faithful";
    bool sample_std = false;
    int threads = 0;
    std::string out;
    TrainConfig train;
    std::string mlp_hidden = "100";
};

int cmd_run(const RunFlags& flags) {
    ExperimentConfig config;
    config.data_path = flags.data.data;
    config.label_column = flags.data.label_column;
    config.drop_columns = flags.data.drop_columns;
    config.task = task_from_string(flags.data.task);
    config.normal_class = flags.data.normal_class;
    config.balance = balance_mode_from_string(flags.balance);
    config.tomek_policy = remove_policy_from_string(flags.policy);
    config.smote_k = flags.smote_k;
    for (const auto& name : flags.models) config.models.push_back(model_kind_from_string(name));
    config.folds = flags.folds;
    config.shuffle = !flags.no_shuffle;
    config.stratified = flags.stratified;
    config.seed = flags.seed;
    config.leakage = leakage_mode_from_string(flags.leakage);
    config.sample_std = flags.sample_std;
    config.threads = flags.threads;
    config.out_dir = flags.out;
    config.train = flags.train;

    config.train.mlp.hidden.clear();
    std::stringstream hidden(flags.mlp_hidden);
    std::string item;
    while (std::getline(hidden, item, ','))
        if (!item.empty()) config.train.mlp.hidden.push_back(std::stoi(item));

    const ExperimentReport report = run_experiment(config);

    std::cout << "rows=" << report.n_rows << " features=" << report.n_features
              << " task=" << to_string(report.config.task)
              << " balance=" << to_string(report.config.balance) << "\n";
    if (report.resample) {
        std::cout << "balanced counts:";
        for (std::size_t c = 0; c < report.resample->after.counts.size(); ++c)
            std::cout << ' ' << report.label_map.names[c] << '='
                      << report.resample->after.counts[c];
        std::cout << " (tomek pairs " << report.resample->tomek_pairs << ")\n";
    }
    std::cout << "fold-mean metrics (" << report.config.folds << " folds):\n";
    std::cout << "  model  accuracy precision    recall        f1       mae       mse      rmse"
                 "       auc\n";
    for (const auto& [name, m] : report.fold_means) {
        std::printf("  %-5s %9.4f %9.4f %9.4f %9.4f %9.4f %9.4f %9.4f %9.6f\n", name.c_str(),
                    m.accuracy, m.precision, m.recall, m.f1, m.mae, m.mse, m.rmse, m.auc);
    }
    for (const auto& w : report.warnings) std::cout << "warning: " << w << "\n";
    std::cout << "report written to " << (std::filesystem::path(flags.out) / "report.json").string()
              << std::endl;
    return 0;
}

// --------------------------------------------------------------- balance

struct BalanceFlags {
    DataFlags data;
    std::string policy = "both";
    int smote_k = 5;
    std::uint64_t seed = 42;
    int threads = 0;
    std::string out;
};

int cmd_balance(const BalanceFlags& flags) {
    std::string label_column;
    const Dataset ds = load_dataset(flags.data, &label_column);
    const int threads = flags.threads > 0 ? flags.threads : default_thread_count();

    // Neighbor geometry on the standardized copy (the pipeline's view of the
    // data); the emitted CSV stays in original feature units.
    const StandardizerParams params = fit_standardizer(ds.features);
    const Matrix standardized = transform(params, ds.features);

    SmoteParams smote_params;
    smote_params.k_neighbors = flags.smote_k;
    smote_params.seed = flags.seed;
    const RemovePolicy policy = remove_policy_from_string(flags.policy);

    ResampleReport report;
    report.policy = policy;
    report.k_neighbors = flags.smote_k;
    report.seed = flags.seed;
    report.before = class_distribution(ds.labels, ds.label_map.n_classes());

    const SmoteResult oversampled = smote(standardized, ds.labels, smote_params, threads);
    report.after_smote = class_distribution(oversampled.labels, ds.label_map.n_classes());

    // Original rows verbatim, synthetic rows mapped back to original units.
    Matrix combined = ds.features;
    combined.data().reserve(oversampled.features.rows() * ds.n_features());
    std::vector<double> row(ds.n_features());
    for (std::size_t i = ds.n_rows(); i < oversampled.features.rows(); ++i) {
        for (std::size_t j = 0; j < ds.n_features(); ++j) {
            row[j] = params.stdev[j] > kStdEpsilon
                         ? oversampled.features.at(i, j) * params.stdev[j] + params.mean[j]
                         : params.mean[j];
        }
        combined.push_row(row);
    }

    const std::vector<TomekPair> pairs =
        tomek_links(oversampled.features, oversampled.labels, threads);
    report.tomek_pairs = static_cast<std::int64_t>(pairs.size());

    const RemovalResult cleaned = remove_tomek(combined, oversampled.labels, pairs, policy);
    report.removed_per_class = cleaned.removed_per_class;
    report.after = class_distribution(cleaned.labels, ds.label_map.n_classes());

    std::filesystem::create_directories(flags.out);
    const std::filesystem::path dir(flags.out);

    {
        std::ofstream csv(dir / "balanced.csv");
        if (!csv) throw DataError("cannot write balanced.csv in " + flags.out);
        for (std::size_t j = 0; j < ds.feature_names.size(); ++j)
            csv << ds.feature_names[j] << ',';
        csv << label_column << '\n';
        csv.precision(17);
        for (std::size_t i = 0; i < cleaned.features.rows(); ++i) {
            for (std::size_t j = 0; j < cleaned.features.cols(); ++j)
                csv << cleaned.features.at(i, j) << ',';
            csv << ds.label_map.name_of(cleaned.labels[i]) << '\n';
        }
    }
    write_text_file((dir / "resample_report.json").string(),
                    resample_report_to_json(report, ds.label_map).dump(2) + "\n");

    std::cout << "before:";
    for (std::size_t c = 0; c < report.before.counts.size(); ++c)
        std::cout << ' ' << ds.label_map.names[c] << '=' << report.before.counts[c];
    std::cout << "\nafter: ";
    for (std::size_t c = 0; c < report.after.counts.size(); ++c)
        std::cout << ' ' << ds.label_map.names[c] << '=' << report.after.counts[c];
    std::cout << "\ntomek pairs removed: " << report.tomek_pairs << " (policy " << flags.policy
              << ")\nwrote " << (dir / "balanced.csv").string() << " and "
              << (dir / "resample_report.json").string() << std::endl;
    return 0;
}

// -------------------------------------------------------------- evaluate

struct EvaluateFlags {
    std::string truth;
    std::string pred;
    std::string scores;
    std::string confusion;
    int n_classes = 0;
    std::string averaging;
    std::string out = ".";
};

std::vector<std::vector<double>> read_numeric_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        for (char& c : line)
            if (c == ',' || c == '\t' || c == '\r') c = ' ';
        std::istringstream ss(line);
        std::vector<double> row;
        double v;
        while (ss >> v) row.push_back(v);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("no numeric rows in " + path);
    return rows;
}

std::vector<int> read_label_file(const std::string& path) {
    std::vector<int> labels;
    for (const auto& row : read_numeric_rows(path)) {
        for (const double v : row) labels.push_back(static_cast<int>(v));
    }
    return labels;
}

int cmd_evaluate(const EvaluateFlags& flags) {
    MetricsReport metrics;
    ordered_json out_json;
    ConfusionMatrix cm_out;
    std::ostringstream roc_csv;
    bool have_roc = false;

    if (!flags.confusion.empty()) {
        const auto rows = read_numeric_rows(flags.confusion);
        const int k = static_cast<int>(rows.size());
        ConfusionMatrix cm(k);
        for (int t = 0; t < k; ++t) {
            if (static_cast<int>(rows[static_cast<std::size_t>(t)].size()) != k)
                throw DataError("confusion file must be a square count matrix (row=true class)");
            for (int p = 0; p < k; ++p)
                cm.at(t, p) = static_cast<std::int64_t>(
                    rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)]);
        }
        const Averaging averaging =
            flags.averaging.empty() ? (k == 2 ? Averaging::BinaryPositive : Averaging::Macro)
                                    : averaging_from_string(flags.averaging);
        const BasicMetrics basic = basic_metrics(cm, averaging);
        metrics.accuracy = basic.accuracy;
        metrics.precision = basic.precision;
        metrics.recall = basic.recall;
        metrics.f1 = basic.f1;
        metrics.averaging = basic.averaging;
        metrics.per_class = basic.per_class;
        metrics.zero_division_flag = basic.zero_division_flag;
        out_json["confusion"] = confusion_to_json(cm);
        cm_out = cm;
    } else {
        if (flags.truth.empty()) throw ConfigError("evaluate needs --truth (or --confusion)");
        const std::vector<int> y_true = read_label_file(flags.truth);

        std::vector<int> y_pred;
        Matrix scores;
        if (!flags.scores.empty()) {
            const auto rows = read_numeric_rows(flags.scores);
            if (rows.size() != y_true.size())
                throw DataError("scores file length does not match truth file");
            const std::size_t width = rows[0].size();
            for (const auto& r : rows) {
                if (r.size() != width) throw DataError("ragged scores file");
            }
            if (width == 1) {
                // single column = positive-class score of a binary task
                scores = Matrix(rows.size(), 2);
                for (std::size_t i = 0; i < rows.size(); ++i) {
                    scores.at(i, 1) = rows[i][0];
                    scores.at(i, 0) = 1.0 - rows[i][0];
                }
            } else {
                scores = Matrix(rows.size(), width);
                for (std::size_t i = 0; i < rows.size(); ++i)
                    for (std::size_t j = 0; j < width; ++j) scores.at(i, j) = rows[i][j];
            }
            y_pred.resize(scores.rows());
            for (std::size_t i = 0; i < scores.rows(); ++i) {
                std::size_t best = 0;
                for (std::size_t c = 1; c < scores.cols(); ++c)
                    if (scores.at(i, c) > scores.at(i, best)) best = c;
                y_pred[i] = static_cast<int>(best);
            }
        } else if (!flags.pred.empty()) {
            y_pred = read_label_file(flags.pred);
            if (y_pred.size() != y_true.size())
                throw DataError("prediction file length does not match truth file");
        } else {
            throw ConfigError("evaluate needs --pred or --scores alongside --truth");
        }

        int k = flags.n_classes;
        if (k <= 0) {
            for (const int c : y_true) k = std::max(k, c + 1);
            for (const int c : y_pred) k = std::max(k, c + 1);
            if (!scores.empty()) k = std::max(k, static_cast<int>(scores.cols()));
        }
        const Averaging averaging =
            flags.averaging.empty() ? (k == 2 ? Averaging::BinaryPositive : Averaging::Macro)
                                    : averaging_from_string(flags.averaging);
        metrics = evaluate_predictions(y_true, y_pred, scores, k, averaging);
        cm_out = confusion_matrix(y_true, y_pred, k);
        out_json["confusion"] = confusion_to_json(cm_out);

        if (!flags.scores.empty()) {
            // one-vs-rest curves; for a binary task that is the positive class
            const MulticlassRoc roc = one_vs_rest_roc(y_true, scores);
            roc_csv << "class,threshold,fpr,tpr\n";
            for (std::size_t c = 0; c < roc.per_class.size(); ++c) {
                if (roc.skipped[c]) continue;
                if (k == 2 && c == 0) continue;
                const RocCurve& curve = roc.per_class[c];
                for (std::size_t i = 0; i < curve.fpr.size(); ++i)
                    roc_csv << c << ',' << curve.thresholds[i] << ',' << curve.fpr[i] << ','
                            << curve.tpr[i] << '\n';
                have_roc = true;
            }
        }
    }

    std::filesystem::create_directories(flags.out);
    const std::filesystem::path dir(flags.out);
    out_json["metrics"] = metrics_to_json(metrics);
    write_text_file((dir / "metrics_report.json").string(), out_json.dump(2) + "\n");

    {
        std::ostringstream csv;
        csv << "true,pred,count\n";
        for (int t = 0; t < cm_out.n_classes; ++t)
            for (int p = 0; p < cm_out.n_classes; ++p)
                csv << t << ',' << p << ',' << cm_out.at(t, p) << '\n';
        write_text_file((dir / "confusion_cells.csv").string(), csv.str());
    }
    if (have_roc) write_text_file((dir / "roc.csv").string(), roc_csv.str());

    std::printf("accuracy=%.4f precision=%.4f recall=%.4f f1=%.4f", metrics.accuracy,
                metrics.precision, metrics.recall, metrics.f1);
    if (flags.confusion.empty())
        std::printf(" mae=%.4f mse=%.4f rmse=%.4f auc=%.6f", metrics.mae, metrics.mse,
                    metrics.rmse, metrics.auc);
    std::printf("\nwrote %s\n", (dir / "metrics_report.json").string().c_str());
    return 0;
}

// --------------------------------------------------------------- inspect

int cmd_inspect(const DataFlags& flags) {
    const Dataset ds = load_dataset(flags);
    const ClassDistribution dist = class_distribution(ds.labels, ds.label_map.n_classes());
    std::cout << "rows: " << ds.n_rows() << "\nfeatures: " << ds.n_features() << "\ncolumns:";
    for (const auto& name : ds.feature_names) std::cout << ' ' << name;
    std::cout << "\ntask: " << to_string(ds.label_map.task) << "\nclass counts:\n";
    for (std::size_t c = 0; c < dist.counts.size(); ++c)
        std::cout << "  " << ds.label_map.names[c] << ": " << dist.counts[c] << '\n';
    std::cout << "  total: " << dist.total << std::endl;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"WSN intrusion-detection pipeline (WSN-DS)", "wsnids"};
    app.set_version_flag("--version", "wsnids 0.1.0");
    app.require_subcommand(1);

    std::string config_path;  // shared --config slot, resolved before parse

    RunFlags run_flags;
    CLI::App* run_cmd = app.add_subcommand("run", "cross-validated training and evaluation");
    attach_config_file(run_cmd, config_path);
    add_data_flags(run_cmd, run_flags.data);
    run_cmd->add_option("--balance", run_flags.balance, "none or smotetomek")
        ->check(CLI::IsMember({"none", "smotetomek"}))
        ->capture_default_str();
    run_cmd->add_option("--policy", run_flags.policy, "tomek removal policy")
        ->check(CLI::IsMember({"both", "majority_only"}))
        ->capture_default_str();
    run_cmd->add_option("--k-neighbors", run_flags.smote_k, "SMOTE neighbor count")
        ->capture_default_str();
    run_cmd->add_option("--models", run_flags.models, "models to train (dt,rf,knn,mlp,lgb,xgb)")
        ->delimiter(',')
        ->capture_default_str();
    run_cmd->add_option("--folds", run_flags.folds, "cross-validation folds")
        ->capture_default_str();
    run_cmd->add_flag("--no-shuffle", run_flags.no_shuffle, "disable the pre-split shuffle");
    run_cmd->add_flag("--stratified", run_flags.stratified, "stratify folds by class");
    run_cmd->add_option("--seed", run_flags.seed, "master RNG seed")->capture_default_str();
    run_cmd->add_option("--leakage-mode", run_flags.leakage, "paper-faithful or strict")
        ->check(CLI::IsMember({"paper-faithful", "strict"}))
        ->capture_default_str();
    run_cmd->add_flag("--sample-std", run_flags.sample_std,
                      "standardize with the sample (n-1) deviation");
    run_cmd->add_option("--threads", run_flags.threads, "worker threads (0 = all cores)")
        ->capture_default_str();
    run_cmd->add_option("--out", run_flags.out, "output directory")->required();
    run_cmd->add_option("--dt-max-depth", run_flags.train.dt.max_depth,
                        "decision tree depth limit (0 = unlimited)");
    run_cmd->add_option("--dt-min-split", run_flags.train.dt.min_samples_split,
                        "minimum samples to split");
    run_cmd->add_option("--rf-trees", run_flags.train.rf.n_trees, "forest size");
    run_cmd->add_option("--rf-max-depth", run_flags.train.rf.max_depth, "forest depth limit");
    run_cmd->add_flag_callback(
        "--rf-no-bootstrap", [&run_flags]() { run_flags.train.rf.bootstrap = false; },
        "train each tree on the full sample");
    run_cmd->add_flag_callback(
        "--rf-no-feature-subsample",
        [&run_flags]() { run_flags.train.rf.feature_subsample = false; },
        "consider every feature at every split");
    run_cmd->add_option("--knn-k", run_flags.train.knn.k, "neighbor count for the knn model");
    run_cmd->add_option("--mlp-hidden", run_flags.mlp_hidden,
                        "hidden layer sizes, comma separated")
        ->capture_default_str();
    run_cmd->add_option("--mlp-lr", run_flags.train.mlp.learning_rate, "mlp learning rate");
    run_cmd->add_option("--mlp-batch", run_flags.train.mlp.batch_size, "mlp batch size");
    run_cmd->add_option("--mlp-epochs", run_flags.train.mlp.epochs, "mlp epochs");
    run_cmd->add_option("--gbt-rounds", run_flags.train.gbt.rounds, "boosting rounds");
    run_cmd->add_option("--gbt-lr", run_flags.train.gbt.learning_rate, "boosting shrinkage");
    run_cmd->add_option("--gbt-lambda", run_flags.train.gbt.l2_lambda, "leaf L2 regularization");
    run_cmd->add_option("--gbt-depth", run_flags.train.gbt.max_depth, "boosted tree depth");
    run_cmd->add_option("--gbt-bins", run_flags.train.gbt.max_bins,
                        "histogram bins (lgb variant)");

    BalanceFlags balance_flags;
    CLI::App* balance_cmd = app.add_subcommand("balance", "SMOTE + Tomek-link balancing");
    attach_config_file(balance_cmd, config_path);
    add_data_flags(balance_cmd, balance_flags.data);
    balance_cmd->add_option("--policy", balance_flags.policy, "tomek removal policy")
        ->check(CLI::IsMember({"both", "majority_only"}))
        ->capture_default_str();
    balance_cmd->add_option("--k-neighbors", balance_flags.smote_k, "SMOTE neighbor count")
        ->capture_default_str();
    balance_cmd->add_option("--seed", balance_flags.seed, "RNG seed")->capture_default_str();
    balance_cmd->add_option("--threads", balance_flags.threads, "worker threads (0 = all cores)");
    balance_cmd->add_option("--out", balance_flags.out, "output directory")->required();

    EvaluateFlags eval_flags;
    CLI::App* eval_cmd = app.add_subcommand("evaluate", "metrics from files");
    attach_config_file(eval_cmd, config_path);
    eval_cmd->add_option("--truth", eval_flags.truth, "true labels, one integer per line");
    eval_cmd->add_option("--pred", eval_flags.pred, "predicted labels, one integer per line");
    eval_cmd->add_option("--scores", eval_flags.scores,
                         "per-row class scores (single column = binary positive score)");
    eval_cmd->add_option("--confusion", eval_flags.confusion,
                         "square confusion-count matrix, row = true class");
    eval_cmd->add_option("--n-classes", eval_flags.n_classes, "class count override");
    eval_cmd->add_option("--averaging", eval_flags.averaging, "macro, weighted or binary")
        ->check(CLI::IsMember({"macro", "weighted", "binary"}));
    eval_cmd->add_option("--out", eval_flags.out, "output directory")->capture_default_str();

    DataFlags inspect_flags;
    CLI::App* inspect_cmd = app.add_subcommand("inspect", "dataset summary");
    attach_config_file(inspect_cmd, config_path);
    add_data_flags(inspect_cmd, inspect_flags);

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        merge_config_file(app, args);
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
        if (run_cmd->parsed()) return cmd_run(run_flags);
        if (balance_cmd->parsed()) return cmd_balance(balance_flags);
        if (eval_cmd->parsed()) return cmd_evaluate(eval_flags);
        if (inspect_cmd->parsed()) return cmd_inspect(inspect_flags);
        return 2;
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints help or the error message
        return e.get_exit_code() == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << std::endl;
        return 1;
    }
}
