#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wsnids/dataset.hpp"
#include "wsnids/metrics.hpp"
#include "wsnids/models.hpp"
#include "wsnids/resample.hpp"
#include "wsnids/standardize.hpp"

namespace wsnids {

enum class BalanceMode { None, SmoteTomek };
enum class LeakageMode { PaperFaithful, Strict };

std::string to_string(BalanceMode mode);
BalanceMode balance_mode_from_string(const std::string& s);
std::string to_string(LeakageMode mode);
LeakageMode leakage_mode_from_string(const std::string& s);

struct ExperimentConfig {
    std::string data_path;
    std::string label_column;  // empty: auto-detect among common names
    std::vector<std::string> drop_columns;
    Task task = Task::Multiclass;
    std::string normal_class = "Normal";

    BalanceMode balance = BalanceMode::None;
    RemovePolicy tomek_policy = RemovePolicy::Both;
    int smote_k = 5;

    std::vector<ModelKind> models;
    int folds = 10;
    bool shuffle = true;
    bool stratified = false;
    std::uint64_t seed = 42;
    LeakageMode leakage = LeakageMode::PaperFaithful;
    bool sample_std = false;

    TrainConfig train;  // train.seed is ignored; per-unit seeds derive from `seed`
    int threads = 0;    // 0 = hardware concurrency

    std::string out_dir;  // empty: no files written
    bool emit_timings = true;
};

struct FoldSplit {
    std::vector<std::size_t> train_ids;
    std::vector<std::size_t> test_ids;
};

// Plain k-fold: shuffled ids sliced into `folds` contiguous test blocks whose
// sizes differ by at most one. Not stratified unless requested.
std::vector<FoldSplit> split_folds(std::size_t n_rows, int folds, bool shuffle,
                                   std::uint64_t seed);

// Stratified variant: per-class round-robin assignment after a seeded shuffle.
std::vector<FoldSplit> split_folds_stratified(const std::vector<int>& labels, int folds,
                                              bool shuffle, std::uint64_t seed);

struct ModelOutcome {
    bool ok = false;
    std::string error;
    MetricsReport metrics;
    ConfusionMatrix confusion;
    double train_ms = 0.0;
    double predict_ms = 0.0;
};

struct FoldResult {
    int fold = 0;
    std::map<std::string, ModelOutcome> models;  // keyed by model short name
    // strict mode: the standardizer fitted on this fold's training rows
    std::optional<StandardizerParams> standardizer;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::size_t n_rows = 0;
    std::size_t n_features = 0;
    LabelMap label_map;
    ClassDistribution class_counts;          // after encoding, before balancing
    // paper-faithful mode: the standardizer fitted on the full dataset
    std::optional<StandardizerParams> standardizer;
    std::optional<ResampleReport> resample;  // paper-faithful balancing only
    std::vector<FoldResult> folds;
    std::map<std::string, MetricsReport> fold_means;  // arithmetic mean across folds
    std::map<std::string, MetricsReport> pooled;      // metrics on concatenated test folds
    std::vector<std::string> warnings;
    double total_ms = 0.0;
};

// Arithmetic mean of per-fold metrics; per-fold values stay in the report.
MetricsReport aggregate_folds(const std::vector<MetricsReport>& fold_metrics);

ExperimentReport run_experiment(const ExperimentConfig& config);

// Same pipeline on an in-memory dataset (used by tests and the bindings).
ExperimentReport run_experiment_on(const Dataset& dataset, const ExperimentConfig& config);

}  // namespace wsnids
