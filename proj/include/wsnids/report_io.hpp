#pragma once

#include <json.hpp>
#include <string>

#include "wsnids/experiment.hpp"
#include "wsnids/metrics.hpp"
#include "wsnids/resample.hpp"

namespace wsnids {

using ordered_json = nlohmann::ordered_json;

// Structured-report schema, versioned; see the README for field meanings.
inline constexpr int kReportFormatVersion = 1;

ordered_json metrics_to_json(const MetricsReport& metrics);
ordered_json confusion_to_json(const ConfusionMatrix& cm);
ordered_json distribution_to_json(const ClassDistribution& dist, const LabelMap& map);
ordered_json resample_report_to_json(const ResampleReport& report, const LabelMap& map);

// Full experiment report, including the resolved config echo and environment
// fingerprint. Timing fields are omitted when config.emit_timings is off;
// they are the only fields that vary between identical runs.
ordered_json experiment_report_to_json(const ExperimentReport& report);

void write_text_file(const std::string& path, const std::string& content);

// Writes report.json and metrics_summary.csv into out_dir (created if
// needed). The per-fold ROC and confusion CSVs are streamed by the
// experiment itself while folds run.
void write_experiment_outputs(const ExperimentReport& report, const std::string& out_dir);

}  // namespace wsnids
