#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wsnids/matrix.hpp"

namespace wsnids {

enum class Task { Binary, Multiclass };

std::string to_string(Task task);
Task task_from_string(const std::string& s);

// Ordered class-name -> code mapping. Codes are contiguous from 0; binary
// tasks map {Normal, Attack}, multiclass the five WSN-DS classes.
struct LabelMap {
    Task task = Task::Multiclass;
    std::vector<std::string> names;  // index == code

    int n_classes() const { return static_cast<int>(names.size()); }
    const std::string& name_of(int code) const;
};

struct ClassDistribution {
    std::vector<std::int64_t> counts;  // indexed by class code
    std::int64_t total = 0;
};

// Parsed CSV before label encoding; raw label strings are kept verbatim.
struct RawDataset {
    Matrix features;
    std::vector<std::string> raw_labels;
    std::vector<std::string> feature_names;
    std::string label_column;

    std::size_t n_rows() const { return features.rows(); }
    std::size_t n_features() const { return features.cols(); }
};

struct Dataset {
    Matrix features;
    std::vector<int> labels;
    std::vector<std::string> feature_names;
    LabelMap label_map;

    std::size_t n_rows() const { return features.rows(); }
    std::size_t n_features() const { return features.cols(); }
};

// Reads a comma-separated file with a header row. Every column that is not
// the label column and not listed in drop_columns must parse as a real
// number; a cell that does not is reported with its row and column.
RawDataset load_csv(const std::string& path, const std::string& label_column,
                    const std::vector<std::string>& drop_columns = {});

// Header of a CSV file without reading the body.
std::vector<std::string> read_csv_header(const std::string& path);

// Picks the label column among common WSN-DS spellings ("Attack type",
// "Class", ...). Returns empty when nothing matches.
std::string detect_label_column(const std::vector<std::string>& header);

// Binary: normal_class -> 0, everything else -> 1. Multiclass: the five
// WSN-DS names -> 0..4 ("Scheduling" is accepted as an alias of TDMA).
// Matching is case-insensitive on trimmed input.
std::pair<std::vector<int>, LabelMap> encode_labels(const std::vector<std::string>& raw_labels,
                                                    Task task,
                                                    const std::string& normal_class = "Normal");

std::vector<std::string> decode_labels(const std::vector<int>& labels, const LabelMap& map);

// Exact per-code counts. n_classes < 0 infers max(code)+1.
ClassDistribution class_distribution(const std::vector<int>& labels, int n_classes = -1);

Dataset make_dataset(RawDataset raw, Task task, const std::string& normal_class = "Normal");

}  // namespace wsnids
