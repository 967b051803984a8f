#include "wsnids/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "wsnids/errors.hpp"

namespace wsnids {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string canon(const std::string& s) { return lower(trim(s)); }

// Splits one CSV record. Supports double-quoted fields with "" escaping.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c == '\r') {
            // tolerate CRLF line endings
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_cell(const std::string& cell, std::size_t data_row, const std::string& column) {
    const std::string t = trim(cell);
    double value = 0.0;
    const char* begin = t.data();
    const char* end = begin + t.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || t.empty()) {
        std::ostringstream msg;
        msg << "non-numeric cell '" << cell << "' at data row " << data_row << ", column '"
            << column << "'";
        throw DataError(msg.str());
    }
    return value;
}

const std::vector<std::string> kMulticlassNames = {"Normal", "Grayhole", "Blackhole", "TDMA",
                                                   "Flooding"};

// Canonical spelling -> code, including the Scheduling alias for TDMA.
int multiclass_code(const std::string& canonical) {
    if (canonical == "normal") return 0;
    if (canonical == "grayhole") return 1;
    if (canonical == "blackhole") return 2;
    if (canonical == "tdma" || canonical == "scheduling") return 3;
    if (canonical == "flooding") return 4;
    return -1;
}

}  // namespace

std::string to_string(Task task) { return task == Task::Binary ? "binary" : "multiclass"; }

Task task_from_string(const std::string& s) {
    const std::string c = canon(s);
    if (c == "binary") return Task::Binary;
    if (c == "multiclass" || c == "multilabel" || c == "multi") return Task::Multiclass;
    throw ConfigError("unknown task '" + s + "' (expected binary or multiclass)");
}

const std::string& LabelMap::name_of(int code) const {
    if (code < 0 || code >= n_classes()) throw ConfigError("label code out of range");
    return names[static_cast<std::size_t>(code)];
}

std::vector<std::string> read_csv_header(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file: " + path);
    auto header = split_csv_line(line);
    for (auto& h : header) h = trim(h);
    return header;
}

std::string detect_label_column(const std::vector<std::string>& header) {
    static const std::vector<std::string> candidates = {"attack type", "attack_type", "class",
                                                        "label", "attack"};
    for (const auto& cand : candidates) {
        for (const auto& h : header) {
            if (canon(h) == cand) return h;
        }
    }
    return {};
}

RawDataset load_csv(const std::string& path, const std::string& label_column,
                    const std::vector<std::string>& drop_columns) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file: " + path);
    const auto header_raw = split_csv_line(line);

    std::vector<std::string> header(header_raw.size());
    for (std::size_t i = 0; i < header_raw.size(); ++i) header[i] = trim(header_raw[i]);

    const std::string label_canon = canon(label_column);
    std::vector<std::string> drops_canon;
    drops_canon.reserve(drop_columns.size());
    for (const auto& d : drop_columns) drops_canon.push_back(canon(d));

    std::size_t label_idx = header.size();
    std::vector<bool> keep(header.size(), true);
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string hc = canon(header[i]);
        if (hc == label_canon) {
            label_idx = i;
            keep[i] = false;
        } else if (std::find(drops_canon.begin(), drops_canon.end(), hc) != drops_canon.end()) {
            keep[i] = false;
        }
    }
    if (label_idx == header.size())
        throw DataError("label column '" + label_column + "' not found in header of " + path);

    RawDataset out;
    out.label_column = header[label_idx];
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (keep[i]) out.feature_names.push_back(header[i]);
    }
    const std::size_t n_features = out.feature_names.size();

    std::vector<double> row(n_features);
    std::size_t data_row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        ++data_row;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            std::ostringstream msg;
            msg << "ragged row " << data_row << ": expected " << header.size() << " fields, got "
                << cells.size();
            throw DataError(msg.str());
        }
        std::size_t f = 0;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i == label_idx) {
                out.raw_labels.push_back(trim(cells[i]));
            } else if (keep[i]) {
                row[f++] = parse_cell(cells[i], data_row, header[i]);
            }
        }
        out.features.push_row(row);
    }
    if (out.features.empty()) throw DataError("no data rows in " + path);
    return out;
}

std::pair<std::vector<int>, LabelMap> encode_labels(const std::vector<std::string>& raw_labels,
                                                    Task task, const std::string& normal_class) {
    LabelMap map;
    map.task = task;
    std::vector<int> codes;
    codes.reserve(raw_labels.size());

    if (task == Task::Binary) {
        map.names = {"Normal", "Attack"};
        const std::string normal_canon = canon(normal_class);
        for (const auto& raw : raw_labels) {
            codes.push_back(canon(raw) == normal_canon ? 0 : 1);
        }
    } else {
        map.names = kMulticlassNames;
        for (const auto& raw : raw_labels) {
            const int code = multiclass_code(canon(raw));
            if (code < 0)
                throw DataError("unknown multiclass label '" + raw +
                                "' (expected Normal, Grayhole, Blackhole, TDMA/Scheduling or "
                                "Flooding)");
            codes.push_back(code);
        }
    }
    return {std::move(codes), std::move(map)};
}

std::vector<std::string> decode_labels(const std::vector<int>& labels, const LabelMap& map) {
    std::vector<std::string> out;
    out.reserve(labels.size());
    for (int code : labels) out.push_back(map.name_of(code));
    return out;
}

ClassDistribution class_distribution(const std::vector<int>& labels, int n_classes) {
    if (labels.empty()) throw DataError("class_distribution: empty label vector");
    int k = n_classes;
    if (k < 0) {
        k = 0;
        for (int c : labels) k = std::max(k, c + 1);
    }
    ClassDistribution dist;
    dist.counts.assign(static_cast<std::size_t>(k), 0);
    for (int c : labels) {
        if (c < 0 || c >= k) throw DataError("class_distribution: label code out of range");
        ++dist.counts[static_cast<std::size_t>(c)];
    }
    dist.total = static_cast<std::int64_t>(labels.size());
    return dist;
}

Dataset make_dataset(RawDataset raw, Task task, const std::string& normal_class) {
    auto [codes, map] = encode_labels(raw.raw_labels, task, normal_class);
    Dataset ds;
    ds.features = std::move(raw.features);
    ds.labels = std::move(codes);
    ds.feature_names = std::move(raw.feature_names);
    ds.label_map = std::move(map);
    return ds;
}

}  // namespace wsnids
