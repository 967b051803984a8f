#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace wsnids {

// Dense row-major matrix of doubles. Rows are samples, columns are features.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
        Matrix m;
        for (const auto& r : rows) m.push_row(r);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0; }

    double& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    void push_row(std::span<const double> r) {
        if (rows_ == 0 && cols_ == 0) {
            cols_ = r.size();
        } else if (r.size() != cols_) {
            throw std::invalid_argument("Matrix::push_row: width mismatch");
        }
        data_.insert(data_.end(), r.begin(), r.end());
        ++rows_;
    }

    Matrix select_rows(std::span<const std::size_t> ids) const {
        Matrix out(ids.size(), cols_);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const double* src = row_ptr(ids[i]);
            double* dst = out.data_.data() + i * cols_;
            for (std::size_t j = 0; j < cols_; ++j) dst[j] = src[j];
        }
        return out;
    }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

}  // namespace wsnids
