#include "wsnids/standardize.hpp"

#include <cmath>

#include "wsnids/errors.hpp"

namespace wsnids {

StandardizerParams fit_standardizer(const Matrix& features, bool sample_std) {
    const std::size_t n = features.rows();
    const std::size_t m = features.cols();
    if (n == 0) throw DataError("fit_standardizer: empty matrix");
    if (sample_std && n < 2) throw DataError("fit_standardizer: sample std needs at least 2 rows");

    StandardizerParams params;
    params.sample_std = sample_std;
    params.mean.assign(m, 0.0);
    params.stdev.assign(m, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const double* r = features.row_ptr(i);
        for (std::size_t j = 0; j < m; ++j) params.mean[j] += r[j];
    }
    for (std::size_t j = 0; j < m; ++j) params.mean[j] /= static_cast<double>(n);

    for (std::size_t i = 0; i < n; ++i) {
        const double* r = features.row_ptr(i);
        for (std::size_t j = 0; j < m; ++j) {
            const double d = r[j] - params.mean[j];
            params.stdev[j] += d * d;
        }
    }
    const double denom = sample_std ? static_cast<double>(n - 1) : static_cast<double>(n);
    for (std::size_t j = 0; j < m; ++j) params.stdev[j] = std::sqrt(params.stdev[j] / denom);

    return params;
}

void transform_in_place(const StandardizerParams& params, Matrix& features) {
    const std::size_t m = features.cols();
    if (params.mean.size() != m || params.stdev.size() != m)
        throw DataError("transform: column count does not match standardizer params");

    for (std::size_t i = 0; i < features.rows(); ++i) {
        auto r = features.row(i);
        for (std::size_t j = 0; j < m; ++j) {
            r[j] = params.stdev[j] > kStdEpsilon ? (r[j] - params.mean[j]) / params.stdev[j] : 0.0;
        }
    }
}

Matrix transform(const StandardizerParams& params, const Matrix& features) {
    Matrix out = features;
    transform_in_place(params, out);
    return out;
}

}  // namespace wsnids
