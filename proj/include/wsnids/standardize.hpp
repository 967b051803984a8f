#pragma once

#include <vector>

#include "wsnids/matrix.hpp"

namespace wsnids {

// Columns with standard deviation at or below this are treated as constant
// and transform to 0.
inline constexpr double kStdEpsilon = 1e-12;

// Per-column mean and standard deviation fitted on training data.
struct StandardizerParams {
    std::vector<double> mean;
    std::vector<double> stdev;
    bool sample_std = false;  // population (divide by n) unless set
};

StandardizerParams fit_standardizer(const Matrix& features, bool sample_std = false);

Matrix transform(const StandardizerParams& params, const Matrix& features);

void transform_in_place(const StandardizerParams& params, Matrix& features);

}  // namespace wsnids
