#pragma once

#include <cstddef>
#include <vector>

#include "wsnids/matrix.hpp"
#include "wsnids/rng.hpp"

namespace wsnids::detail {

// Fully connected network: ReLU hidden activations, softmax output,
// cross-entropy loss. Kept separate from the classifier wrapper so the
// gradients can be checked against finite differences directly.
struct MlpNet {
    std::vector<int> sizes;                   // [inputs, hidden..., classes]
    std::vector<Matrix> weights;              // weights[l]: sizes[l+1] x sizes[l]
    std::vector<std::vector<double>> biases;  // biases[l]: sizes[l+1]

    void init(const std::vector<int>& layer_sizes, Rng& rng);

    // Class probabilities for a batch.
    Matrix forward(const Matrix& batch) const;

    // Mean cross-entropy over the batch.
    double loss(const Matrix& batch, const std::vector<int>& targets) const;

    // Writes batch-mean gradients into grad_w / grad_b (same shapes as the
    // parameters, zeroed by this call) and returns the loss.
    double backward(const Matrix& batch, const std::vector<int>& targets,
                    std::vector<Matrix>& grad_w,
                    std::vector<std::vector<double>>& grad_b) const;

    void step(const std::vector<Matrix>& grad_w, const std::vector<std::vector<double>>& grad_b,
              double learning_rate);

    // Flat parameter access for finite-difference tests.
    std::size_t parameter_count() const;
    double get_parameter(std::size_t index) const;
    void set_parameter(std::size_t index, double value);
};

}  // namespace wsnids::detail
