#include "wsnids/detail/mlp_net.hpp"

#include <algorithm>
#include <cmath>

#include "wsnids/errors.hpp"

namespace wsnids::detail {

namespace {

// In-place softmax of one row with max subtraction.
void softmax_row(std::vector<double>& z) {
    const double zmax = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double& v : z) {
        v = std::exp(v - zmax);
        sum += v;
    }
    for (double& v : z) v /= sum;
}

}  // namespace

void MlpNet::init(const std::vector<int>& layer_sizes, Rng& rng) {
    if (layer_sizes.size() < 2) throw ConfigError("MlpNet: need input and output layers");
    for (int s : layer_sizes) {
        if (s < 1) throw ConfigError("MlpNet: every layer needs at least one unit");
    }
    sizes = layer_sizes;
    weights.clear();
    biases.clear();
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const auto fan_in = static_cast<std::size_t>(sizes[l]);
        const auto fan_out = static_cast<std::size_t>(sizes[l + 1]);
        const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
        Matrix w(fan_out, fan_in);
        for (double& v : w.data()) v = (2.0 * rng.unit() - 1.0) * scale;
        weights.push_back(std::move(w));
        biases.emplace_back(fan_out, 0.0);
    }
}

Matrix MlpNet::forward(const Matrix& batch) const {
    const std::size_t n = batch.rows();
    const std::size_t n_layers = weights.size();
    Matrix out(n, static_cast<std::size_t>(sizes.back()));

    std::vector<double> act, next;
    for (std::size_t i = 0; i < n; ++i) {
        act.assign(batch.row(i).begin(), batch.row(i).end());
        for (std::size_t l = 0; l < n_layers; ++l) {
            const Matrix& w = weights[l];
            next.assign(w.rows(), 0.0);
            for (std::size_t r = 0; r < w.rows(); ++r) {
                const double* wr = w.row_ptr(r);
                double z = biases[l][r];
                for (std::size_t c = 0; c < w.cols(); ++c) z += wr[c] * act[c];
                next[r] = z;
            }
            if (l + 1 < n_layers) {
                for (double& v : next) v = std::max(v, 0.0);
            } else {
                softmax_row(next);
            }
            act.swap(next);
        }
        auto row = out.row(i);
        std::copy(act.begin(), act.end(), row.begin());
    }
    return out;
}

double MlpNet::loss(const Matrix& batch, const std::vector<int>& targets) const {
    const Matrix probs = forward(batch);
    double total = 0.0;
    for (std::size_t i = 0; i < batch.rows(); ++i) {
        const double p = probs.at(i, static_cast<std::size_t>(targets[i]));
        total += -std::log(std::max(p, 1e-300));
    }
    return total / static_cast<double>(batch.rows());
}

double MlpNet::backward(const Matrix& batch, const std::vector<int>& targets,
                        std::vector<Matrix>& grad_w,
                        std::vector<std::vector<double>>& grad_b) const {
    const std::size_t n = batch.rows();
    const std::size_t n_layers = weights.size();

    grad_w.resize(n_layers);
    grad_b.resize(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l) {
        grad_w[l] = Matrix(weights[l].rows(), weights[l].cols());
        grad_b[l].assign(biases[l].size(), 0.0);
    }

    double total_loss = 0.0;
    std::vector<std::vector<double>> activations(n_layers + 1);
    std::vector<double> delta, prev_delta;

    for (std::size_t i = 0; i < n; ++i) {
        activations[0].assign(batch.row(i).begin(), batch.row(i).end());
        for (std::size_t l = 0; l < n_layers; ++l) {
            const Matrix& w = weights[l];
            auto& out = activations[l + 1];
            out.assign(w.rows(), 0.0);
            for (std::size_t r = 0; r < w.rows(); ++r) {
                const double* wr = w.row_ptr(r);
                double z = biases[l][r];
                for (std::size_t c = 0; c < w.cols(); ++c) z += wr[c] * activations[l][c];
                out[r] = z;
            }
            if (l + 1 < n_layers) {
                for (double& v : out) v = std::max(v, 0.0);
            } else {
                softmax_row(out);
            }
        }

        const auto target = static_cast<std::size_t>(targets[i]);
        total_loss += -std::log(std::max(activations[n_layers][target], 1e-300));

        // output delta: softmax + cross-entropy
        delta = activations[n_layers];
        delta[target] -= 1.0;

        for (std::size_t l = n_layers; l-- > 0;) {
            Matrix& gw = grad_w[l];
            auto& gb = grad_b[l];
            const auto& input = activations[l];
            for (std::size_t r = 0; r < gw.rows(); ++r) {
                const double d = delta[r];
                gb[r] += d;
                double* gwr = gw.data().data() + r * gw.cols();
                for (std::size_t c = 0; c < gw.cols(); ++c) gwr[c] += d * input[c];
            }
            if (l == 0) break;
            const Matrix& w = weights[l];
            prev_delta.assign(w.cols(), 0.0);
            for (std::size_t r = 0; r < w.rows(); ++r) {
                const double d = delta[r];
                const double* wr = w.row_ptr(r);
                for (std::size_t c = 0; c < w.cols(); ++c) prev_delta[c] += wr[c] * d;
            }
            // ReLU mask: activations[l] is the rectified output of layer l-1
            for (std::size_t c = 0; c < prev_delta.size(); ++c) {
                if (activations[l][c] <= 0.0) prev_delta[c] = 0.0;
            }
            delta.swap(prev_delta);
        }
    }

    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t l = 0; l < n_layers; ++l) {
        for (double& v : grad_w[l].data()) v *= inv_n;
        for (double& v : grad_b[l]) v *= inv_n;
    }
    return total_loss * inv_n;
}

void MlpNet::step(const std::vector<Matrix>& grad_w,
                  const std::vector<std::vector<double>>& grad_b, double learning_rate) {
    for (std::size_t l = 0; l < weights.size(); ++l) {
        auto& w = weights[l].data();
        const auto& gw = grad_w[l].data();
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= learning_rate * gw[i];
        for (std::size_t r = 0; r < biases[l].size(); ++r)
            biases[l][r] -= learning_rate * grad_b[l][r];
    }
}

std::size_t MlpNet::parameter_count() const {
    std::size_t count = 0;
    for (std::size_t l = 0; l < weights.size(); ++l)
        count += weights[l].data().size() + biases[l].size();
    return count;
}

double MlpNet::get_parameter(std::size_t index) const {
    for (std::size_t l = 0; l < weights.size(); ++l) {
        if (index < weights[l].data().size()) return weights[l].data()[index];
        index -= weights[l].data().size();
        if (index < biases[l].size()) return biases[l][index];
        index -= biases[l].size();
    }
    throw ConfigError("MlpNet: parameter index out of range");
}

void MlpNet::set_parameter(std::size_t index, double value) {
    for (std::size_t l = 0; l < weights.size(); ++l) {
        if (index < weights[l].data().size()) {
            weights[l].data()[index] = value;
            return;
        }
        index -= weights[l].data().size();
        if (index < biases[l].size()) {
            biases[l][index] = value;
            return;
        }
        index -= biases[l].size();
    }
    throw ConfigError("MlpNet: parameter index out of range");
}

}  // namespace wsnids::detail
