#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relnet/classification.hpp"
#include "relnet/matrix.hpp"

namespace relnet {

/// Two-layer perceptron with tanh hidden units and a single logistic output.
///
/// w1 is M x (d+1) and w2 is 1 x (M+1); the last column of each holds the
/// bias. Output: logistic(w2 . [tanh(w1 . [x; 1]); 1]).
class MlpModel {
public:
    MlpModel(Matrix w1, Matrix w2) : w1_(std::move(w1)), w2_(std::move(w2)) {
        if (w1_.rows() < 1 || w1_.cols() < 2) throw std::invalid_argument("MlpModel: need d >= 1, M >= 1");
        if (w2_.rows() != 1 || w2_.cols() != w1_.rows() + 1) {
            throw std::invalid_argument("MlpModel: w2 must be 1 x (M + 1)");
        }
        for (double v : w1_.values()) {
            if (!std::isfinite(v)) throw std::invalid_argument("MlpModel: non-finite weight");
        }
        for (double v : w2_.values()) {
            if (!std::isfinite(v)) throw std::invalid_argument("MlpModel: non-finite weight");
        }
    }

    static MlpModel zeros(std::size_t d, std::size_t hidden) {
        return {Matrix(hidden, d + 1, 0.0), Matrix(1, hidden + 1, 0.0)};
    }

    std::size_t input_dim() const noexcept { return w1_.cols() - 1; }
    std::size_t hidden_dim() const noexcept { return w1_.rows(); }
    const Matrix& w1() const noexcept { return w1_; }
    const Matrix& w2() const noexcept { return w2_; }
    Matrix& w1() noexcept { return w1_; }
    Matrix& w2() noexcept { return w2_; }

    friend bool operator==(const MlpModel&, const MlpModel&) = default;

private:
    Matrix w1_;
    Matrix w2_;
};

/// Gradient of the per-example squared error, same shapes as the model.
struct MlpGradient {
    Matrix w1;
    Matrix w2;
};

namespace detail {

inline double logistic(double a) noexcept { return 1.0 / (1.0 + std::exp(-a)); }

inline void check_input(const MlpModel& m, std::span<const double> x) {
    if (x.size() != m.input_dim()) {
        throw std::invalid_argument("MLP input has length " + std::to_string(x.size()) +
                                    ", model expects " + std::to_string(m.input_dim()));
    }
}

/// Forward pass filling `hidden` (length M); returns the output.
inline double forward_into(const MlpModel& m, std::span<const double> x, std::span<double> hidden) {
    const auto& w1 = m.w1();
    const auto& w2 = m.w2();
    const std::size_t d = m.input_dim();
    double a = w2(0, m.hidden_dim());
    for (std::size_t j = 0; j < m.hidden_dim(); ++j) {
        const auto row = w1.row(j);
        double z = row[d];
        for (std::size_t i = 0; i < d; ++i) z += row[i] * x[i];
        hidden[j] = std::tanh(z);
        a += w2(0, j) * hidden[j];
    }
    return logistic(a);
}

/// Backpropagation of (y - label)^2 into preallocated gradient buffers.
/// Returns the loss.
inline double backprop_into(const MlpModel& m, std::span<const double> x, double label,
                            std::span<double> hidden, Matrix& g1, Matrix& g2) {
    const std::size_t d = m.input_dim();
    const std::size_t hdim = m.hidden_dim();
    const double y = forward_into(m, x, hidden);
    const double diff = y - label;
    const double delta_out = 2.0 * diff * y * (1.0 - y);
    for (std::size_t j = 0; j < hdim; ++j) g2(0, j) = delta_out * hidden[j];
    g2(0, hdim) = delta_out;
    for (std::size_t j = 0; j < hdim; ++j) {
        const double delta_h = delta_out * m.w2()(0, j) * (1.0 - hidden[j] * hidden[j]);
        auto row = g1.row(j);
        for (std::size_t i = 0; i < d; ++i) row[i] = delta_h * x[i];
        row[d] = delta_h;
    }
    return diff * diff;
}

}  // namespace detail

inline double forward(const MlpModel& model, std::span<const double> input) {
    detail::check_input(model, input);
    std::vector<double> hidden(model.hidden_dim());
    return detail::forward_into(model, input, hidden);
}

/// Exact gradient of (forward(input) - label)^2 with respect to every weight.
inline MlpGradient gradient(const MlpModel& model, std::span<const double> input, double label) {
    detail::check_input(model, input);
    std::vector<double> hidden(model.hidden_dim());
    MlpGradient g{Matrix(model.w1().rows(), model.w1().cols()), Matrix(1, model.w2().cols())};
    detail::backprop_into(model, input, label, hidden, g.w1, g.w2);
    return g;
}

/// Rounds the output; exactly 0.5 classifies as 1.
inline Classification classify_mlp(const MlpModel& model, std::span<const double> input) {
    const double raw = forward(model, input);
    return {raw >= 0.5 ? 1 : 0, raw};
}

struct TrainingConfig {
    std::size_t cycles = 1000;
    double learning_rate = 0.01;
    double momentum = 0.9;
    std::uint64_t seed = 0;

    void validate() const {
        if (cycles < 1) throw std::invalid_argument("cycles must be >= 1");
        if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
            throw std::invalid_argument("learning_rate must be > 0");
        }
        if (!(momentum >= 0.0 && momentum < 1.0)) throw std::invalid_argument("momentum must be in [0, 1)");
    }
};

/// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] per layer.
inline MlpModel init_mlp(std::size_t d, std::size_t hidden, std::uint64_t seed) {
    if (d < 1 || hidden < 1) throw std::invalid_argument("MLP needs d >= 1 and M >= 1");
    std::mt19937_64 rng(seed);
    MlpModel m = MlpModel::zeros(d, hidden);
    const double b1 = 1.0 / std::sqrt(static_cast<double>(d));
    const double b2 = 1.0 / std::sqrt(static_cast<double>(hidden));
    std::uniform_real_distribution<double> u1(-b1, b1);
    std::uniform_real_distribution<double> u2(-b2, b2);
    for (double& v : m.w1().values()) v = u1(rng);
    for (double& v : m.w2().values()) v = u2(rng);
    return m;
}

/// Online backpropagation with momentum on an existing model: each cycle
/// visits every record once, in the given order, updating after each record.
inline void fit_mlp(MlpModel& model, const Matrix& inputs, std::span<const double> targets,
                    const TrainingConfig& config) {
    config.validate();
    if (inputs.cols() != model.input_dim()) throw std::invalid_argument("fit_mlp: input width mismatch");
    if (targets.size() != inputs.rows()) throw std::invalid_argument("fit_mlp: target count mismatch");

    Matrix g1(model.w1().rows(), model.w1().cols());
    Matrix g2(1, model.w2().cols());
    Matrix v1(g1.rows(), g1.cols());
    Matrix v2(1, g2.cols());
    std::vector<double> scratch(model.hidden_dim());

    auto step = [&](Matrix& w, Matrix& v, const Matrix& g) {
        auto& wv = w.values();
        auto& vv = v.values();
        const auto& gv = g.values();
        for (std::size_t i = 0; i < wv.size(); ++i) {
            vv[i] = config.momentum * vv[i] - config.learning_rate * gv[i];
            wv[i] += vv[i];
        }
    };

    for (std::size_t cycle = 0; cycle < config.cycles; ++cycle) {
        for (std::size_t r = 0; r < inputs.rows(); ++r) {
            detail::backprop_into(model, inputs.row(r), targets[r], scratch, g1, g2);
            step(model.w1(), v1, g1);
            step(model.w2(), v2, g2);
        }
    }
    for (double v : model.w1().values()) {
        if (!std::isfinite(v)) throw std::runtime_error("fit_mlp: weights diverged");
    }
}

/// Seeded initialization followed by fit_mlp. The training set must hold
/// equal numbers of 0 and 1 labels.
inline MlpModel train_mlp(const Matrix& inputs, std::span<const int> labels, const TrainingConfig& config,
                          std::size_t hidden) {
    config.validate();
    if (inputs.rows() == 0) throw std::invalid_argument("train_mlp: no training records");
    if (labels.size() != inputs.rows()) throw std::invalid_argument("train_mlp: label count mismatch");
    std::size_t positives = 0;
    for (int l : labels) {
        if (l != 0 && l != 1) throw std::invalid_argument("train_mlp: labels must be 0 or 1");
        positives += static_cast<std::size_t>(l);
    }
    if (2 * positives != labels.size()) {
        throw std::invalid_argument("train_mlp: training data must be balanced (" + std::to_string(positives) +
                                    " positives of " + std::to_string(labels.size()) + ")");
    }
    MlpModel model = init_mlp(inputs.cols(), hidden, config.seed);
    const std::vector<double> targets(labels.begin(), labels.end());
    fit_mlp(model, inputs, targets, config);
    return model;
}

// ---- serialization --------------------------------------------------------

inline constexpr int kMlpSchemaVersion = 1;

inline nlohmann::ordered_json to_json(const MlpModel& m) {
    nlohmann::ordered_json j;
    j["schema_version"] = kMlpSchemaVersion;
    j["d"] = m.input_dim();
    j["M"] = m.hidden_dim();
    j["w1"] = m.w1().to_rows();
    j["w2"] = m.w2().to_rows();
    return j;
}

inline MlpModel mlp_from_json(const nlohmann::ordered_json& j) {
    if (!j.contains("d") || !j.contains("M") || !j.contains("w1") || !j.contains("w2")) {
        throw std::invalid_argument("MLP JSON lacks d/M/w1/w2");
    }
    if (j.value("schema_version", 0) != kMlpSchemaVersion) {
        throw std::invalid_argument("unsupported MLP schema_version");
    }
    MlpModel m(Matrix::from_rows(j.at("w1").get<std::vector<std::vector<double>>>()),
               Matrix::from_rows(j.at("w2").get<std::vector<std::vector<double>>>()));
    if (m.input_dim() != j.at("d").get<std::size_t>() || m.hidden_dim() != j.at("M").get<std::size_t>()) {
        throw std::invalid_argument("MLP JSON: d/M disagree with weight shapes");
    }
    return m;
}

}  // namespace relnet
