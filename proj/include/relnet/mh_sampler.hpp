#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "relnet/activation.hpp"
#include "relnet/matrix.hpp"
#include "relnet/relational_network.hpp"

namespace relnet {

/// Which node errors enter the objective.
enum class ErrorMode { AllFeatures, TargetOnly };

inline std::string_view to_string(ErrorMode m) noexcept {
    return m == ErrorMode::AllFeatures ? "all-features" : "target-only";
}

inline ErrorMode parse_error_mode(std::string_view s) {
    if (s == "all-features" || s == "all") return ErrorMode::AllFeatures;
    if (s == "target-only" || s == "target") return ErrorMode::TargetOnly;
    throw std::invalid_argument("unknown mode '" + std::string(s) +
                                "' (expected all-features or target-only)");
}

struct SamplerConfig {
    std::uint64_t seed = 0;
    std::size_t max_iterations = 20000;
    double step_scale = 0.05;   // proposal std-dev, in weight units
    double temperature = 0.01;  // 0 gives greedy descent
    ErrorMode mode = ErrorMode::AllFeatures;
    std::size_t target = 0;
    std::size_t trace_stride = 1;  // keep every k-th best-so-far error

    void validate() const {
        if (!(step_scale > 0.0) || !std::isfinite(step_scale)) {
            throw std::invalid_argument("step_scale must be > 0");
        }
        if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
            throw std::invalid_argument("temperature must be >= 0");
        }
        if (trace_stride == 0) throw std::invalid_argument("trace_stride must be >= 1");
    }
};

struct TrainReport {
    double best_error = 0.0;
    std::vector<double> error_trace;  // best-so-far error, non-increasing
    std::size_t accepted_count = 0;
    std::size_t iterations_run = 0;
};

inline nlohmann::ordered_json to_json(const TrainReport& r) {
    nlohmann::ordered_json j;
    j["best_error"] = r.best_error;
    j["accepted_count"] = r.accepted_count;
    j["iterations_run"] = r.iterations_run;
    j["error_trace"] = r.error_trace;
    return j;
}

namespace detail {

inline void check_training_data(std::size_t n, const Matrix& data, ErrorMode mode, std::size_t target) {
    if (data.rows() == 0) throw std::invalid_argument("mse: dataset is empty");
    if (data.cols() != n) {
        throw std::invalid_argument("mse: dataset has " + std::to_string(data.cols()) +
                                    " columns, network has " + std::to_string(n) + " nodes");
    }
    if (mode == ErrorMode::TargetOnly && target >= n) {
        throw std::out_of_range("mse: target node out of range");
    }
}

/// Mean square error for weights `w` given the data and its activated copy.
/// Summation runs in record order so the result is reproducible bit for bit.
inline double mse_activated(const Matrix& w, const Matrix& data, const Matrix& activated,
                            ErrorMode mode, std::size_t target) {
    const std::size_t n = w.rows();
    double total = 0.0;
    for (std::size_t r = 0; r < data.rows(); ++r) {
        const auto f = activated.row(r);
        const auto x = data.row(r);
        auto node_error = [&](std::size_t k) {
            const auto wk = w.row(k);
            double pred = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != k) pred += wk[j] * f[j];
            }
            const double d = x[k] - pred;
            return d * d;
        };
        if (mode == ErrorMode::TargetOnly) {
            total += node_error(target);
        } else {
            for (std::size_t k = 0; k < n; ++k) total += node_error(k);
        }
    }
    const double terms = static_cast<double>(data.rows()) *
                         (mode == ErrorMode::TargetOnly ? 1.0 : static_cast<double>(n));
    return total / terms;
}

inline Matrix activate_all(const Matrix& data, ActivationKind kind) {
    Matrix out = data;
    for (double& v : out.values()) v = activate(kind, v);
    return out;
}

inline double reflect_unit(double v) noexcept {
    while (v < 0.0 || v > 1.0) v = v < 0.0 ? -v : 2.0 - v;
    return v;
}

}  // namespace detail

/// Mean square error between recorded node values and the network's raw
/// estimates. AllFeatures averages over every (record, node) pair;
/// TargetOnly averages over records at the target node only.
inline double mse(const RelationalNetwork& net, const Matrix& data, ErrorMode mode, std::size_t target) {
    detail::check_training_data(net.size(), data, mode, target);
    return detail::mse_activated(net.weights(), data, detail::activate_all(data, net.activation()),
                                 mode, target);
}

/// Gaussian random-walk proposal: every off-diagonal weight gets zero-mean
/// noise of std-dev `step_scale` and is reflected back into [0, 1].
template <class Rng>
Matrix propose(const Matrix& weights, double step_scale, Rng& rng) {
    std::normal_distribution<double> noise(0.0, step_scale);
    Matrix out = weights;
    for (std::size_t k = 0; k < out.rows(); ++k) {
        for (std::size_t j = 0; j < out.cols(); ++j) {
            if (j == k) continue;
            out(k, j) = detail::reflect_unit(out(k, j) + noise(rng));
        }
    }
    return out;
}

/// Metropolis rule: never reject an improvement (or a tie); otherwise accept
/// with probability exp(-(candidate - current) / temperature). A uniform draw
/// is consumed only in the second case.
template <class Rng>
bool metropolis_accept(double current_error, double candidate_error, double temperature, Rng& rng) {
    if (candidate_error <= current_error) return true;
    if (temperature <= 0.0) return false;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return unit(rng) < std::exp(-(candidate_error - current_error) / temperature);
}

struct TrainResult {
    RelationalNetwork network;
    TrainReport report;
};

/// Trains a relational network with a Metropolis-Hastings random walk over
/// the weight matrix, used as an optimizer: the lowest-error weights seen are
/// returned, not the chain's last state.
///
/// Initial weights are uniform on [0, 1]; proposals come from propose() and
/// are accepted by metropolis_accept().
inline TrainResult train(std::vector<std::string> node_names, const Matrix& data,
                         ActivationKind activation, const SamplerConfig& config) {
    config.validate();
    const std::size_t n = node_names.size();
    if (n < 2) throw std::invalid_argument("train: at least two nodes required");
    detail::check_training_data(n, data, config.mode, config.target);
    if (config.target >= n) throw std::out_of_range("train: target node out of range");

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Matrix current(n, n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j != k) current(k, j) = unit(rng);
        }
    }

    const Matrix activated = detail::activate_all(data, activation);
    auto error_of = [&](const Matrix& w) {
        return detail::mse_activated(w, data, activated, config.mode, config.target);
    };

    double current_error = error_of(current);
    Matrix best = current;
    TrainReport report;
    report.best_error = current_error;
    report.error_trace.push_back(current_error);

    for (std::size_t it = 1; it <= config.max_iterations; ++it) {
        Matrix candidate = propose(current, config.step_scale, rng);
        const double candidate_error = error_of(candidate);
        if (metropolis_accept(current_error, candidate_error, config.temperature, rng)) {
            current = std::move(candidate);
            current_error = candidate_error;
            ++report.accepted_count;
            if (current_error < report.best_error) {
                report.best_error = current_error;
                best = current;
            }
        }
        report.iterations_run = it;
        if (it % config.trace_stride == 0 || it == config.max_iterations) {
            report.error_trace.push_back(report.best_error);
        }
    }

    return {RelationalNetwork(std::move(node_names), std::move(best), activation), std::move(report)};
}

}  // namespace relnet
