#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace relnet {

/// Edge function applied to a source node before weighting.
enum class ActivationKind { Linear, Logistic, HyperbolicTangent };

inline double activate(ActivationKind kind, double x) noexcept {
    switch (kind) {
        case ActivationKind::Linear: return x;
        case ActivationKind::Logistic: return 1.0 / (1.0 + std::exp(-x));
        case ActivationKind::HyperbolicTangent: return std::tanh(x);
    }
    return x;
}

inline std::string_view to_string(ActivationKind kind) noexcept {
    switch (kind) {
        case ActivationKind::Linear: return "linear";
        case ActivationKind::Logistic: return "logistic";
        case ActivationKind::HyperbolicTangent: return "tanh";
    }
    return "linear";
}

inline ActivationKind parse_activation(std::string_view name) {
    if (name == "linear") return ActivationKind::Linear;
    if (name == "logistic") return ActivationKind::Logistic;
    if (name == "tanh") return ActivationKind::HyperbolicTangent;
    throw std::invalid_argument("unknown activation '" + std::string(name) +
                                "' (expected linear, logistic or tanh)");
}

}  // namespace relnet
