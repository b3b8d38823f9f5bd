#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "relnet/activation.hpp"
#include "relnet/classification.hpp"
#include "relnet/matrix.hpp"

namespace relnet {

/// A relational network: every feature is a node, and each node is modelled
/// as a weighted sum of the activated values of all other nodes.
///
/// `weights()(k, j)` is the weight of the edge j -> k, i.e. how strongly node
/// k depends on node j. Each unordered pair {j, k} therefore has two directed
/// weights. The diagonal is zero and every weight lies in [0, 1].
///
/// Instances are immutable once constructed and safe to evaluate from several
/// threads at once.
class RelationalNetwork {
public:
    RelationalNetwork(std::vector<std::string> node_names, Matrix weights, ActivationKind activation)
        : names_(std::move(node_names)), weights_(std::move(weights)), activation_(activation) {
        check_weights(names_.size(), weights_);
        std::unordered_set<std::string> seen;
        for (const auto& n : names_) {
            if (!seen.insert(n).second) {
                throw std::invalid_argument("RelationalNetwork: duplicate node name '" + n + "'");
            }
        }
    }

    static RelationalNetwork zeros(std::vector<std::string> node_names, ActivationKind activation) {
        const auto n = node_names.size();
        return {std::move(node_names), Matrix(n, n, 0.0), activation};
    }

    /// Throws unless `w` is an n x n matrix with n >= 2, zero diagonal and
    /// entries in [0, 1].
    static void check_weights(std::size_t n, const Matrix& w) {
        if (n < 2) throw std::invalid_argument("RelationalNetwork: at least two nodes required");
        if (w.rows() != n || w.cols() != n) {
            throw std::invalid_argument("RelationalNetwork: weight matrix must be N x N");
        }
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t j = 0; j < n; ++j) {
                const double v = w(k, j);
                if (k == j && v != 0.0) {
                    throw std::invalid_argument("RelationalNetwork: diagonal weights must be zero");
                }
                if (!(v >= 0.0 && v <= 1.0)) {
                    throw std::invalid_argument("RelationalNetwork: weights must lie in [0, 1]");
                }
            }
        }
    }

    std::size_t size() const noexcept { return names_.size(); }
    const std::vector<std::string>& node_names() const noexcept { return names_; }
    const Matrix& weights() const noexcept { return weights_; }
    double weight(std::size_t to, std::size_t from) const noexcept { return weights_(to, from); }
    ActivationKind activation() const noexcept { return activation_; }

    std::size_t index_of(const std::string& name) const {
        auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end()) throw std::out_of_range("no node named '" + name + "'");
        return static_cast<std::size_t>(it - names_.begin());
    }

    friend bool operator==(const RelationalNetwork&, const RelationalNetwork&) = default;

private:
    std::vector<std::string> names_;
    Matrix weights_;
    ActivationKind activation_;
};

namespace detail {

inline void check_observed(const RelationalNetwork& net, std::span<const double> observed) {
    if (observed.size() != net.size()) {
        throw std::invalid_argument("observed vector length " + std::to_string(observed.size()) +
                                    " does not match network size " + std::to_string(net.size()));
    }
}

inline void check_node(const RelationalNetwork& net, std::size_t k) {
    if (k >= net.size()) {
        throw std::out_of_range("node index " + std::to_string(k) + " out of range");
    }
}

}  // namespace detail

/// Raw (unclamped) estimate of node k from every other observed node.
/// observed[k] is ignored.
inline double node_predict(const RelationalNetwork& net, std::span<const double> observed,
                           std::size_t k) {
    detail::check_node(net, k);
    detail::check_observed(net, observed);
    const auto row = net.weights().row(k);
    double sum = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (j == k) continue;
        sum += row[j] * activate(net.activation(), observed[j]);
    }
    return sum;
}

inline std::vector<double> predict_all(const RelationalNetwork& net, std::span<const double> observed) {
    detail::check_observed(net, observed);
    std::vector<double> out(net.size());
    for (std::size_t k = 0; k < net.size(); ++k) out[k] = node_predict(net, observed, k);
    return out;
}

/// Clamps the raw estimate into [0, 1] and rounds; a value of exactly 0.5
/// rounds up.
inline Classification classify_target(const RelationalNetwork& net, std::span<const double> observed,
                                      std::size_t target) {
    const double raw = std::clamp(node_predict(net, observed, target), 0.0, 1.0);
    return {raw >= 0.5 ? 1 : 0, raw};
}

// ---- serialization --------------------------------------------------------

inline constexpr int kRelnetSchemaVersion = 1;

inline nlohmann::ordered_json to_json(const RelationalNetwork& net) {
    nlohmann::ordered_json j;
    j["schema_version"] = kRelnetSchemaVersion;
    j["node_names"] = net.node_names();
    j["activation"] = std::string(to_string(net.activation()));
    j["weights"] = net.weights().to_rows();
    return j;
}

inline RelationalNetwork relational_network_from_json(const nlohmann::ordered_json& j) {
    if (!j.contains("node_names") || !j.contains("weights") || !j.contains("activation")) {
        throw std::invalid_argument("relational network JSON lacks node_names/weights/activation");
    }
    if (j.value("schema_version", 0) != kRelnetSchemaVersion) {
        throw std::invalid_argument("unsupported relational network schema_version");
    }
    auto names = j.at("node_names").get<std::vector<std::string>>();
    auto rows = j.at("weights").get<std::vector<std::vector<double>>>();
    return {std::move(names), Matrix::from_rows(rows),
            parse_activation(j.at("activation").get<std::string>())};
}

}  // namespace relnet
