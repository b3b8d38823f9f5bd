#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relnet/relational_network.hpp"

namespace relnet {

struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + fp + tn + fn; }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

inline ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted) {
    if (truth.size() != predicted.size()) throw std::invalid_argument("confusion: length mismatch");
    if (truth.empty()) throw std::invalid_argument("confusion: no predictions");
    ConfusionMatrix m;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool t = truth[i] != 0;
        const bool p = predicted[i] != 0;
        if (t && p) ++m.tp;
        else if (t) ++m.fn;
        else if (p) ++m.fp;
        else ++m.tn;
    }
    return m;
}

/// Percentage of correct predictions, 100 (tp + tn) / total.
inline double accuracy(const ConfusionMatrix& m) {
    if (m.total() == 0) throw std::invalid_argument("accuracy: empty confusion matrix");
    return 100.0 * static_cast<double>(m.tp + m.tn) / static_cast<double>(m.total());
}

/// Rates whose denominator is zero are left empty rather than reported as 0.
struct Rates {
    std::optional<double> ppv;  // tp / (tp + fp)
    std::optional<double> tpr;  // tp / (tp + fn)
    std::optional<double> tnr;  // tn / (tn + fp)
};

inline Rates rates(const ConfusionMatrix& m) {
    auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(den);
    };
    return {ratio(m.tp, m.tp + m.fp), ratio(m.tp, m.tp + m.fn), ratio(m.tn, m.tn + m.fp)};
}

// ---- relation report ------------------------------------------------------

struct RelationEntry {
    std::string feature;
    double weight_into_target = 0.0;
    double weight_from_target = 0.0;
};

struct RelationReport {
    std::string target;
    ActivationKind activation = ActivationKind::Linear;
    std::vector<RelationEntry> entries;  // descending weight_into_target
};

/// Ranks every other node by how strongly the target depends on it.
/// Equal weights keep node order.
inline RelationReport relation_report(const RelationalNetwork& net, std::size_t target) {
    if (target >= net.size()) throw std::out_of_range("relation_report: target out of range");
    RelationReport rep{net.node_names()[target], net.activation(), {}};
    for (std::size_t j = 0; j < net.size(); ++j) {
        if (j == target) continue;
        rep.entries.push_back({net.node_names()[j], net.weight(target, j), net.weight(j, target)});
    }
    std::stable_sort(rep.entries.begin(), rep.entries.end(), [](const auto& a, const auto& b) {
        return a.weight_into_target > b.weight_into_target;
    });
    return rep;
}

inline nlohmann::ordered_json to_json(const RelationReport& r) {
    nlohmann::ordered_json j;
    j["target"] = r.target;
    j["activation"] = std::string(to_string(r.activation));
    j["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : r.entries) {
        j["entries"].push_back({{"feature", e.feature},
                                {"weight_into_target", e.weight_into_target},
                                {"weight_from_target", e.weight_from_target}});
    }
    return j;
}

namespace detail {

inline std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

inline std::string pad(std::string s, std::size_t width, bool left = true) {
    if (s.size() >= width) return s;
    return left ? s + std::string(width - s.size(), ' ') : std::string(width - s.size(), ' ') + s;
}

}  // namespace detail

/// Two columns: feature and its weight into the target.
inline std::string to_text(const RelationReport& r) {
    std::size_t width = 7;
    for (const auto& e : r.entries) width = std::max(width, e.feature.size());
    std::ostringstream out;
    out << "# relations into " << r.target << " (" << to_string(r.activation) << ")\n";
    out << detail::pad("feature", width) << "  weight\n";
    for (const auto& e : r.entries) {
        out << detail::pad(e.feature, width) << "  " << detail::fixed(e.weight_into_target, 4) << '\n';
    }
    return out.str();
}

// ---- model comparison -----------------------------------------------------

struct NamedMatrix {
    std::string name;
    ConfusionMatrix matrix;
};

struct ComparisonRow {
    std::string name;
    ConfusionMatrix matrix;
    double accuracy = 0.0;
    Rates rates;
};

/// One row per model, sorted by accuracy (highest first); ties keep input
/// order.
inline std::vector<ComparisonRow> compare(const std::vector<NamedMatrix>& models) {
    if (models.empty()) throw std::invalid_argument("compare: no models");
    std::vector<ComparisonRow> rows;
    rows.reserve(models.size());
    for (const auto& m : models) rows.push_back({m.name, m.matrix, accuracy(m.matrix), rates(m.matrix)});
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.accuracy > b.accuracy; });
    return rows;
}

inline nlohmann::ordered_json to_json(const ConfusionMatrix& m) {
    return {{"tp", m.tp}, {"fp", m.fp}, {"tn", m.tn}, {"fn", m.fn}};
}

inline nlohmann::ordered_json to_json(const std::vector<ComparisonRow>& rows) {
    auto opt = [](const std::optional<double>& v) -> nlohmann::ordered_json {
        return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    };
    nlohmann::ordered_json j;
    j["models"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json metrics;
        metrics["accuracy"] = r.accuracy;
        metrics["ppv"] = opt(r.rates.ppv);
        metrics["tpr"] = opt(r.rates.tpr);
        metrics["tnr"] = opt(r.rates.tnr);
        j["models"].push_back({{"name", r.name}, {"matrix", to_json(r.matrix)}, {"metrics", metrics}});
    }
    return j;
}

/// Aligned plain-text table; accuracy in percent to two decimals, rates to
/// four, "-" for undefined rates.
inline std::string to_text(const std::vector<ComparisonRow>& rows) {
    std::size_t width = 5;
    for (const auto& r : rows) width = std::max(width, r.name.size());
    auto rate = [](const std::optional<double>& v) { return v ? detail::fixed(*v, 4) : std::string("-"); };
    std::ostringstream out;
    out << detail::pad("model", width) << "  " << detail::pad("accuracy", 9, false) << "  "
        << detail::pad("ppv", 6, false) << "  " << detail::pad("tpr", 6, false) << "  "
        << detail::pad("tnr", 6, false) << "  " << detail::pad("tp", 5, false) << ' '
        << detail::pad("fn", 5, false) << ' ' << detail::pad("fp", 5, false) << ' '
        << detail::pad("tn", 5, false) << '\n';
    for (const auto& r : rows) {
        out << detail::pad(r.name, width) << "  " << detail::pad(detail::fixed(r.accuracy, 2) + "%", 9, false)
            << "  " << detail::pad(rate(r.rates.ppv), 6, false) << "  " << detail::pad(rate(r.rates.tpr), 6, false)
            << "  " << detail::pad(rate(r.rates.tnr), 6, false) << "  "
            << detail::pad(std::to_string(r.matrix.tp), 5, false) << ' '
            << detail::pad(std::to_string(r.matrix.fn), 5, false) << ' '
            << detail::pad(std::to_string(r.matrix.fp), 5, false) << ' '
            << detail::pad(std::to_string(r.matrix.tn), 5, false) << '\n';
    }
    return out.str();
}

/// Plot data for an accuracy bar chart: model,accuracy.
inline std::string to_plot_csv(const std::vector<ComparisonRow>& rows) {
    std::ostringstream out;
    out << "model,accuracy\n";
    for (const auto& r : rows) out << r.name << ',' << detail::fixed(r.accuracy, 2) << '\n';
    return out.str();
}

}  // namespace relnet
