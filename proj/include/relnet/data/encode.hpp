#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "relnet/data/dataset.hpp"
#include "relnet/data/schema.hpp"
#include "relnet/matrix.hpp"

namespace relnet::data {

/// Min-max scaling onto [0, 1]. The value must already be validated.
inline double normalize(double value, double min, double max) {
    if (!(min < max)) throw std::invalid_argument("normalize: min must be < max");
    if (!(value >= min && value <= max)) {
        throw std::out_of_range("normalize: value outside [min, max]; validate first");
    }
    return (value - min) / (max - min);
}

inline double denormalize(double unit, double min, double max) { return min + unit * (max - min); }

/// Inverse of normalize for integer features.
inline std::int64_t denormalize_integer(double unit, std::int64_t min, std::int64_t max) {
    return static_cast<std::int64_t>(std::llround(denormalize(unit, static_cast<double>(min),
                                                              static_cast<double>(max))));
}

/// Unsigned 4-bit binary, most significant bit first.
inline std::array<int, 4> four_bit(std::int64_t value) {
    if (value < 0 || value > 15) throw std::out_of_range("four_bit: value must lie in [0, 15]");
    return {static_cast<int>((value >> 3) & 1), static_cast<int>((value >> 2) & 1),
            static_cast<int>((value >> 1) & 1), static_cast<int>(value & 1)};
}

inline double normalize_feature(const FeatureSpec& f, std::int64_t v) {
    return normalize(static_cast<double>(v), static_cast<double>(f.min), static_cast<double>(f.max));
}

/// Every feature normalized, target included as an ordinary node.
inline std::vector<double> relnet_row(const FeatureSchema& schema, const CompleteRecord& r) {
    std::vector<double> out(schema.size());
    for (std::size_t i = 0; i < schema.size(); ++i) out[i] = normalize_feature(schema.features[i], r[i]);
    return out;
}

inline Matrix encode_relnet(const FeatureSchema& schema, std::span<const CompleteRecord> records) {
    Matrix m(records.size(), schema.size());
    for (std::size_t r = 0; r < records.size(); ++r) {
        const auto row = relnet_row(schema, records[r]);
        std::copy(row.begin(), row.end(), m.row(r).begin());
    }
    return m;
}

/// Width of the MLP input vector: one column per Normalized feature and four
/// per FourBit feature. 14 for the default schema.
inline std::size_t mlp_input_dim(const FeatureSchema& schema) {
    std::size_t d = 0;
    for (const auto& f : schema.features) {
        if (f.encoding == MlpEncoding::Normalized) d += 1;
        if (f.encoding == MlpEncoding::FourBit) d += 4;
    }
    return d;
}

inline std::vector<std::string> mlp_column_names(const FeatureSchema& schema) {
    std::vector<std::string> names;
    for (const auto& f : schema.features) {
        if (f.encoding == MlpEncoding::Normalized) names.push_back(f.name);
        if (f.encoding == MlpEncoding::FourBit) {
            for (int b = 3; b >= 0; --b) names.push_back(f.name + "_b" + std::to_string(b));
        }
    }
    return names;
}

inline std::vector<double> mlp_row(const FeatureSchema& schema, const CompleteRecord& r) {
    std::vector<double> out;
    out.reserve(mlp_input_dim(schema));
    for (std::size_t i = 0; i < schema.size(); ++i) {
        const auto& f = schema.features[i];
        if (f.encoding == MlpEncoding::Normalized) out.push_back(normalize_feature(f, r[i]));
        if (f.encoding == MlpEncoding::FourBit) {
            for (int bit : four_bit(r[i])) out.push_back(static_cast<double>(bit));
        }
    }
    return out;
}

struct MlpView {
    Matrix inputs;
    std::vector<int> labels;
};

inline MlpView encode_mlp(const FeatureSchema& schema, std::span<const CompleteRecord> records) {
    const std::size_t target = schema.target_index();
    const auto& tf = schema.features[target];
    MlpView view{Matrix(records.size(), mlp_input_dim(schema)), {}};
    view.labels.reserve(records.size());
    for (std::size_t r = 0; r < records.size(); ++r) {
        const auto row = mlp_row(schema, records[r]);
        std::copy(row.begin(), row.end(), view.inputs.row(r).begin());
        view.labels.push_back(records[r][target] == tf.max ? 1 : 0);
    }
    return view;
}

}  // namespace relnet::data
