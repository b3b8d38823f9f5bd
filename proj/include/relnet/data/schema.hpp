#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "relnet/errors.hpp"

namespace relnet::data {

enum class FeatureKind { Integer, Binary, Categorical };

/// How a feature is presented to the MLP.
enum class MlpEncoding { Normalized, FourBit, Label };

struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::Integer;
    std::int64_t min = 0;
    std::int64_t max = 1;
    MlpEncoding encoding = MlpEncoding::Normalized;
    // Lookup table for Categorical features; a token encodes to its 1-based
    // position, so min/max should be 1 and categories.size().
    std::vector<std::string> categories;

    friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

struct FeatureSchema {
    std::vector<FeatureSpec> features;
    std::string target_name;

    std::size_t size() const noexcept { return features.size(); }

    std::optional<std::size_t> find(std::string_view name) const {
        for (std::size_t i = 0; i < features.size(); ++i) {
            if (features[i].name == name) return i;
        }
        return std::nullopt;
    }

    std::size_t index_of(std::string_view name) const {
        if (auto i = find(name)) return *i;
        throw std::out_of_range("schema has no feature named '" + std::string(name) + "'");
    }

    std::size_t target_index() const { return index_of(target_name); }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        out.reserve(features.size());
        for (const auto& f : features) out.push_back(f.name);
        return out;
    }

    void validate() const {
        if (features.size() < 2) throw std::invalid_argument("schema needs at least two features");
        for (std::size_t i = 0; i < features.size(); ++i) {
            const auto& f = features[i];
            if (f.name.empty()) throw std::invalid_argument("schema feature with empty name");
            if (find(f.name) != i) throw std::invalid_argument("duplicate schema feature '" + f.name + "'");
            if (!(f.min < f.max)) throw std::invalid_argument("feature '" + f.name + "' needs min < max");
            if (f.encoding == MlpEncoding::FourBit && (f.min < 0 || f.max > 15)) {
                throw std::invalid_argument("four-bit feature '" + f.name + "' must lie within [0, 15]");
            }
            if (f.kind == FeatureKind::Categorical && f.categories.empty()) {
                throw std::invalid_argument("categorical feature '" + f.name + "' has no lookup table");
            }
        }
        const auto t = target_index();
        const auto& target = features[t];
        if (target.kind != FeatureKind::Binary || target.encoding != MlpEncoding::Label) {
            throw std::invalid_argument("target '" + target_name + "' must be a binary label feature");
        }
        for (std::size_t i = 0; i < features.size(); ++i) {
            if (i != t && features[i].encoding == MlpEncoding::Label) {
                throw std::invalid_argument("only the target may use label encoding");
            }
        }
    }

    friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;
};

/// The six survey variables: mother's age, education, parity, gravidity,
/// father's age and HIV status (the classification target).
inline FeatureSchema default_schema() {
    using K = FeatureKind;
    using E = MlpEncoding;
    return FeatureSchema{
        {
            {"Age", K::Integer, 1, 60, E::Normalized, {}},
            {"Education", K::Integer, 0, 13, E::FourBit, {}},
            {"Parity", K::Integer, 0, 15, E::FourBit, {}},
            {"Gravidity", K::Integer, 0, 11, E::FourBit, {}},
            {"AgeOfFather", K::Integer, 1, 90, E::Normalized, {}},
            {"HIV", K::Binary, 0, 1, E::Label, {}},
        },
        "HIV",
    };
}

NLOHMANN_JSON_SERIALIZE_ENUM(FeatureKind, {
    {FeatureKind::Integer, "integer"},
    {FeatureKind::Binary, "binary"},
    {FeatureKind::Categorical, "categorical"},
})

NLOHMANN_JSON_SERIALIZE_ENUM(MlpEncoding, {
    {MlpEncoding::Normalized, "normalized"},
    {MlpEncoding::FourBit, "four_bit"},
    {MlpEncoding::Label, "label"},
})

inline void to_json(nlohmann::ordered_json& j, const FeatureSpec& f) {
    j = nlohmann::ordered_json{{"name", f.name}, {"kind", f.kind}, {"min", f.min}, {"max", f.max},
                               {"encoding", f.encoding}};
    if (!f.categories.empty()) j["categories"] = f.categories;
}

inline void from_json(const nlohmann::ordered_json& j, FeatureSpec& f) {
    j.at("name").get_to(f.name);
    f.kind = j.value("kind", FeatureKind::Integer);
    j.at("min").get_to(f.min);
    j.at("max").get_to(f.max);
    f.encoding = j.value("encoding", MlpEncoding::Normalized);
    f.categories = j.value("categories", std::vector<std::string>{});
}

inline void to_json(nlohmann::ordered_json& j, const FeatureSchema& s) {
    j = nlohmann::ordered_json{{"features", s.features}, {"target", s.target_name}};
}

inline void from_json(const nlohmann::ordered_json& j, FeatureSchema& s) {
    j.at("features").get_to(s.features);
    j.at("target").get_to(s.target_name);
}

inline FeatureSchema load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open schema file '" + path + "'");
    FeatureSchema s;
    try {
        s = nlohmann::ordered_json::parse(in).get<FeatureSchema>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed schema file '" + path + "': " + e.what());
    }
    s.validate();
    return s;
}

}  // namespace relnet::data
