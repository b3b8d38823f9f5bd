#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "relnet/data/dataset.hpp"
#include "relnet/data/encode.hpp"
#include "relnet/data/schema.hpp"
#include "relnet/errors.hpp"

namespace relnet::data {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                               : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline std::optional<std::int64_t> parse_field(std::string_view text, const FeatureSpec& f) {
    if (text.empty()) return std::nullopt;
    if (f.kind == FeatureKind::Categorical) return lookup_encode(text, f.categories);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return v;
}

inline std::string format_value(const FeatureSpec& f, std::int64_t v) {
    if (f.kind == FeatureKind::Categorical && v >= 1 && static_cast<std::size_t>(v) <= f.categories.size()) {
        return f.categories[static_cast<std::size_t>(v - 1)];
    }
    return std::to_string(v);
}

}  // namespace detail

/// Reads survey records. The header names the columns; every schema feature
/// must appear, extra columns are ignored. Empty or unparseable fields are
/// read as missing and unknown category tokens as missing.
inline std::vector<RawRecord> read_csv(std::istream& in, const FeatureSchema& schema) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("CSV input is empty (no header row)");
    const auto header = detail::split_fields(line);
    std::vector<std::size_t> column(schema.size(), 0);
    for (std::size_t i = 0; i < schema.size(); ++i) {
        bool found = false;
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (header[c] == schema.features[i].name) {
                column[i] = c;
                found = true;
                break;
            }
        }
        if (!found) throw SchemaMismatch("CSV header lacks feature '" + schema.features[i].name + "'");
    }

    std::vector<RawRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_fields(line);
        if (fields.size() != header.size()) {
            throw IoError("CSV line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                          " fields, header has " + std::to_string(header.size()));
        }
        RawRecord rec(schema.size());
        for (std::size_t i = 0; i < schema.size(); ++i) {
            rec[i] = detail::parse_field(fields[column[i]], schema.features[i]);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

inline std::vector<RawRecord> read_csv(const std::string& path, const FeatureSchema& schema) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_csv(in, schema);
}

inline void write_header(std::ostream& out, const FeatureSchema& schema) {
    for (std::size_t i = 0; i < schema.size(); ++i) out << (i ? "," : "") << schema.features[i].name;
    out << '\n';
}

inline void write_csv(std::ostream& out, const FeatureSchema& schema, std::span<const CompleteRecord> records) {
    write_header(out, schema);
    for (const auto& r : records) {
        for (std::size_t i = 0; i < schema.size(); ++i) {
            out << (i ? "," : "") << detail::format_value(schema.features[i], r[i]);
        }
        out << '\n';
    }
}

inline void write_csv(const std::string& path, const FeatureSchema& schema,
                      std::span<const CompleteRecord> records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    write_csv(out, schema, records);
}

/// MLP-view export: normalized and bit columns followed by the 0/1 label.
inline void write_encoded_csv(std::ostream& out, const FeatureSchema& schema,
                              std::span<const CompleteRecord> records) {
    const auto names = mlp_column_names(schema);
    for (const auto& n : names) out << n << ',';
    out << schema.target_name << '\n';
    const auto view = encode_mlp(schema, records);
    const auto& specs = schema.features;
    for (std::size_t r = 0; r < view.inputs.rows(); ++r) {
        std::size_t c = 0;
        for (const auto& f : specs) {
            if (f.encoding == MlpEncoding::Normalized) {
                out << nlohmann::json(view.inputs(r, c++)).dump() << ',';
            } else if (f.encoding == MlpEncoding::FourBit) {
                for (int b = 0; b < 4; ++b) out << static_cast<int>(view.inputs(r, c++)) << ',';
            }
        }
        out << view.labels[r] << '\n';
    }
}

/// Sidecar describing an encoded export.
inline nlohmann::ordered_json encoded_manifest(const Dataset& ds, std::uint64_t seed) {
    const auto pos = ds.positive_count();
    nlohmann::ordered_json j;
    j["schema"] = ds.schema;
    j["counts"] = {{"complete", ds.complete.size()},
                   {"positive", pos},
                   {"negative", ds.complete.size() - pos},
                   {"mlp_inputs", mlp_input_dim(ds.schema)}};
    j["incomplete_count"] = ds.incomplete.size();
    j["seed"] = seed;
    return j;
}

}  // namespace relnet::data
