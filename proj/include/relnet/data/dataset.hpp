#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "relnet/data/schema.hpp"

namespace relnet::data {

/// One survey row: a value per schema feature, absent when missing or removed.
using RawRecord = std::vector<std::optional<std::int64_t>>;

/// A record with every value present and in range.
using CompleteRecord = std::vector<std::int64_t>;

/// 1-based position of `token` in `table`, or nullopt when the token is not
/// listed (the field is then treated as missing).
inline std::optional<std::int64_t> lookup_encode(std::string_view token, const std::vector<std::string>& table) {
    if (table.empty()) throw std::invalid_argument("lookup_encode: empty lookup table");
    auto it = std::find(table.begin(), table.end(), token);
    if (it == table.end()) return std::nullopt;
    return static_cast<std::int64_t>(it - table.begin()) + 1;
}

struct Validation {
    bool complete = true;
    std::vector<std::size_t> bad_fields;  // schema indices, ascending
};

/// A field is bad when absent or outside its schema range.
inline Validation validate(const RawRecord& record, const FeatureSchema& schema) {
    if (record.size() != schema.size()) {
        throw std::invalid_argument("record has " + std::to_string(record.size()) + " fields, schema has " +
                                    std::to_string(schema.size()));
    }
    Validation v;
    for (std::size_t i = 0; i < record.size(); ++i) {
        const auto& f = schema.features[i];
        if (!record[i] || *record[i] < f.min || *record[i] > f.max) v.bad_fields.push_back(i);
    }
    v.complete = v.bad_fields.empty();
    return v;
}

/// A record set aside because some values were missing or out of range.
/// Offending values are dropped, never clamped.
struct IncompleteRecord {
    RawRecord values;
    std::vector<std::size_t> bad_fields;

    friend bool operator==(const IncompleteRecord&, const IncompleteRecord&) = default;
};

struct Dataset {
    FeatureSchema schema;
    std::vector<CompleteRecord> complete;
    std::vector<IncompleteRecord> incomplete;

    int label_of(const CompleteRecord& r) const {
        const auto& t = schema.features[schema.target_index()];
        return r[schema.target_index()] == t.max ? 1 : 0;
    }

    std::size_t positive_count() const {
        std::size_t n = 0;
        for (const auto& r : complete) n += static_cast<std::size_t>(label_of(r));
        return n;
    }
};

/// Sorts raw records into complete and incomplete sets.
inline Dataset build_dataset(const std::vector<RawRecord>& records, const FeatureSchema& schema) {
    Dataset ds{schema, {}, {}};
    for (const auto& rec : records) {
        auto v = validate(rec, schema);
        if (v.complete) {
            CompleteRecord c(rec.size());
            for (std::size_t i = 0; i < rec.size(); ++i) c[i] = *rec[i];
            ds.complete.push_back(std::move(c));
        } else {
            RawRecord kept = rec;
            for (auto i : v.bad_fields) kept[i].reset();
            ds.incomplete.push_back({std::move(kept), std::move(v.bad_fields)});
        }
    }
    return ds;
}

}  // namespace relnet::data
