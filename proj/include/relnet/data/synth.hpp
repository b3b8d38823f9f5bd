#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relnet/data/dataset.hpp"
#include "relnet/data/schema.hpp"

namespace relnet::data {

/// `to` is generated as coefficient * `from` (in normalized units), summed
/// over all dependencies sharing the same `to`, plus Gaussian noise.
struct PlantedDependency {
    std::string from;
    std::string to;
    double coefficient = 0.0;

    friend bool operator==(const PlantedDependency&, const PlantedDependency&) = default;
};

/// Parses "From:To:coefficient".
inline PlantedDependency parse_planted(const std::string& spec) {
    const auto a = spec.find(':');
    const auto b = a == std::string::npos ? a : spec.find(':', a + 1);
    if (b == std::string::npos) {
        throw std::invalid_argument("planted dependency '" + spec + "' must look like From:To:coefficient");
    }
    PlantedDependency p{spec.substr(0, a), spec.substr(a + 1, b - a - 1), 0.0};
    try {
        std::size_t used = 0;
        p.coefficient = std::stod(spec.substr(b + 1), &used);
        if (used != spec.size() - b - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
        throw std::invalid_argument("planted dependency '" + spec + "' has a malformed coefficient");
    }
    return p;
}

inline std::string format_planted(const PlantedDependency& p) {
    return p.from + ":" + p.to + ":" + nlohmann::json(p.coefficient).dump();
}

inline void to_json(nlohmann::ordered_json& j, const PlantedDependency& p) {
    j = nlohmann::ordered_json{{"from", p.from}, {"to", p.to}, {"coefficient", p.coefficient}};
}

inline void from_json(const nlohmann::ordered_json& j, PlantedDependency& p) {
    j.at("from").get_to(p.from);
    j.at("to").get_to(p.to);
    j.at("coefficient").get_to(p.coefficient);
}

struct SynthConfig {
    std::size_t n = 0;
    double positive_rate = 0.25;
    std::vector<PlantedDependency> planted;
    double noise_std = 0.05;
    std::uint64_t seed = 0;
};

namespace detail {

/// Features in dependency order, ties broken by schema order.
inline std::vector<std::size_t> generation_order(const FeatureSchema& schema,
                                                 const std::vector<PlantedDependency>& planted) {
    const std::size_t n = schema.size();
    std::vector<std::size_t> indegree(n, 0);
    std::vector<std::vector<std::size_t>> out(n);
    for (const auto& p : planted) {
        const auto from = schema.index_of(p.from);
        const auto to = schema.index_of(p.to);
        out[from].push_back(to);
        ++indegree[to];
    }
    std::vector<std::size_t> order;
    std::vector<bool> done(n, false);
    while (order.size() < n) {
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!done[i] && indegree[i] == 0) {
                pick = i;
                break;
            }
        }
        if (pick == n) throw std::invalid_argument("planted dependencies contain a cycle");
        done[pick] = true;
        order.push_back(pick);
        for (auto t : out[pick]) --indegree[t];
    }
    return order;
}

}  // namespace detail

/// Synthetic survey records over `schema`.
///
/// Features without planted parents are uniform over their integer range.
/// A non-target feature with parents is sum(coefficient * parent) plus
/// N(0, noise_std), clamped to [0, 1] and rounded onto the integer grid.
/// For the target, the same score ranks the records and the top
/// round(positive_rate * n) become positive; without parents each label is
/// an independent Bernoulli(positive_rate) draw.
inline Dataset synth_generate(const FeatureSchema& schema, const SynthConfig& cfg) {
    schema.validate();
    if (!(cfg.positive_rate >= 0.0 && cfg.positive_rate <= 1.0)) {
        throw std::invalid_argument("positive_rate must lie in [0, 1]");
    }
    if (!(cfg.noise_std >= 0.0) || !std::isfinite(cfg.noise_std)) {
        throw std::invalid_argument("noise_std must be a finite value >= 0");
    }
    for (const auto& p : cfg.planted) {
        if (!std::isfinite(p.coefficient)) throw std::invalid_argument("planted coefficient must be finite");
        if (!schema.find(p.from) || !schema.find(p.to)) {
            throw std::invalid_argument("planted dependency " + p.from + " -> " + p.to +
                                        " names an unknown feature");
        }
        if (p.from == p.to) throw std::invalid_argument("planted dependency on itself: " + p.from);
    }

    const std::size_t nf = schema.size();
    const std::size_t target = schema.target_index();
    const auto order = detail::generation_order(schema, cfg.planted);

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> noise(0.0, cfg.noise_std > 0.0 ? cfg.noise_std : 1.0);
    auto draw_noise = [&] { return cfg.noise_std > 0.0 ? noise(rng) : 0.0; };

    std::vector<std::vector<std::int64_t>> values(nf, std::vector<std::int64_t>(cfg.n));
    std::vector<std::vector<double>> unit(nf, std::vector<double>(cfg.n));

    for (const auto f : order) {
        const auto& spec = schema.features[f];
        const double span = static_cast<double>(spec.max - spec.min);
        std::vector<const PlantedDependency*> parents;
        for (const auto& p : cfg.planted) {
            if (schema.index_of(p.to) == f) parents.push_back(&p);
        }
        auto score_of = [&](std::size_t r) {
            double s = 0.0;
            for (const auto* p : parents) s += p->coefficient * unit[schema.index_of(p->from)][r];
            return s + draw_noise();
        };

        if (f == target) {
            std::vector<int> label(cfg.n, 0);
            if (parents.empty()) {
                std::bernoulli_distribution coin(cfg.positive_rate);
                for (auto& l : label) l = coin(rng) ? 1 : 0;
            } else {
                std::vector<double> score(cfg.n);
                for (std::size_t r = 0; r < cfg.n; ++r) score[r] = score_of(r);
                std::vector<std::size_t> rank(cfg.n);
                std::iota(rank.begin(), rank.end(), std::size_t{0});
                std::stable_sort(rank.begin(), rank.end(),
                                 [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
                const auto k = static_cast<std::size_t>(
                    std::llround(cfg.positive_rate * static_cast<double>(cfg.n)));
                for (std::size_t i = 0; i < k; ++i) label[rank[i]] = 1;
            }
            for (std::size_t r = 0; r < cfg.n; ++r) {
                values[f][r] = label[r] ? spec.max : spec.min;
                unit[f][r] = label[r];
            }
            continue;
        }

        std::uniform_int_distribution<std::int64_t> uniform(spec.min, spec.max);
        for (std::size_t r = 0; r < cfg.n; ++r) {
            std::int64_t v;
            if (parents.empty()) {
                v = uniform(rng);
            } else {
                const double u = std::clamp(score_of(r), 0.0, 1.0);
                v = spec.min + static_cast<std::int64_t>(std::llround(u * span));
            }
            values[f][r] = v;
            unit[f][r] = static_cast<double>(v - spec.min) / span;
        }
    }

    Dataset ds{schema, {}, {}};
    ds.complete.reserve(cfg.n);
    for (std::size_t r = 0; r < cfg.n; ++r) {
        CompleteRecord rec(nf);
        for (std::size_t f = 0; f < nf; ++f) rec[f] = values[f][r];
        ds.complete.push_back(std::move(rec));
    }
    return ds;
}

}  // namespace relnet::data
