#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "relnet/errors.hpp"

namespace relnet::data {

/// Equalizes class counts by re-using minority-class records.
///
/// The minority class is cycled through: first in its original order, then
/// in a fresh seeded shuffle for every further full cycle, until it matches
/// the majority count. Majority records are kept as they are. The combined
/// output is shuffled with the same seeded generator.
///
/// Throws BalanceError when either class has no records.
template <class T, class LabelFn>
std::vector<T> balance(const std::vector<T>& records, LabelFn label_of, std::uint64_t seed) {
    std::vector<T> positives;
    std::vector<T> negatives;
    for (const auto& r : records) {
        (label_of(r) == 1 ? positives : negatives).push_back(r);
    }
    if (positives.empty() || negatives.empty()) {
        throw BalanceError("cannot balance: " + std::to_string(positives.size()) + " positive and " +
                           std::to_string(negatives.size()) + " negative records");
    }

    std::mt19937_64 rng(seed);
    auto& minority = positives.size() < negatives.size() ? positives : negatives;
    auto& majority = positives.size() < negatives.size() ? negatives : positives;

    std::vector<T> out = majority;
    out.reserve(2 * majority.size());
    std::vector<T> cycle = minority;
    std::size_t used = 0;
    for (bool first = true; used < majority.size(); first = false) {
        if (!first) std::shuffle(cycle.begin(), cycle.end(), rng);
        for (std::size_t i = 0; i < cycle.size() && used < majority.size(); ++i, ++used) {
            out.push_back(cycle[i]);
        }
    }
    std::shuffle(out.begin(), out.end(), rng);
    return out;
}

template <class T>
struct Split {
    std::vector<T> train;
    std::vector<T> test;
};

/// Seeded shuffle, then the first `test_size` records become the test set.
template <class T>
Split<T> split(const std::vector<T>& records, std::size_t test_size, std::uint64_t seed) {
    if (test_size > records.size()) {
        throw std::invalid_argument("split: test_size " + std::to_string(test_size) + " exceeds " +
                                    std::to_string(records.size()) + " records");
    }
    std::vector<T> shuffled = records;
    std::mt19937_64 rng(seed);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    Split<T> s;
    const auto cut = shuffled.begin() + static_cast<std::ptrdiff_t>(test_size);
    s.test.assign(shuffled.begin(), cut);
    s.train.assign(cut, shuffled.end());
    return s;
}

}  // namespace relnet::data
