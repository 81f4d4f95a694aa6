#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace rse {

// Sorts keys in place and returns the sum of squared multiplicities.
template <class T>
std::uint64_t sum_squared_runs(std::vector<T>& keys) {
    std::sort(keys.begin(), keys.end());
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i + 1;
        while (j < keys.size() && keys[j] == keys[i]) ++j;
        total += std::uint64_t(j - i) * (j - i);
        i = j;
    }
    return total;
}

// Sorts keys in place and returns the number of distinct values.
template <class T>
std::uint64_t count_distinct(std::vector<T>& keys) {
    std::sort(keys.begin(), keys.end());
    return std::uint64_t(std::unique(keys.begin(), keys.end()) - keys.begin());
}

}  // namespace rse
