#pragma once

#include "tvbma/random.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace testing {

inline std::vector<double> normal_vector(std::size_t n, std::uint64_t seed, double sd = 1.0) {
    auto rng = tvbma::make_rng(seed, 99);
    std::normal_distribution<double> z(0.0, sd);
    std::vector<double> v(n);
    for (auto& x : v) x = z(rng);
    return v;
}

inline std::vector<double> linear(std::size_t n, double intercept, double slope) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = intercept + slope * static_cast<double>(i);
    return v;
}

inline std::vector<double> constant(std::size_t n, double c) { return std::vector<double>(n, c); }

} // namespace testing
