#include "support.hpp"
#include "tvbma/diagnostics.hpp"
#include "tvbma/error.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace tvbma;

namespace {

std::vector<Ar1Params> spread_summaries(std::size_t k) {
    std::vector<Ar1Params> s;
    for (std::size_t i = 0; i < k; ++i) {
        s.push_back({0.2 + 0.1 * static_cast<double>(i), 0.5 - 0.03 * static_cast<double>(i * i % 7)});
    }
    return s;
}

} // namespace

TEST_CASE("correlation") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    const std::vector<double> y{2, 4, 6, 8, 10};
    const std::vector<double> cubic{1, 8, 27, 64, 125};
    CHECK(*correlation(x, y) == doctest::Approx(1.0));
    CHECK(*correlation(x, cubic, Correlation::Spearman) == doctest::Approx(1.0));
    CHECK(*correlation(x, cubic) < 1.0);
    CHECK_FALSE(correlation(x, testing::constant(5, 2.0)).has_value());
}

TEST_CASE("uniform weight rows are excluded") {
    const auto s = spread_summaries(6);
    const std::vector<std::vector<double>> rows(6, testing::constant(6, 1.0 / 6.0));
    const auto r = independence_diagnostic(rows, s);
    for (const auto& row : r.rows) {
        CHECK_FALSE(row.r_sigma.has_value());
        CHECK_FALSE(row.r_rho.has_value());
    }
    CHECK_FALSE(r.flagged);
}

TEST_CASE("weights proportional to sigma are flagged") {
    const auto s = spread_summaries(6);
    double total = 0.0;
    for (const auto& p : s) total += p.sigma;
    std::vector<double> row;
    for (const auto& p : s) row.push_back(p.sigma / total);
    const std::vector<std::vector<double>> rows(6, row);
    const auto r = independence_diagnostic(rows, s);
    CHECK(*r.rows[0].r_sigma == doctest::Approx(1.0));
    CHECK(r.flagged);
}

TEST_CASE("independent weights rarely exceed the threshold") {
    const auto s = spread_summaries(20);
    int below = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        auto w = testing::normal_vector(20, 5000 + trial);
        double total = 0.0;
        for (auto& x : w) total += (x = std::exp(x));
        for (auto& x : w) x /= total;
        const std::vector<std::vector<double>> rows{w};
        below += std::abs(*independence_diagnostic(rows, s).rows[0].r_sigma) < 0.5;
    }
    CHECK(below >= 95);
}

TEST_CASE("too few models for the independence check") {
    const std::vector<std::vector<double>> rows(3, testing::constant(3, 1.0 / 3.0));
    CHECK_THROWS_AS(independence_diagnostic(rows, spread_summaries(3)), Error);
}

TEST_CASE("spectrum envelope") {
    SUBCASE("AR(1) anomalies sit inside") {
        int good = 0;
        for (std::uint64_t trial = 0; trial < 20; ++trial) {
            const auto a = ar1_simulate({1.0, 0.5}, 60, 100 + trial);
            const auto env = spectrum_envelope_check(a, 500, trial);
            good += env.fraction_inside >= 0.75;
            for (std::size_t i = 0; i < env.lower.size(); ++i) CHECK(env.lower[i] <= env.upper[i]);
        }
        CHECK(good >= 19);
    }
    SUBCASE("a strong sinusoid escapes") {
        auto a = testing::normal_vector(64, 3);
        for (std::size_t t = 0; t < a.size(); ++t) a[t] += 10.0 * std::sin(2.0 * std::numbers::pi * 0.25 * t);
        CHECK(spectrum_envelope_check(a, 500, 1).fraction_inside < 0.75);
    }
    SUBCASE("wider percentiles give a wider envelope") {
        const auto a = ar1_simulate({1.0, 0.3}, 50, 8);
        const auto narrow = spectrum_envelope_check(a, 300, 4, 0.25, 0.75);
        const auto wide = spectrum_envelope_check(a, 300, 4, 0.05, 0.95);
        for (std::size_t i = 0; i < narrow.lower.size(); ++i) {
            CHECK(wide.lower[i] <= narrow.lower[i]);
            CHECK(wide.upper[i] >= narrow.upper[i]);
        }
        CHECK(wide.fraction_inside >= narrow.fraction_inside);
    }
    SUBCASE("inputs are untouched and results deterministic") {
        const auto a = ar1_simulate({1.0, 0.3}, 40, 8);
        const auto copy = a;
        const auto x = spectrum_envelope_check(a, 200, 6);
        const auto y = spectrum_envelope_check(a, 200, 6);
        CHECK(a == copy);
        CHECK(x.lower == y.lower);
        CHECK(x.fraction_inside == y.fraction_inside);
    }
    SUBCASE("short series") {
        CHECK_THROWS_AS(spectrum_envelope_check(testing::normal_vector(10, 1), 100, 1), Error);
    }
}
