#include "support.hpp"
#include "tvbma/error.hpp"
#include "tvbma/trend_weight.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace tvbma;

namespace {

EnsembleTrends flat_trends(std::vector<double> levels, std::size_t n) {
    EnsembleTrends e;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        e.model_ids.push_back("m" + std::to_string(i));
        e.trends.push_back(testing::constant(n, levels[i]));
    }
    return e;
}

EnsembleTrends random_trends(std::size_t k, std::size_t n, std::uint64_t seed) {
    EnsembleTrends e;
    auto rng = make_rng(seed, 1);
    std::normal_distribution<double> z(0.0, 1.0);
    for (std::size_t i = 0; i < k; ++i) {
        const double a = z(rng), b = 0.05 * z(rng);
        std::vector<double> t(n);
        for (std::size_t s = 0; s < n; ++s) t[s] = a + b * static_cast<double>(s);
        e.model_ids.push_back("m" + std::to_string(i));
        e.trends.push_back(std::move(t));
    }
    return e;
}

WeightVector weigh(const EnsembleTrends& e, const std::vector<double>& y, TrendWeightOptions o) {
    return trend_weights(e, y, build_discrepancy_pool(e), o);
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

} // namespace

TEST_CASE("discrepancy pool hand example") {
    EnsembleTrends e;
    e.trends = {{0, 0}, {1, 1}, {5, 5}};
    const auto pool = build_discrepancy_pool(e);
    CHECK(pool.source_pairs[0].second == 1);
    CHECK(pool.source_pairs[1].second == 0);
    CHECK(pool.source_pairs[2].second == 1);
    CHECK(pool.samples[2] == std::vector<double>{4, 4});
    CHECK(pool.samples[0] == std::vector<double>{-1, -1});
}

TEST_CASE("identical models give zero discrepancies") {
    const auto e = flat_trends({2.0, 2.0}, 5);
    const auto pool = build_discrepancy_pool(e);
    for (const auto& s : pool.samples) CHECK(s == testing::constant(5, 0.0));
}

TEST_CASE("nearest ties go to the lower index") {
    const std::vector<std::vector<double>> v{{0.0}, {1.0}, {2.0}};
    const auto c = nearest_other(v);
    CHECK(c[1] == 0);
}

TEST_CASE("fewer than two models is rejected") {
    const auto e = flat_trends({1.0}, 5);
    CHECK_THROWS_AS(build_discrepancy_pool(e), Error);
}

TEST_CASE("identical trends get exactly 1/k") {
    const auto e = flat_trends({0.3, 0.3, 0.3, 0.3}, 12);
    const auto y = testing::normal_vector(12, 4);
    const auto w = weigh(e, y, {.f = 1.5, .n_samples = 2000});
    for (double x : w.values()) CHECK(x == 0.25);
}

TEST_CASE("closest flat trend wins on the three-model toy") {
    const auto e = flat_trends({0.0, 1.0, 5.0}, 30);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto y = testing::normal_vector(30, 100 + seed, 0.1);
        const auto w = weigh(e, y, {.f = 0.5, .n_samples = 1000000, .seed = seed});
        CHECK(w.argmax() == 0);
    }
}

TEST_CASE("weights are normalized and deterministic") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto e = random_trends(6, 20, seed);
        const auto y = testing::normal_vector(20, seed);
        const auto a = weigh(e, y, {.n_samples = 3000, .seed = seed});
        const auto b = weigh(e, y, {.n_samples = 3000, .seed = seed});
        CHECK(std::abs(sum(a.values()) - 1.0) < 1e-9);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i] >= 0.0);
            CHECK(a[i] == b[i]);
        }
    }
}

TEST_CASE("permuting the models permutes the weights") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto e = random_trends(5, 15, seed);
        const auto y = testing::normal_vector(15, seed + 50);
        const TrendWeightOptions o{.f = 1.0, .n_samples = 3000, .seed = 77};
        const auto w = weigh(e, y, o);
        std::vector<std::size_t> perm{3, 0, 4, 1, 2};
        EnsembleTrends p;
        for (auto i : perm) p.trends.push_back(e.trends[i]);
        const auto wp = weigh(p, y, o);
        for (std::size_t j = 0; j < perm.size(); ++j) CHECK(wp[j] == w[perm[j]]);
    }
}

TEST_CASE("large f diffuses weights towards the prior") {
    const auto e = flat_trends({0.0, 1.0, 5.0}, 30);
    int monotone = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto y = testing::normal_vector(30, 300 + seed, 0.3);
        std::vector<double> dev;
        for (double f : {1.0, 10.0, 100.0}) {
            const auto w = weigh(e, y, {.f = f, .n_samples = 200000, .seed = seed});
            double d = 0.0;
            for (double x : w.values()) d = std::max(d, std::abs(x - 1.0 / 3.0));
            dev.push_back(d);
        }
        monotone += dev[0] >= dev[1] && dev[1] >= dev[2];
    }
    CHECK(monotone >= 8);
}

TEST_CASE("model priors multiply the evidence") {
    const auto e = flat_trends({0.3, 0.3}, 10);
    const auto y = testing::normal_vector(10, 1);
    TrendWeightOptions o{.n_samples = 1000};
    o.prior.model_priors = {1.0, 3.0};
    const auto w = weigh(e, y, o);
    CHECK(w[1] == doctest::Approx(0.75));
}

TEST_CASE("overflowing residuals are a numerical degeneracy") {
    const auto e = flat_trends({0.0, 1.0}, 10);
    const auto y = testing::constant(10, 1e200);
    try {
        weigh(e, y, {.n_samples = 100});
        FAIL("expected numerical degeneracy");
    } catch (const Error& err) {
        CHECK(err.code() == Errc::NumericalDegeneracy);
    }
}

TEST_CASE("configuration errors") {
    const auto e = flat_trends({0.0, 1.0}, 10);
    const auto y = testing::constant(10, 0.0);
    TrendWeightOptions o{.n_samples = 10};
    o.prior.sigma = {1.0, 1.0};
    CHECK_THROWS_AS(weigh(e, y, o), Error);
    CHECK_THROWS_AS(weigh(e, testing::constant(9, 0.0), {.n_samples = 10}), Error);
}
