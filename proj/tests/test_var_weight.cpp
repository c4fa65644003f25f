#include "support.hpp"
#include "tvbma/error.hpp"
#include "tvbma/time_series.hpp"
#include "tvbma/var_weight.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace tvbma;

namespace {

VariabilitySummaries summaries_of(std::vector<Ar1Params> p) {
    VariabilitySummaries s;
    for (std::size_t i = 0; i < p.size(); ++i) s.model_ids.push_back("m" + std::to_string(i));
    s.stats = std::move(p);
    return s;
}

std::vector<std::vector<double>> simulate_all(const std::vector<Ar1Params>& p, std::size_t n,
                                              std::uint64_t seed) {
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < p.size(); ++i) out.push_back(ar1_simulate(p[i], n, seed + i));
    return out;
}

double sd_of(const std::vector<double>& v) { return sample_sd(v); }

} // namespace

TEST_CASE("summaries of identical anomalies are identical") {
    const auto a = ar1_simulate({1.0, 0.4}, 80, 3);
    const std::vector<std::vector<double>> copies(4, a);
    const auto s = summarize_variability(copies);
    for (const auto& p : s.stats) CHECK(p == s.stats[0]);
}

TEST_CASE("summaries recover simulated parameters") {
    const std::vector<Ar1Params> truth{{1.0, 0.6}, {2.0, 0.0}};
    const auto s = summarize_variability(simulate_all(truth, 10000, 21));
    for (std::size_t i = 0; i < truth.size(); ++i) {
        CHECK(std::abs(s.stats[i].rho - truth[i].rho) < 0.03);
        CHECK(std::abs(s.stats[i].sigma - truth[i].sigma) < 0.05);
    }
}

TEST_CASE("degenerate model is named") {
    const std::vector<std::vector<double>> a{testing::normal_vector(20, 1), testing::constant(20, 0.0)};
    const std::vector<std::string> ids{"good", "flat"};
    try {
        summarize_variability(a, ids);
        FAIL("expected a degenerate series");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("flat") != std::string::npos);
    }
}

TEST_CASE("two models are each other's next closest") {
    const std::vector<Ar1Params> p{{1.0, 0.2}, {3.0, 0.7}};
    const auto a = simulate_all(p, 60, 5);
    const auto c = next_closest_var(summarize_variability(a), a);
    CHECK(c == std::vector<std::size_t>{1, 0});
}

TEST_CASE("error pool") {
    SUBCASE("identical summaries") {
        const auto s = summaries_of({{1, 0.3}, {1, 0.3}, {1, 0.3}});
        const std::vector<std::size_t> assign{1, 0, 1};
        const auto pool = build_var_error_pool(s, assign);
        for (const auto& b : pool.base_samples) CHECK(b == ParamOffset{0, 0});
        CHECK(pool.jitter_sd == ParamOffset{0, 0});
    }
    SUBCASE("hand enumeration") {
        const auto s = summaries_of({{1, 0.1}, {2, 0.5}, {4, 0.2}});
        const std::vector<std::size_t> assign{1, 0, 1};
        const auto pool = build_var_error_pool(s, assign);
        REQUIRE(pool.base_samples.size() == 4);
        CHECK(pool.base_samples[0].sigma == -1.0);
        CHECK(pool.base_samples[1].sigma == 1.0);
        CHECK(pool.base_samples[2].sigma == 2.0);
        CHECK(pool.base_samples[3] == ParamOffset{0, 0});
        // sigma offsets -1, 1, 2, 0; rho offsets -0.4, 0.4, -0.3, 0
        CHECK(pool.jitter_sd.sigma == doctest::Approx(3.0 / 5.0));
        CHECK(pool.jitter_sd.rho == doctest::Approx(0.8 / 5.0));
    }
    SUBCASE("assignment to self is rejected") {
        const auto s = summaries_of({{1, 0.1}, {2, 0.5}});
        const std::vector<std::size_t> assign{0, 0};
        CHECK_THROWS_AS(build_var_error_pool(s, assign), Error);
    }
}

TEST_CASE("identical summaries give uniform weights") {
    const auto s = summaries_of({{1, 0.3}, {1, 0.3}, {1, 0.3}, {1, 0.3}, {1, 0.3}});
    const std::vector<std::size_t> assign{1, 0, 0, 0, 0};
    const auto pool = build_var_error_pool(s, assign);
    const auto w = var_weights(s, pool, testing::normal_vector(40, 2), {.n_samples = 500});
    for (double x : w.values()) CHECK(x == 0.2);
}

TEST_CASE("generating model is identified") {
    // Model 1 stands apart from a tight pair. Its own error cloud then stays
    // near its parameters, while a neighbour reaches them only through one
    // pool sample.
    const std::vector<Ar1Params> p{{0.4, 0.1}, {1.2, 0.6}, {0.5, 0.2}};
    const auto a = simulate_all(p, 60, 40);
    const auto s = summarize_variability(a);
    const auto pool = build_var_error_pool(s, next_closest_var(s, a));
    int hits = 0;
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        const auto y = ar1_simulate(p[1], 60, 900 + trial);
        hits += var_weights(s, pool, y, {.f = 1.0, .n_samples = 5000, .seed = trial}).argmax() == 1;
    }
    CHECK(hits >= 45);
}

TEST_CASE("sampled parameters respect the clipping rule") {
    const auto s = summaries_of({{0.05, 0.98}, {3.0, -0.9}, {1.0, 0.0}});
    const std::vector<std::size_t> assign{2, 2, 0};
    const auto pool = build_var_error_pool(s, assign);
    for (std::size_t m = 0; m < 3; ++m) {
        const auto draws = sample_variability_params(s, pool, m, {.f = 3.0, .n_samples = 20000});
        std::size_t capped = 0;
        for (const auto& d : draws) {
            CHECK(std::abs(d.rho) <= 0.999);
            CHECK(d.sigma >= 0.01 * 0.05);
            capped += std::abs(d.rho) == 0.999;
        }
        CHECK(capped > 0);
    }
}

TEST_CASE("jitter has the pool's standard deviation") {
    const auto s = summaries_of({{5.0, 0.0}, {5.0, 0.0}});
    VarErrorPool pool{{{0.0, 0.0}}, {0.2, 0.05}};
    const auto draws = sample_variability_params(s, pool, 0, {.f = 1.0, .n_samples = 100000});
    std::vector<double> sig, rho;
    for (const auto& d : draws) {
        sig.push_back(d.sigma);
        rho.push_back(d.rho);
    }
    CHECK(sd_of(sig) == doctest::Approx(0.2).epsilon(0.02));
    CHECK(sd_of(rho) == doctest::Approx(0.05).epsilon(0.02));
}

TEST_CASE("zero f and zero jitter reduce to plug-in likelihood ranking") {
    const std::vector<Ar1Params> p{{0.5, 0.2}, {1.0, 0.5}, {1.5, 0.1}, {0.8, -0.3}};
    const auto s = summaries_of(p);
    VarErrorPool pool{{{0.0, 0.0}, {0.3, 0.1}}, {0.0, 0.0}};
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto y = ar1_simulate({0.9, 0.2}, 50, seed);
        const auto w = var_weights(s, pool, y, {.f = 0.0, .n_samples = 50});
        std::vector<std::size_t> by_w(4), by_ll(4);
        std::iota(by_w.begin(), by_w.end(), 0);
        std::iota(by_ll.begin(), by_ll.end(), 0);
        std::sort(by_w.begin(), by_w.end(), [&](auto a, auto b) { return w[a] > w[b]; });
        std::sort(by_ll.begin(), by_ll.end(), [&](auto a, auto b) {
            return ar1_conditional_loglik(y, p[a]) > ar1_conditional_loglik(y, p[b]);
        });
        CHECK(by_w == by_ll);
    }
}

TEST_CASE("deterministic and permutation equivariant") {
    const std::vector<Ar1Params> p{{0.5, 0.2}, {1.0, 0.5}, {1.5, 0.1}, {0.8, -0.3}, {1.2, 0.7}};
    const auto a = simulate_all(p, 50, 7);
    const auto s = summarize_variability(a);
    const auto pool = build_var_error_pool(s, next_closest_var(s, a));
    const auto y = ar1_simulate({1.0, 0.4}, 50, 99);
    const VarWeightOptions o{.n_samples = 3000, .seed = 5};
    const auto w = var_weights(s, pool, y, o);
    CHECK(w.values()[0] == var_weights(s, pool, y, o).values()[0]);

    const std::vector<std::size_t> perm{4, 2, 0, 3, 1};
    std::vector<std::vector<double>> ap;
    for (auto i : perm) ap.push_back(a[i]);
    const auto sp = summarize_variability(ap);
    const auto poolp = build_var_error_pool(sp, next_closest_var(sp, ap));
    const auto wp = var_weights(sp, poolp, y, o);
    for (std::size_t j = 0; j < perm.size(); ++j) CHECK(wp[j] == w[perm[j]]);
}
