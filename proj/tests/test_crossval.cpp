#include "support.hpp"
#include "tvbma/combine.hpp"
#include "tvbma/crossval.hpp"
#include "tvbma/error.hpp"
#include "tvbma/synthetic.hpp"

#include <doctest.h>

#include <cmath>

using namespace tvbma;

namespace {

ExperimentConfig fast_config() {
    ExperimentConfig c;
    c.trend_mc = 2000;
    c.var_mc = 1000;
    c.proj_draws = 4000;
    return c;
}

EnsembleDataset identical_ensemble(std::size_t k) {
    SyntheticEnsembleSpec spec;
    spec.k = 3;
    spec.calibration = spec.projection_reference = {1961, 2000};
    spec.projection = {2061, 2080};
    auto one = generate_synthetic_ensemble(spec).dataset;
    EnsembleDataset d = one;
    d.models.clear();
    for (std::size_t i = 0; i < k; ++i) {
        auto m = one.models.front();
        m.id = "copy" + std::to_string(i);
        d.models.push_back(m);
    }
    return d;
}

SyntheticEnsemble small_synthetic(std::uint64_t seed, std::size_t k = 8) {
    SyntheticEnsembleSpec spec;
    spec.k = k;
    spec.calibration = spec.projection_reference = {1961, 2000};
    spec.projection = {2061, 2080};
    spec.seed = seed;
    return generate_synthetic_ensemble(spec);
}

} // namespace

TEST_CASE("identical models") {
    const auto data = identical_ensemble(5);
    auto config = fast_config();
    config.f = 2.0;
    const auto report = run_loocv(data, config);
    REQUIRE(report.records.size() == 5);
    for (std::size_t t = 0; t < 5; ++t) {
        const auto& rec = report.records[t];
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK(rec.weights[j] == doctest::Approx(j == t ? 0.0 : 0.25).epsilon(1e-12));
        }
    }
    CHECK(report.coverage == 1.0);
}

TEST_CASE("calibration on identical models picks the first grid point") {
    const auto result = calibrate_f(identical_ensemble(4), fast_config(), 0.9, {0.5, 1.0, 1.5});
    CHECK(result.success);
    CHECK(result.f_star == 0.5);
    CHECK(result.report.coverage == 1.0);
    CHECK(result.granularity == doctest::Approx(0.25));
}

TEST_CASE("excluding the truth keeps the ratios of the remaining weights") {
    const auto ens = small_synthetic(3);
    const auto config = fast_config();
    const auto prepared = prepare_ensemble(ens.dataset, config);
    for (std::size_t t = 0; t < 3; ++t) {
        const auto rec = run_truth_round(prepared, t, config);
        const auto combined = combine_weights(
            WeightVector::from_probabilities(rec.trend_weights),
            WeightVector::from_probabilities(rec.var_weights));
        CHECK(rec.weights[t] == 0.0);
        std::size_t a = t == 0 ? 1 : 0, b = t == 2 ? 1 : 2;
        if (combined[a] > 0 && combined[b] > 0 && rec.weights[b] > 0) {
            CHECK(rec.weights[a] / rec.weights[b] ==
                  doctest::Approx(combined[a] / combined[b]).epsilon(1e-9));
        }
    }
}

TEST_CASE("report metrics are well formed and deterministic") {
    const auto ens = small_synthetic(5);
    auto config = fast_config();
    for (auto method : {Method::Trend, Method::TrendVar}) {
        config.method = method;
        const auto a = run_loocv(ens.dataset, config);
        const auto b = run_loocv(ens.dataset, config);
        const double k = static_cast<double>(a.records.size());
        CHECK(std::abs(a.coverage * k - std::round(a.coverage * k)) < 1e-9);
        CHECK(a.mciw >= 0.0);
        CHECK(a.mab >= 0.0);
        CHECK(a.coverage == b.coverage);
        CHECK(a.mciw == b.mciw);
        for (std::size_t i = 0; i < a.records.size(); ++i) {
            CHECK(a.records[i].ci90 == b.records[i].ci90);
        }
        if (method == Method::Trend) {
            for (const auto& r : a.records)
                for (double v : r.var_weights) CHECK(v == doctest::Approx(1.0 / k));
        }
    }
}

TEST_CASE("calibration failure is reported, not thrown") {
    const auto ens = small_synthetic(9);
    const auto result = calibrate_f(ens.dataset, fast_config(), 0.9, {0.0, 0.001, 0.002});
    CHECK_FALSE(result.success);
    CHECK(result.trace.size() == 3);
}

TEST_CASE("observational run") {
    auto ens = small_synthetic(4, 7);
    auto data = ens.dataset;
    auto observed = data.models.back();
    data.models.pop_back();
    auto config = fast_config();
    config.observational = true;
    CHECK_THROWS_AS(run_loocv(data, config), Error);
    data.observations = observed.calibration;
    data.observations_projection = observed.projection;
    const auto report = run_loocv(data, config);
    REQUIRE(report.records.size() == 1);
    CHECK(report.records[0].truth_id == "observations");
    CHECK(report.records[0].weights.size() == 6);
}

TEST_CASE("configuration validation") {
    auto c = fast_config();
    c.f = -0.5;
    CHECK_THROWS_AS(c.validate(), Error);
    c = fast_config();
    c.calibration_smoother = {Smoother::Lowess, 1.5, 3};
    CHECK_THROWS_AS(c.validate(), Error);
    c = fast_config();
    c.proj_draws = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    CHECK_THROWS_AS(run_loocv(identical_ensemble(2), fast_config()), Error);
}
