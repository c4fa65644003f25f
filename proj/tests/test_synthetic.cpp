#include "tvbma/diagnostics.hpp"
#include "tvbma/error.hpp"
#include "tvbma/synthetic.hpp"

#include <doctest.h>

#include <cmath>

using namespace tvbma;

namespace {

double sigma_delta_correlation(const SyntheticEnsemble& e) {
    std::vector<double> s, d;
    for (const auto& t : e.truth) {
        s.push_back(t.params.sigma);
        d.push_back(t.delta);
    }
    return *correlation(s, d);
}

} // namespace

TEST_CASE("coupling controls the sigma/change correlation") {
    SyntheticEnsembleSpec spec;
    spec.k = 200;
    spec.coupling = 0.0;
    CHECK(std::abs(sigma_delta_correlation(generate_synthetic_ensemble(spec))) < 0.15);
    spec.coupling = 0.8;
    CHECK(std::abs(sigma_delta_correlation(generate_synthetic_ensemble(spec)) - 0.8) < 0.1);
}

TEST_CASE("deterministic given the seed") {
    SyntheticEnsembleSpec spec;
    const auto a = generate_synthetic_ensemble(spec);
    const auto b = generate_synthetic_ensemble(spec);
    for (std::size_t j = 0; j < spec.k; ++j) {
        const auto va = a.dataset.models[j].calibration.values();
        const auto vb = b.dataset.models[j].calibration.values();
        CHECK(std::equal(va.begin(), va.end(), vb.begin(), vb.end()));
    }
    spec.seed = 2;
    const auto c = generate_synthetic_ensemble(spec);
    CHECK(c.truth[0].params.sigma != a.truth[0].params.sigma);
}

TEST_CASE("dataset is valid and the trend change is exact") {
    SyntheticEnsembleSpec spec;
    spec.projection_reference = {1971, 2000};
    spec.curvature = {-1.0, 1.0};
    const auto e = generate_synthetic_ensemble(spec);
    CHECK_NOTHROW(e.dataset.validate());
    CHECK(e.dataset.models[0].id == "m01");
    CHECK(e.dataset.models[9].id == "m10");
    for (const auto& t : e.truth) {
        double ref = 0.0;
        for (std::size_t i = 30; i < 60; ++i) ref += t.calibration_trend[i];
        ref /= 30.0;
        CHECK(mean(t.projection_trend) - ref == doctest::Approx(t.delta).epsilon(1e-12));
    }
}

TEST_CASE("clusters are well separated") {
    SyntheticEnsembleSpec spec;
    spec.clusters = 5;
    spec.cluster_spread = 0.0;
    const auto e = generate_synthetic_ensemble(spec);
    for (std::size_t j = 0; j < spec.k; ++j) {
        const auto& a = e.truth[j];
        CHECK(a.cluster == j % 5);
        for (std::size_t l = 0; l < spec.k; ++l) {
            const auto& b = e.truth[l];
            if (a.cluster == b.cluster) {
                CHECK(a.params == b.params);
            } else {
                CHECK(a.params.sigma != doctest::Approx(b.params.sigma));
                CHECK(a.params.rho != doctest::Approx(b.params.rho));
            }
        }
    }
}

TEST_CASE("observation realizations share the trend but not the noise") {
    SyntheticEnsembleSpec spec;
    const auto e = generate_synthetic_ensemble(spec);
    const auto a = synthetic_observation(e, 2, 1);
    const auto b = synthetic_observation(e, 2, 2);
    CHECK(a.same_axis(e.dataset.models[2].calibration));
    CHECK(a.values()[0] != b.values()[0]);
}

TEST_CASE("invalid specs") {
    SyntheticEnsembleSpec spec;
    spec.k = 2;
    CHECK_THROWS_AS(spec.validate(), Error);
    spec = {};
    spec.coupling = 1.5;
    CHECK_THROWS_AS(spec.validate(), Error);
    spec = {};
    spec.projection = {1990, 2030};
    CHECK_THROWS_AS(spec.validate(), Error);
}
