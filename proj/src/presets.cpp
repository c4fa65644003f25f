#include "tvbma/presets.hpp"

#include "tvbma/error.hpp"

#include <string>

namespace tvbma {

namespace {

Preset base(std::string name, std::size_t k, Period cal, Period ref, Period proj, double trend_f,
            double trendvar_f, Variant variant) {
    Preset p;
    p.name = std::move(name);
    p.trend_f = trend_f;
    p.trendvar_f = trendvar_f;
    p.config.f = trendvar_f;
    p.config.method = Method::TrendVar;
    p.config.variant = variant;
    p.synthetic.k = k;
    p.synthetic.calibration = cal;
    p.synthetic.projection_reference = ref;
    p.synthetic.projection = proj;
    return p;
}

} // namespace

std::vector<std::string> preset_names() {
    return {"amoc_like",       "korea_temp_like", "korea_temp_long_like",
            "winter_sst_like", "amoc_index_like", "amoc_index_obs_like"};
}

Preset preset(std::string_view name) {
    if (name == "amoc_like") {
        auto p = base("amoc_like", 13, {1880, 2004}, {1960, 1999}, {2060, 2099}, 1.5, 1.5,
                      Variant::Boot);
        p.config.calibration_smoother = {Smoother::Lowess, 0.8, 3};
        p.config.projection_smoother = {Smoother::TheilSen, 0.8, 3};
        p.config.mode = AnomalyMode::Relative;
        auto& s = p.synthetic;
        s.level = {14.0, 24.0};
        s.slope = {-3.0, 1.0};
        s.curvature = {-2.0, 2.0};
        s.future_slope = {-4.0, 0.0};
        s.sigma = {0.5, 1.5};
        s.rho = {0.1, 0.8};
        s.delta_mean = -5.0;
        s.delta_sd = 2.0;
        s.coupling = 0.5;
        return p;
    }
    if (name == "korea_temp_like" || name == "korea_temp_long_like") {
        const bool long_cal = name == "korea_temp_long_like";
        const Period cal = long_cal ? Period{1950, 2005} : Period{1973, 2005};
        auto p = base(std::string(name), 29, cal, cal, {2081, 2100}, long_cal ? 2.22 : 1.55,
                      long_cal ? 2.3 : 0.75, Variant::Boot);
        auto& s = p.synthetic;
        s.level = {28.0, 31.0};
        s.slope = {0.0, 1.0};
        s.future_slope = {0.0, 1.5};
        s.sigma = {0.5, 1.2};
        s.rho = {-0.1, 0.4};
        s.delta_mean = 5.0;
        s.delta_sd = 1.2;
        s.coupling = 0.6;
        return p;
    }
    if (name == "winter_sst_like") {
        auto p = base("winter_sst_like", 26, {1941, 2000}, {1941, 2000}, {2061, 2100}, 2.5, 2.05,
                      Variant::Ar1);
        auto& s = p.synthetic;
        s.level = {10.0, 14.0};
        s.slope = {-0.5, 1.0};
        s.future_slope = {0.0, 1.0};
        s.sigma = {0.3, 0.8};
        s.rho = {0.1, 0.7};
        s.delta_mean = 2.5;
        s.delta_sd = 0.7;
        s.coupling = -0.5;
        return p;
    }
    if (name == "amoc_index_like" || name == "amoc_index_obs_like") {
        auto p = base(std::string(name), 13, {1880, 1945}, {1880, 1945}, {1965, 2004}, 3.75, 3.75,
                      Variant::Ar1);
        p.config.observational = name == "amoc_index_obs_like";
        auto& s = p.synthetic;
        s.level = {-0.2, 0.2};
        s.slope = {-0.3, 0.3};
        s.future_slope = {-0.2, 0.2};
        s.sigma = {0.1, 0.3};
        s.rho = {0.2, 0.7};
        s.delta_mean = 0.3;
        s.delta_sd = 0.25;
        s.coupling = 0.2;
        return p;
    }
    throw Error(Errc::InvalidInput, "unknown preset '" + std::string(name) + "'");
}

EnsembleDataset preset_dataset(const Preset& p) {
    auto spec = p.synthetic;
    if (!p.config.observational) {
        const auto ensemble = generate_synthetic_ensemble(spec);
        auto data = ensemble.dataset;
        data.name = p.name;
        data.observations =
            synthetic_observation(ensemble, 0, derive_seed(spec.seed, 0x6f6273));
        return data;
    }
    ++spec.k;
    auto data = generate_synthetic_ensemble(spec).dataset;
    data.name = p.name;
    auto observed = std::move(data.models.back());
    data.models.pop_back();
    data.observations = std::move(observed.calibration);
    data.observations_projection = std::move(observed.projection);
    return data;
}

} // namespace tvbma
