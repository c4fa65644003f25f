#pragma once

#include "tvbma/crossval.hpp"
#include "tvbma/synthetic.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace tvbma {

/// Named experiment layout (periods, ensemble size, f, variant), paired with a
/// synthetic stand-in ensemble of the same shape.
struct Preset {
    std::string name;
    ExperimentConfig config;  ///< config.f is the trend+var starting value
    double trend_f = 1.0;
    double trendvar_f = 1.0;
    SyntheticEnsembleSpec synthetic;
};

/// amoc_like, korea_temp_like, korea_temp_long_like, winter_sst_like,
/// amoc_index_like, amoc_index_obs_like. Throws InvalidInput otherwise.
Preset preset(std::string_view name);

std::vector<std::string> preset_names();

/// The preset's synthetic ensemble as a dataset. Observational presets
/// generate one extra member and turn it into the observations (both
/// periods). Other presets get a calibration-period observation drawn as a
/// fresh realization of the first member.
EnsembleDataset preset_dataset(const Preset& p);

} // namespace tvbma
