#pragma once

#include "tvbma/time_series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tvbma {

struct ModelRun {
    std::string id;
    TimeSeries calibration;
    TimeSeries projection;
};

/// Raw ensemble output over the calibration and projection periods, plus
/// optional observations. The projection reference period lies inside the
/// calibration period.
struct EnsembleDataset {
    std::string name;
    std::string units;
    std::string variable;
    Period calibration;
    Period projection_reference;
    Period projection;
    std::vector<ModelRun> models;
    std::optional<TimeSeries> observations;             ///< calibration period
    std::optional<TimeSeries> observations_projection;  ///< projection period, for validation

    std::size_t size() const noexcept { return models.size(); }

    /// Checks shared axes, period coverage and observation alignment.
    /// Throws AxisMismatch (naming both models) or InvalidInput.
    void validate() const;
};

} // namespace tvbma
