#pragma once

#include "tvbma/ar1.hpp"
#include "tvbma/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace tvbma {

/// Recipe for a synthetic ensemble: per-model polynomial calibration trends,
/// AR(1) noise with per-model (sigma, rho), and a deterministic future change
/// that can be coupled to the model's innovation sd.
struct SyntheticEnsembleSpec {
    std::size_t k = 10;
    Period calibration{1941, 2000};
    Period projection_reference{1941, 2000};
    Period projection{2061, 2100};

    // Calibration trend: level + slope * u + curvature * (u^2 - mean(u^2)),
    // u in [-1/2, 1/2] across the calibration period.
    Interval level{-0.5, 0.5};
    Interval slope{0.0, 1.0};
    Interval curvature{0.0, 0.0};
    /// Linear drift across the projection period, centered on its mean.
    Interval future_slope{0.0, 1.0};

    Interval sigma{0.1, 0.6};
    Interval rho{0.0, 0.8};
    /// 0: every model draws (sigma, rho) independently. Otherwise models are
    /// dealt round-robin to this many cluster centers and jittered by
    /// cluster_spread times the range width.
    std::size_t clusters = 0;
    double cluster_spread = 0.03;

    double delta_mean = 2.0;
    double delta_sd = 1.0;
    /// Correlation between the model's sigma and its future change.
    double coupling = 0.0;

    std::uint64_t seed = 1;

    void validate() const;
};

struct SyntheticModelTruth {
    Ar1Params params;
    std::size_t cluster = 0;
    double delta = 0.0;  ///< mean future trend minus mean trend over the reference period
    double level = 0.0;
    double slope = 0.0;
    double curvature = 0.0;
    double future_slope = 0.0;
    std::vector<double> calibration_trend;
    std::vector<double> projection_trend;
};

struct SyntheticEnsemble {
    EnsembleDataset dataset;
    std::vector<SyntheticModelTruth> truth;
};

SyntheticEnsemble generate_synthetic_ensemble(const SyntheticEnsembleSpec& spec);

/// A fresh realization of `model`: its calibration trend plus new AR(1) noise.
TimeSeries synthetic_observation(const SyntheticEnsemble& ensemble, std::size_t model,
                                 std::uint64_t seed);

} // namespace tvbma
