#pragma once

#include "tvbma/time_series.hpp"

#include <span>
#include <vector>

namespace tvbma {

enum class Smoother { TheilSen, Lowess };

struct SmootherSpec {
    Smoother kind = Smoother::TheilSen;
    double span = 0.8;   ///< fraction of points in each local fit (lowess only)
    int iterations = 3;  ///< robustness iterations (lowess only)
};

enum class AnomalyMode { Absolute, Relative };

struct LinearFit {
    double slope = 0.0;      ///< per time step
    double intercept = 0.0;  ///< value at the first time stamp
};

/// Split of a series into trend and anomalies.
///
/// Absolute: values = trend + anomalies.
/// Relative: values = trend + series_mean * anomalies, where series_mean is the
/// raw sample mean of the series.
struct Decomposition {
    std::vector<double> trend;
    std::vector<double> anomalies;
    AnomalyMode mode = AnomalyMode::Absolute;
    double series_mean = 0.0;

    std::vector<double> reconstruct() const;
};

/// Theil-Sen line through (x, y): median of pairwise slopes, then median of
/// y - slope * x. Even-length medians take the midpoint of the two central
/// order statistics.
LinearFit theil_sen(std::span<const double> x, std::span<const double> y);

/// Theil-Sen on the step index of `series` (time axis rescaled to unit steps).
LinearFit theil_sen(const TimeSeries& series);

/// Cleveland's robust locally weighted linear regression (tricube distance
/// weights, bisquare robustness weights), evaluated at every x. `x` must be
/// sorted ascending.
std::vector<double> lowess(std::span<const double> x, std::span<const double> y, double span,
                           int iterations);

std::vector<double> lowess(const TimeSeries& series, const SmootherSpec& spec);

/// Fitted trend of `series` under `spec`.
std::vector<double> fit_trend(const TimeSeries& series, const SmootherSpec& spec);

Decomposition decompose(const TimeSeries& series, const SmootherSpec& spec, AnomalyMode mode);

} // namespace tvbma
