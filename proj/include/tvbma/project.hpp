#pragma once

#include "tvbma/ar1.hpp"
#include "tvbma/trend_weight.hpp"
#include "tvbma/weights.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace tvbma {

enum class Variant { Boot, Ar1 };

/// Projection-period ingredients for one ensemble member.
struct ModelProjection {
    std::vector<double> future_trend;
    std::vector<double> future_anomalies;
    double reference_mean = 0.0;  ///< raw mean over the projection reference period
    /// Ar1 variant only; estimated from future_anomalies when absent.
    std::optional<Ar1Params> future_params;
};

struct ProjectionInputs {
    std::vector<ModelProjection> models;
    WeightVector weights;
    double bias_scale = 0.0;  ///< sd of future next-closest period-mean differences
    double f = 1.0;
    Variant variant = Variant::Boot;
    std::size_t n_draws = 100000;

    void validate() const;
};

struct Summary {
    double mean = 0.0;
    double median = 0.0;
    double mode = 0.0;
    Interval ci90;
    double bandwidth = 0.0;  ///< KDE bandwidth used for the mode
};

struct ProjectionResult {
    std::vector<double> delta_samples;
    Summary summary;
    std::vector<std::size_t> per_model_draw_counts;
};

/// Sample standard deviation of x̄_i - x̄_closest(i), where x̄ is the mean of a
/// future vector and closest(i) is the nearest other vector under `metric`.
/// k = 2 is accepted (the two differences mirror each other).
double future_bias_scale(std::span<const std::vector<double>> future_vectors,
                         DistanceMetric metric = DistanceMetric::L1);

/// Mixture draws of the change between projection and reference periods:
/// model i ~ weights, time-constant bias b ~ N(0, (f * bias_scale)^2), internal
/// variability by iid bootstrap of the model's future anomalies (Boot) or AR(1)
/// simulation from its future parameters (Ar1); delta = mean(trend + b + noise)
/// minus the model's reference mean.
///
/// `Interval` skips the density estimate (mode and bandwidth stay zero).
enum class SummaryLevel { Full, Interval };
ProjectionResult sample_projection(const ProjectionInputs& inputs, std::uint64_t seed,
                                   SummaryLevel level = SummaryLevel::Full);

/// Type-7 (linear interpolation) empirical quantile of sorted data.
double quantile_sorted(std::span<const double> sorted, double p);

struct DensityGrid {
    std::vector<double> x;
    std::vector<double> density;
    double bandwidth = 0.0;
};

/// Silverman's rule of thumb, 0.9 * min(sd, IQR / 1.34) * n^(-1/5), with the
/// usual fallbacks when the spread estimate is zero.
double silverman_bandwidth(std::span<const double> samples);

/// Gaussian KDE on `points` equally spaced points spanning the sample range
/// extended by three bandwidths on each side. A constant sample yields a single
/// grid point carrying unit mass.
DensityGrid kde_grid(std::span<const double> samples, std::size_t points = 512);

/// Mean, median, 5-95% equal-tailed interval and KDE mode.
Summary summarize(std::span<const double> samples);

/// Mean and 90% interval only (no density estimate).
Summary summarize_interval(std::span<const double> samples);

} // namespace tvbma
