#pragma once

#include "tvbma/time_series.hpp"
#include "tvbma/weights.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tvbma {

enum class DistanceMetric { L1, L2 };

/// Calibration-period trend of each ensemble member.
struct EnsembleTrends {
    std::vector<std::string> model_ids;
    std::vector<std::vector<double>> trends;

    std::size_t size() const noexcept { return trends.size(); }
    /// Throws InsufficientEnsemble for k < 2, InvalidInput on ragged vectors.
    void validate() const;
};

/// Unscaled discrepancy draws: samples[j] = trend_j - trend_{closest(j)}.
struct DiscrepancyPool {
    std::vector<std::vector<double>> samples;
    std::vector<std::pair<std::size_t, std::size_t>> source_pairs;  ///< (j, closest(j))
};

struct TrendPrior {
    Interval sigma{0.0, 5.0};
    Interval rho{-1.0, 1.0};
    std::vector<double> model_priors;  ///< empty means uniform

    void validate(std::size_t k) const;
};

struct TrendWeightOptions {
    double f = 1.0;
    TrendPrior prior;
    std::size_t n_samples = 100000;
    std::uint64_t seed = 1;
};

/// Index of the nearest other vector for each entry (ties to the lower index).
std::vector<std::size_t> nearest_other(std::span<const std::vector<double>> vectors,
                                       DistanceMetric metric = DistanceMetric::L1);

DiscrepancyPool build_discrepancy_pool(const EnsembleTrends& trends,
                                       DistanceMetric metric = DistanceMetric::L1);

/// Order in which Monte Carlo draws index the pool: pool samples sorted
/// lexicographically (stable). Using this order makes the draws independent of
/// how the ensemble happens to be listed.
std::vector<std::size_t> canonical_pool_order(std::span<const std::vector<double>> samples);

/// Log marginal likelihood log L_i of the raw observations under each trend
/// submodel, by Monte Carlo over (discrepancy, sigma, rho).
///
/// One generator seeded from `opts.seed` produces, for each of the n_samples
/// draws in turn: a pool position (uniform over canonical_pool_order), sigma
/// and rho (uniform over the prior box). The same draws are used for every
/// model. Draw s for model i evaluates the AR(1) likelihood of
/// observed - (trend_i + f * pool[position_s]).
std::vector<double> trend_log_evidence(const EnsembleTrends& trends,
                                       std::span<const double> observed,
                                       const DiscrepancyPool& pool,
                                       const TrendWeightOptions& opts);

/// Posterior trend-submodel probabilities: prior_i * L_i, normalized.
WeightVector trend_weights(const EnsembleTrends& trends, std::span<const double> observed,
                           const DiscrepancyPool& pool, const TrendWeightOptions& opts);

} // namespace tvbma
