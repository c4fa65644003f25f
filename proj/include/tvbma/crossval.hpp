#pragma once

#include "tvbma/dataset.hpp"
#include "tvbma/decompose.hpp"
#include "tvbma/project.hpp"
#include "tvbma/trend_weight.hpp"
#include "tvbma/var_weight.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tvbma {

enum class Method { Trend, TrendVar };

struct ExperimentConfig {
    SmootherSpec calibration_smoother;
    SmootherSpec projection_smoother;
    AnomalyMode mode = AnomalyMode::Absolute;  ///< normalization of variability anomalies
    Variant variant = Variant::Boot;
    Method method = Method::TrendVar;
    double f = 1.0;
    std::size_t trend_mc = 100000;
    std::size_t var_mc = 10000;
    std::size_t proj_draws = 100000;
    std::uint64_t seed = 20190101;
    TrendPrior trend_prior;
    DistanceMetric metric = DistanceMetric::L1;
    /// Weight with real observations and validate against the observed change
    /// instead of holding out each model in turn.
    bool observational = false;

    void validate() const;
};

struct TruthRecord {
    std::string truth_id;
    double true_delta = 0.0;
    Interval ci90;
    double mean = 0.0;
    bool covered = false;
    std::vector<double> weights;        ///< combined, truth excluded, renormalized
    std::vector<double> trend_weights;  ///< trend submodel, all k models
    std::vector<double> var_weights;    ///< variability submodel, all k models
};

struct CrossValReport {
    Method method = Method::TrendVar;
    double f = 0.0;
    std::vector<std::string> model_ids;
    std::vector<TruthRecord> records;
    double coverage = 0.0;
    double mciw = 0.0;
    double mab = 0.0;
};

/// Decompositions, pools and future ingredients that do not depend on f or on
/// which model plays the truth. Reused across an f grid.
struct PreparedEnsemble {
    std::vector<std::string> model_ids;
    std::vector<std::vector<double>> raw_calibration;
    std::vector<Decomposition> calibration;
    EnsembleTrends trends;
    DiscrepancyPool trend_pool;
    VariabilitySummaries summaries;
    VarErrorPool var_pool;
    std::vector<ModelProjection> projections;
    std::vector<double> true_delta;
    std::vector<std::vector<double>> future_trends;
};

PreparedEnsemble prepare_ensemble(const EnsembleDataset& data, const ExperimentConfig& config);

/// One-at-a-time cross-validation: each model in turn supplies the
/// pseudo-observations; weights are computed over all k models, the truth is
/// dropped and the rest renormalized, and the k - 1 model projection's 90%
/// interval is checked against the truth's own change. With
/// config.observational the dataset's observations are used once instead.
CrossValReport run_loocv(const EnsembleDataset& data, const ExperimentConfig& config);
CrossValReport run_loocv(const PreparedEnsemble& prepared, const EnsembleDataset& data,
                         const ExperimentConfig& config);

/// Same as run_loocv for one truth round (exposed for tests and the CLI).
TruthRecord run_truth_round(const PreparedEnsemble& prepared, std::size_t truth,
                            const ExperimentConfig& config);

/// Submodel and combined weights for the dataset's real observations.
struct ObservedWeights {
    WeightVector trend;
    WeightVector variability;  ///< uniform under Method::Trend
    WeightVector combined;
};

/// Weights all k models against `observations` (calibration period).
ObservedWeights weigh_observations(const PreparedEnsemble& prepared,
                                   const TimeSeries& observations,
                                   const ExperimentConfig& config);

/// Weighted projection with every model in the ensemble.
ProjectionResult project_ensemble(const PreparedEnsemble& prepared, const WeightVector& weights,
                                  const ExperimentConfig& config,
                                  SummaryLevel level = SummaryLevel::Full);

/// Trend-submodel weights over all k models with each model in turn as the
/// pseudo-truth (row i: model i supplies the observations).
std::vector<std::vector<double>> pseudo_truth_trend_weights(const PreparedEnsemble& prepared,
                                                            const ExperimentConfig& config);

struct CalibrationPoint {
    double f = 0.0;
    double coverage = 0.0;
    double mciw = 0.0;
    double mab = 0.0;
};

struct CalibrationResult {
    bool success = false;
    double f_star = 0.0;
    double target = 0.9;
    double granularity = 0.0;  ///< 1 / number of truth rounds
    std::vector<CalibrationPoint> trace;
    CrossValReport report;  ///< at f_star
};

/// 0.25, 0.5, ..., 5.0
std::vector<double> default_f_grid();

/// Grid search for the error expansion factor. With g = 1 / rounds, C is the
/// largest coverage on the grid not exceeding target + g (the smallest
/// coverage seen if all exceed it); f* is the smallest f reaching C. Success
/// requires coverage(f*) >= target - g.
CalibrationResult calibrate_f(const EnsembleDataset& data, const ExperimentConfig& config,
                              double target = 0.9, std::vector<double> f_grid = default_f_grid());

} // namespace tvbma
