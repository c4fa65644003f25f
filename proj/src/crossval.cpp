#include "tvbma/crossval.hpp"

#include "tvbma/combine.hpp"
#include "tvbma/error.hpp"
#include "tvbma/random.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

namespace tvbma {

namespace {

// Seed sub-streams of one truth round.
enum Stream : std::uint64_t { kTrendStream = 0, kVarStream = 1, kProjectionStream = 2 };

constexpr std::uint64_t kObservationRound = 0xffffffffULL;

std::uint64_t round_seed(const ExperimentConfig& config, std::uint64_t round, Stream stream) {
    return derive_seed(derive_seed(config.seed, round), stream);
}

void check_smoother(const SmootherSpec& s, const char* which) {
    if (s.kind == Smoother::Lowess && (!(s.span > 0.0 && s.span <= 1.0) || s.iterations < 1)) {
        throw Error(Errc::InvalidConfiguration,
                    std::string(which) + " smoother: span must be in (0, 1], iterations >= 1");
    }
}

template <typename Fn>
void for_each_index(std::size_t count, Fn&& fn) {
    const std::size_t threads =
        std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += threads) {
                    fn(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

ObservedWeights weigh(const PreparedEnsemble& prepared, std::span<const double> raw_observed,
                      std::span<const double> observed_anomalies, const ExperimentConfig& config,
                      std::uint64_t round) {
    TrendWeightOptions topts;
    topts.f = config.f;
    topts.prior = config.trend_prior;
    topts.n_samples = config.trend_mc;
    topts.seed = round_seed(config, round, kTrendStream);

    ObservedWeights w;
    w.trend = trend_weights(prepared.trends, raw_observed, prepared.trend_pool, topts);
    if (config.method == Method::TrendVar) {
        VarWeightOptions vopts;
        vopts.f = config.f;
        vopts.n_samples = config.var_mc;
        vopts.seed = round_seed(config, round, kVarStream);
        w.variability =
            var_weights(prepared.summaries, prepared.var_pool, observed_anomalies, vopts);
        w.combined = combine_weights(w.trend, w.variability);
    } else {
        w.variability = WeightVector::uniform(w.trend.size());
        w.combined = trend_only_weights(w.trend);
    }
    return w;
}

ProjectionResult project_subset(const PreparedEnsemble& prepared, const WeightVector& weights,
                                std::span<const std::size_t> members,
                                const ExperimentConfig& config, std::uint64_t seed,
                                SummaryLevel level) {
    ProjectionInputs inputs;
    std::vector<std::vector<double>> future;
    std::vector<double> logs;
    for (std::size_t j : members) {
        inputs.models.push_back(prepared.projections[j]);
        future.push_back(prepared.future_trends[j]);
        logs.push_back(weights.log_values()[j]);
    }
    inputs.weights = WeightVector::from_log(std::move(logs));
    inputs.bias_scale = future_bias_scale(future, config.metric);
    inputs.f = config.f;
    inputs.variant = config.variant;
    inputs.n_draws = config.proj_draws;
    return sample_projection(inputs, seed, level);
}

void aggregate(CrossValReport& report) {
    const double rounds = static_cast<double>(report.records.size());
    double covered = 0.0;
    double width = 0.0;
    double bias = 0.0;
    for (const auto& r : report.records) {
        covered += r.covered ? 1.0 : 0.0;
        width += r.ci90.width();
        bias += std::abs(r.mean - r.true_delta);
    }
    report.coverage = covered / rounds;
    report.mciw = width / rounds;
    report.mab = bias / rounds;
}

} // namespace

void ExperimentConfig::validate() const {
    if (!(f >= 0.0) || !std::isfinite(f)) {
        throw Error(Errc::InvalidConfiguration, "config: f must be finite and >= 0");
    }
    if (trend_mc == 0 || var_mc == 0 || proj_draws == 0) {
        throw Error(Errc::InvalidConfiguration, "config: sample counts must be positive");
    }
    check_smoother(calibration_smoother, "calibration");
    check_smoother(projection_smoother, "projection");
    trend_prior.validate(trend_prior.model_priors.size());
}

PreparedEnsemble prepare_ensemble(const EnsembleDataset& data, const ExperimentConfig& config) {
    data.validate();
    config.validate();
    const std::size_t k = data.size();
    if (k < (config.observational ? 2u : 3u)) {
        throw Error(Errc::InsufficientEnsemble,
                    "cross-validation needs at least 3 models, got " + std::to_string(k));
    }
    if (!config.trend_prior.model_priors.empty() && config.trend_prior.model_priors.size() != k) {
        throw Error(Errc::InvalidConfiguration, "config: need one trend model prior per model");
    }

    PreparedEnsemble p;
    std::vector<std::vector<double>> anomalies;
    for (const auto& model : data.models) {
        p.model_ids.push_back(model.id);
        const auto cal = model.calibration.values();
        p.raw_calibration.emplace_back(cal.begin(), cal.end());
        try {
            p.calibration.push_back(
                decompose(model.calibration, config.calibration_smoother, config.mode));
        } catch (const Error& e) {
            throw Error(e.code(), "model " + model.id + " (calibration): " + e.what());
        }
        p.trends.model_ids.push_back(model.id);
        p.trends.trends.push_back(p.calibration.back().trend);
        anomalies.push_back(p.calibration.back().anomalies);

        ModelProjection proj;
        Decomposition future;
        try {
            future = decompose(model.projection, config.projection_smoother, AnomalyMode::Absolute);
        } catch (const Error& e) {
            throw Error(e.code(), "model " + model.id + " (projection): " + e.what());
        }
        proj.future_trend = future.trend;
        proj.future_anomalies = future.anomalies;
        proj.reference_mean = mean(model.calibration.slice(data.projection_reference).values());
        if (config.variant == Variant::Ar1) {
            try {
                proj.future_params = ar1_mle(proj.future_anomalies);
            } catch (const Error& e) {
                throw Error(e.code(), "model " + model.id + " (future anomalies): " + e.what());
            }
        }
        p.true_delta.push_back(mean(model.projection.values()) - proj.reference_mean);
        p.future_trends.push_back(future.trend);
        p.projections.push_back(std::move(proj));
    }
    p.trend_pool = build_discrepancy_pool(p.trends, config.metric);
    p.summaries = summarize_variability(anomalies, p.model_ids);
    const auto assignment = next_closest_var(p.summaries, anomalies);
    p.var_pool = build_var_error_pool(p.summaries, assignment);
    return p;
}

ObservedWeights weigh_observations(const PreparedEnsemble& prepared,
                                   const TimeSeries& observations,
                                   const ExperimentConfig& config) {
    const auto d = decompose(observations, config.calibration_smoother, config.mode);
    return weigh(prepared, observations.values(), d.anomalies, config, kObservationRound);
}

ProjectionResult project_ensemble(const PreparedEnsemble& prepared, const WeightVector& weights,
                                  const ExperimentConfig& config, SummaryLevel level) {
    std::vector<std::size_t> members(prepared.projections.size());
    for (std::size_t j = 0; j < members.size(); ++j) {
        members[j] = j;
    }
    return project_subset(prepared, weights, members, config,
                          round_seed(config, kObservationRound, kProjectionStream), level);
}

TruthRecord run_truth_round(const PreparedEnsemble& prepared, std::size_t truth,
                            const ExperimentConfig& config) {
    const std::size_t k = prepared.projections.size();
    if (truth >= k) {
        throw Error(Errc::InvalidInput, "truth index out of range");
    }
    const auto& pseudo = prepared.calibration[truth];
    // pseudo raw series is rebuilt from the truth's own trend and anomalies
    const auto raw = pseudo.reconstruct();

    TruthRecord rec;
    rec.truth_id = prepared.model_ids[truth];
    rec.true_delta = prepared.true_delta[truth];
    try {
        const auto w = weigh(prepared, raw, pseudo.anomalies, config, truth);
        const auto remaining = w.combined.excluding(truth);

        std::vector<std::size_t> members;
        for (std::size_t j = 0; j < k; ++j) {
            if (j != truth) {
                members.push_back(j);
            }
        }
        const auto proj =
            project_subset(prepared, remaining, members, config,
                           round_seed(config, truth, kProjectionStream), SummaryLevel::Interval);
        rec.ci90 = proj.summary.ci90;
        rec.mean = proj.summary.mean;
        rec.weights.assign(remaining.values().begin(), remaining.values().end());
        rec.trend_weights.assign(w.trend.values().begin(), w.trend.values().end());
        rec.var_weights.assign(w.variability.values().begin(), w.variability.values().end());
    } catch (const Error& e) {
        throw Error(e.code(), "truth " + rec.truth_id + ": " + e.what());
    }
    rec.covered = rec.ci90.contains(rec.true_delta);
    return rec;
}

std::vector<std::vector<double>> pseudo_truth_trend_weights(const PreparedEnsemble& prepared,
                                                            const ExperimentConfig& config) {
    const std::size_t k = prepared.projections.size();
    std::vector<std::vector<double>> rows(k);
    for_each_index(k, [&](std::size_t i) {
        TrendWeightOptions topts;
        topts.f = config.f;
        topts.prior = config.trend_prior;
        topts.n_samples = config.trend_mc;
        topts.seed = round_seed(config, i, kTrendStream);
        const auto w = trend_weights(prepared.trends, prepared.calibration[i].reconstruct(),
                                     prepared.trend_pool, topts);
        rows[i].assign(w.values().begin(), w.values().end());
    });
    return rows;
}

CrossValReport run_loocv(const PreparedEnsemble& prepared, const EnsembleDataset& data,
                         const ExperimentConfig& config) {
    config.validate();
    CrossValReport report;
    report.method = config.method;
    report.f = config.f;
    report.model_ids = prepared.model_ids;

    if (config.observational) {
        if (!data.observations || !data.observations_projection) {
            throw Error(Errc::InvalidInput,
                        "observational run needs calibration and projection observations");
        }
        const auto w = weigh_observations(prepared, *data.observations, config);
        const auto proj = project_ensemble(prepared, w.combined, config, SummaryLevel::Interval);
        TruthRecord rec;
        rec.truth_id = "observations";
        rec.true_delta = mean(data.observations_projection->values()) -
                         mean(data.observations->slice(data.projection_reference).values());
        rec.ci90 = proj.summary.ci90;
        rec.mean = proj.summary.mean;
        rec.covered = rec.ci90.contains(rec.true_delta);
        rec.weights.assign(w.combined.values().begin(), w.combined.values().end());
        rec.trend_weights.assign(w.trend.values().begin(), w.trend.values().end());
        rec.var_weights.assign(w.variability.values().begin(), w.variability.values().end());
        report.records.push_back(std::move(rec));
    } else {
        const std::size_t k = prepared.projections.size();
        report.records.resize(k);
        for_each_index(k, [&](std::size_t i) { report.records[i] = run_truth_round(prepared, i, config); });
    }
    aggregate(report);
    return report;
}

CrossValReport run_loocv(const EnsembleDataset& data, const ExperimentConfig& config) {
    return run_loocv(prepare_ensemble(data, config), data, config);
}

std::vector<double> default_f_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 20; ++i) {
        grid.push_back(0.25 * i);
    }
    return grid;
}

CalibrationResult calibrate_f(const EnsembleDataset& data, const ExperimentConfig& config,
                              double target, std::vector<double> f_grid) {
    if (f_grid.size() < 3 || !std::is_sorted(f_grid.begin(), f_grid.end()) ||
        std::adjacent_find(f_grid.begin(), f_grid.end()) != f_grid.end() || f_grid.front() < 0.0) {
        throw Error(Errc::InvalidConfiguration,
                    "calibrate_f: grid must be strictly increasing, nonnegative, >= 3 points");
    }
    if (!(target > 0.0 && target <= 1.0)) {
        throw Error(Errc::InvalidConfiguration, "calibrate_f: target coverage must be in (0, 1]");
    }
    const auto prepared = prepare_ensemble(data, config);

    CalibrationResult result;
    result.target = target;
    std::vector<CrossValReport> reports;
    for (double f : f_grid) {
        auto cfg = config;
        cfg.f = f;
        reports.push_back(run_loocv(prepared, data, cfg));
        const auto& r = reports.back();
        result.trace.push_back({f, r.coverage, r.mciw, r.mab});
    }
    result.granularity = 1.0 / static_cast<double>(reports.front().records.size());

    constexpr double eps = 1e-12;
    double level = -1.0;
    double lowest = 2.0;
    for (const auto& p : result.trace) {
        lowest = std::min(lowest, p.coverage);
        if (p.coverage <= target + result.granularity + eps) {
            level = std::max(level, p.coverage);
        }
    }
    if (level < 0.0) {
        level = lowest;
    }
    std::size_t chosen = 0;
    while (result.trace[chosen].coverage < level - eps) {
        ++chosen;
    }
    result.f_star = result.trace[chosen].f;
    result.report = std::move(reports[chosen]);
    result.success = result.trace[chosen].coverage >= target - result.granularity - eps;
    return result;
}

} // namespace tvbma
