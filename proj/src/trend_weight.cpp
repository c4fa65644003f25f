#include "tvbma/trend_weight.hpp"

#include "tvbma/ar1.hpp"
#include "tvbma/error.hpp"
#include "tvbma/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace tvbma {

namespace {

double distance(const std::vector<double>& a, const std::vector<double>& b, DistanceMetric metric) {
    double d = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        const double diff = a[t] - b[t];
        d += metric == DistanceMetric::L1 ? std::abs(diff) : diff * diff;
    }
    return d;
}

} // namespace

void EnsembleTrends::validate() const {
    if (trends.size() < 2) {
        throw Error(Errc::InsufficientEnsemble, "trend weighting needs at least 2 models");
    }
    if (!model_ids.empty() && model_ids.size() != trends.size()) {
        throw Error(Errc::InvalidInput, "trend ensemble: model id count differs from trend count");
    }
    const auto n = trends.front().size();
    if (n < 2) {
        throw Error(Errc::InvalidInput, "trend ensemble: trends need at least 2 points");
    }
    for (const auto& t : trends) {
        if (t.size() != n) {
            throw Error(Errc::InvalidInput, "trend ensemble: trends differ in length");
        }
    }
}

void TrendPrior::validate(std::size_t k) const {
    if (!(sigma.hi > sigma.lo) || sigma.lo < 0.0 || !(rho.hi > rho.lo)) {
        throw Error(Errc::InvalidConfiguration, "trend prior: degenerate sigma or rho range");
    }
    if (!model_priors.empty()) {
        if (model_priors.size() != k) {
            throw Error(Errc::InvalidConfiguration, "trend prior: need one model prior per model");
        }
        double sum = 0.0;
        for (double p : model_priors) {
            if (!(p >= 0.0)) {
                throw Error(Errc::InvalidConfiguration, "trend prior: negative model prior");
            }
            sum += p;
        }
        if (!(sum > 0.0)) {
            throw Error(Errc::InvalidConfiguration, "trend prior: model priors sum to zero");
        }
    }
}

std::vector<std::size_t> nearest_other(std::span<const std::vector<double>> vectors,
                                       DistanceMetric metric) {
    const std::size_t k = vectors.size();
    if (k < 2) {
        throw Error(Errc::InsufficientEnsemble, "next-closest search needs at least 2 models");
    }
    std::vector<std::size_t> closest(k);
    for (std::size_t j = 0; j < k; ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < k; ++i) {
            if (i == j) {
                continue;
            }
            const double d = distance(vectors[j], vectors[i], metric);
            if (d < best) {
                best = d;
                closest[j] = i;
            }
        }
    }
    return closest;
}

DiscrepancyPool build_discrepancy_pool(const EnsembleTrends& trends, DistanceMetric metric) {
    trends.validate();
    const auto closest = nearest_other(trends.trends, metric);
    DiscrepancyPool pool;
    for (std::size_t j = 0; j < trends.size(); ++j) {
        const auto& a = trends.trends[j];
        const auto& b = trends.trends[closest[j]];
        std::vector<double> diff(a.size());
        for (std::size_t t = 0; t < a.size(); ++t) {
            diff[t] = a[t] - b[t];
        }
        pool.samples.push_back(std::move(diff));
        pool.source_pairs.emplace_back(j, closest[j]);
    }
    return pool;
}

std::vector<std::size_t> canonical_pool_order(std::span<const std::vector<double>> samples) {
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(samples[a].begin(), samples[a].end(),
                                            samples[b].begin(), samples[b].end());
    });
    return order;
}

std::vector<double> trend_log_evidence(const EnsembleTrends& trends,
                                       std::span<const double> observed,
                                       const DiscrepancyPool& pool,
                                       const TrendWeightOptions& opts) {
    trends.validate();
    const std::size_t k = trends.size();
    const std::size_t n = trends.trends.front().size();
    if (observed.size() != n) {
        throw Error(Errc::InvalidInput, "trend weights: observations have length " +
                                            std::to_string(observed.size()) + ", trends " +
                                            std::to_string(n));
    }
    if (pool.samples.empty()) {
        throw Error(Errc::InvalidInput, "trend weights: empty discrepancy pool");
    }
    for (const auto& s : pool.samples) {
        if (s.size() != n) {
            throw Error(Errc::InvalidInput, "trend weights: discrepancy sample length mismatch");
        }
    }
    if (opts.n_samples == 0 || !(opts.f >= 0.0)) {
        throw Error(Errc::InvalidConfiguration, "trend weights: need n_samples > 0 and f >= 0");
    }
    opts.prior.validate(k);

    const auto order = canonical_pool_order(pool.samples);
    const std::size_t pool_size = order.size();

    // Residual lag moments for every (model, pool position) pair; each Monte
    // Carlo draw then costs O(1).
    std::vector<LagMoments> moments(k * pool_size);
    std::vector<double> residual(n);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& trend = trends.trends[i];
        for (std::size_t p = 0; p < pool_size; ++p) {
            const auto& eps = pool.samples[order[p]];
            for (std::size_t t = 0; t < n; ++t) {
                residual[t] = observed[t] - (trend[t] + opts.f * eps[t]);
            }
            moments[i * pool_size + p] = lag_moments(residual);
        }
    }

    auto rng = make_rng(opts.seed);
    std::uniform_int_distribution<std::size_t> pick(0, pool_size - 1);
    std::uniform_real_distribution<double> sigma_prior(opts.prior.sigma.lo, opts.prior.sigma.hi);
    std::uniform_real_distribution<double> rho_prior(opts.prior.rho.lo, opts.prior.rho.hi);
    std::vector<std::size_t> position(opts.n_samples);
    std::vector<double> sigma(opts.n_samples), rho(opts.n_samples);
    for (std::size_t s = 0; s < opts.n_samples; ++s) {
        position[s] = pick(rng);
        sigma[s] = sigma_prior(rng);
        rho[s] = rho_prior(rng);
    }

    std::vector<double> evidence(k);
    std::vector<double> ll(opts.n_samples);
    for (std::size_t i = 0; i < k; ++i) {
        const LagMoments* row = &moments[i * pool_size];
        for (std::size_t s = 0; s < opts.n_samples; ++s) {
            ll[s] = ar1_loglik(row[position[s]], sigma[s], rho[s]);
        }
        evidence[i] = log_mean_exp(ll);
    }
    return evidence;
}

WeightVector trend_weights(const EnsembleTrends& trends, std::span<const double> observed,
                           const DiscrepancyPool& pool, const TrendWeightOptions& opts) {
    auto logs = trend_log_evidence(trends, observed, pool, opts);
    if (!opts.prior.model_priors.empty()) {
        for (std::size_t i = 0; i < logs.size(); ++i) {
            logs[i] += std::log(opts.prior.model_priors[i]);
        }
    }
    try {
        return WeightVector::from_log(std::move(logs));
    } catch (const Error&) {
        throw Error(Errc::NumericalDegeneracy,
                    "trend weights: every marginal likelihood is zero or non-finite");
    }
}

} // namespace tvbma
