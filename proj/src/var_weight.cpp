#include "tvbma/var_weight.hpp"

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

struct VarDraws {
    std::vector<std::size_t> position;  // index into the sorted base samples
    std::vector<double> z_sigma;
    std::vector<double> z_rho;
};

void check_inputs(const VariabilitySummaries& summaries, const VarErrorPool& pool,
                  const VarWeightOptions& opts) {
    if (summaries.size() < 2) {
        throw Error(Errc::InsufficientEnsemble, "variability weighting needs at least 2 models");
    }
    for (const auto& s : summaries.stats) {
        s.validate();
    }
    if (pool.base_samples.empty()) {
        throw Error(Errc::InvalidInput, "variability weights: empty error pool");
    }
    if (opts.n_samples == 0 || !(opts.f >= 0.0)) {
        throw Error(Errc::InvalidConfiguration,
                    "variability weights: need n_samples > 0 and f >= 0");
    }
    if (!(opts.clip.rho_cap > 0.0 && opts.clip.rho_cap < 1.0) ||
        !(opts.clip.sigma_floor_factor > 0.0)) {
        throw Error(Errc::InvalidConfiguration, "variability weights: invalid clipping rule");
    }
}

std::vector<std::size_t> sorted_base_order(const std::vector<ParamOffset>& base) {
    std::vector<std::size_t> order(base.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (base[a].sigma != base[b].sigma) {
            return base[a].sigma < base[b].sigma;
        }
        return base[a].rho < base[b].rho;
    });
    return order;
}

VarDraws draw_table(std::size_t pool_size, const VarWeightOptions& opts) {
    auto rng = make_rng(opts.seed);
    std::uniform_int_distribution<std::size_t> pick(0, pool_size - 1);
    std::normal_distribution<double> z(0.0, 1.0);
    VarDraws d;
    d.position.resize(opts.n_samples);
    d.z_sigma.resize(opts.n_samples);
    d.z_rho.resize(opts.n_samples);
    for (std::size_t s = 0; s < opts.n_samples; ++s) {
        d.position[s] = pick(rng);
        d.z_sigma[s] = z(rng);
        d.z_rho[s] = z(rng);
    }
    return d;
}

double sigma_floor(const VariabilitySummaries& summaries, const ClippingRule& clip) {
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& s : summaries.stats) {
        lowest = std::min(lowest, s.sigma);
    }
    return clip.sigma_floor_factor * lowest;
}

Ar1Params draw_params(const Ar1Params& centre, const ParamOffset& base, const ParamOffset& sd,
                      double zs, double zr, double f, double floor, double cap) {
    Ar1Params p;
    p.sigma = centre.sigma + f * (base.sigma + zs * sd.sigma);
    p.rho = centre.rho + f * (base.rho + zr * sd.rho);
    if (p.rho >= cap) {
        p.rho = cap;
    } else if (p.rho <= -cap) {
        p.rho = -cap;
    }
    if (p.sigma < floor) {
        p.sigma = floor;
    }
    return p;
}

std::vector<Ar1Params> apply_draws(const VariabilitySummaries& summaries, const VarErrorPool& pool,
                                   std::span<const std::size_t> order, const VarDraws& draws,
                                   std::size_t model, const VarWeightOptions& opts) {
    const double floor = sigma_floor(summaries, opts.clip);
    std::vector<Ar1Params> out(draws.position.size());
    for (std::size_t s = 0; s < out.size(); ++s) {
        out[s] = draw_params(summaries.stats[model], pool.base_samples[order[draws.position[s]]],
                             pool.jitter_sd, draws.z_sigma[s], draws.z_rho[s], opts.f, floor,
                             opts.clip.rho_cap);
    }
    return out;
}

} // namespace

VariabilitySummaries summarize_variability(std::span<const std::vector<double>> anomalies,
                                           std::span<const std::string> model_ids) {
    if (!model_ids.empty() && model_ids.size() != anomalies.size()) {
        throw Error(Errc::InvalidInput, "summarize_variability: id count differs from model count");
    }
    VariabilitySummaries out;
    for (std::size_t i = 0; i < anomalies.size(); ++i) {
        const std::string id = model_ids.empty() ? "#" + std::to_string(i) : model_ids[i];
        try {
            out.stats.push_back(ar1_mle(anomalies[i]));
        } catch (const Error& e) {
            throw Error(e.code(), "model " + id + ": " + e.what());
        }
        out.model_ids.push_back(id);
    }
    return out;
}

std::vector<std::size_t> next_closest_var(const VariabilitySummaries& summaries,
                                          std::span<const std::vector<double>> anomalies) {
    const std::size_t k = summaries.size();
    if (k < 2) {
        throw Error(Errc::InsufficientEnsemble, "next_closest_var: need at least 2 models");
    }
    if (anomalies.size() != k) {
        throw Error(Errc::InvalidInput, "next_closest_var: one anomaly vector per model required");
    }
    std::vector<std::size_t> assignment(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto m = lag_moments(anomalies[i]);
        double best = -std::numeric_limits<double>::infinity();
        assignment[i] = i == 0 ? 1 : 0;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) {
                continue;
            }
            const double ll = ar1_loglik(m, summaries.stats[j].sigma, summaries.stats[j].rho);
            if (ll > best) {
                best = ll;
                assignment[i] = j;
            }
        }
    }
    return assignment;
}

VarErrorPool build_var_error_pool(const VariabilitySummaries& summaries,
                                  std::span<const std::size_t> assignments) {
    const std::size_t k = summaries.size();
    if (assignments.size() != k) {
        throw Error(Errc::InvalidInput, "build_var_error_pool: one assignment per model required");
    }
    VarErrorPool pool;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = assignments[i];
        if (j >= k || j == i) {
            throw Error(Errc::InvalidInput, "build_var_error_pool: invalid next-closest assignment");
        }
        pool.base_samples.push_back({summaries.stats[i].sigma - summaries.stats[j].sigma,
                                     summaries.stats[i].rho - summaries.stats[j].rho});
    }
    pool.base_samples.push_back({0.0, 0.0});

    const auto [smin, smax] = std::minmax_element(
        pool.base_samples.begin(), pool.base_samples.end(),
        [](const ParamOffset& a, const ParamOffset& b) { return a.sigma < b.sigma; });
    const auto [rmin, rmax] = std::minmax_element(
        pool.base_samples.begin(), pool.base_samples.end(),
        [](const ParamOffset& a, const ParamOffset& b) { return a.rho < b.rho; });
    pool.jitter_sd = {(smax->sigma - smin->sigma) / 5.0, (rmax->rho - rmin->rho) / 5.0};
    return pool;
}

std::vector<Ar1Params> sample_variability_params(const VariabilitySummaries& summaries,
                                                 const VarErrorPool& pool, std::size_t model,
                                                 const VarWeightOptions& opts) {
    check_inputs(summaries, pool, opts);
    if (model >= summaries.size()) {
        throw Error(Errc::InvalidInput, "sample_variability_params: model index out of range");
    }
    const auto order = sorted_base_order(pool.base_samples);
    const auto draws = draw_table(order.size(), opts);
    return apply_draws(summaries, pool, order, draws, model, opts);
}

std::vector<double> var_log_evidence(const VariabilitySummaries& summaries,
                                     const VarErrorPool& pool,
                                     std::span<const double> observed_anomalies,
                                     const VarWeightOptions& opts) {
    check_inputs(summaries, pool, opts);
    if (observed_anomalies.size() < 2) {
        throw Error(Errc::InvalidInput, "variability weights: need at least 2 observed anomalies");
    }
    const auto observed = lag_moments(observed_anomalies);
    const auto order = sorted_base_order(pool.base_samples);
    const auto draws = draw_table(order.size(), opts);

    std::vector<double> evidence(summaries.size());
    std::vector<double> ll(opts.n_samples);
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        const auto params = apply_draws(summaries, pool, order, draws, i, opts);
        for (std::size_t s = 0; s < params.size(); ++s) {
            ll[s] = ar1_loglik(observed, params[s].sigma, params[s].rho);
        }
        evidence[i] = log_mean_exp(ll);
    }
    return evidence;
}

WeightVector var_weights(const VariabilitySummaries& summaries, const VarErrorPool& pool,
                         std::span<const double> observed_anomalies,
                         const VarWeightOptions& opts) {
    try {
        return WeightVector::from_log(var_log_evidence(summaries, pool, observed_anomalies, opts));
    } catch (const Error& e) {
        if (e.code() != Errc::NumericalDegeneracy) {
            throw;
        }
        throw Error(Errc::NumericalDegeneracy,
                    "variability weights: every marginal likelihood is zero or non-finite");
    }
}

} // namespace tvbma
