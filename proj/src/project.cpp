#include "tvbma/project.hpp"

#include "tvbma/error.hpp"
#include "tvbma/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace tvbma {

void ProjectionInputs::validate() const {
    if (models.empty()) {
        throw Error(Errc::InsufficientEnsemble, "projection: no models");
    }
    if (weights.size() != models.size()) {
        throw Error(Errc::InvalidInput, "projection: weight count differs from model count");
    }
    const auto m = models.front().future_trend.size();
    if (m == 0) {
        throw Error(Errc::InvalidInput, "projection: empty future trend");
    }
    for (const auto& model : models) {
        if (model.future_trend.size() != m || model.future_anomalies.size() != m) {
            throw Error(Errc::InvalidInput, "projection: future vectors differ in length");
        }
    }
    if (n_draws == 0 || !(f >= 0.0) || !(bias_scale >= 0.0)) {
        throw Error(Errc::InvalidConfiguration,
                    "projection: need n_draws > 0, f >= 0 and bias_scale >= 0");
    }
}

double future_bias_scale(std::span<const std::vector<double>> future_vectors,
                         DistanceMetric metric) {
    const auto closest = nearest_other(future_vectors, metric);
    std::vector<double> means(future_vectors.size());
    for (std::size_t i = 0; i < means.size(); ++i) {
        means[i] = mean(future_vectors[i]);
    }
    std::vector<double> diffs(means.size());
    for (std::size_t i = 0; i < means.size(); ++i) {
        diffs[i] = means[i] - means[closest[i]];
    }
    return sample_sd(diffs);
}

ProjectionResult sample_projection(const ProjectionInputs& inputs, std::uint64_t seed,
                                   SummaryLevel level) {
    inputs.validate();
    const std::size_t k = inputs.models.size();
    const std::size_t m = inputs.models.front().future_trend.size();

    std::vector<double> trend_mean(k);
    std::vector<Ar1Params> params(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& model = inputs.models[i];
        trend_mean[i] = mean(model.future_trend);
        if (inputs.variant == Variant::Ar1 && inputs.weights[i] > 0.0) {
            if (model.future_params) {
                model.future_params->validate();
                params[i] = *model.future_params;
            } else {
                try {
                    params[i] = ar1_mle(model.future_anomalies);
                } catch (const Error& e) {
                    throw Error(e.code(), "projection model " + std::to_string(i) + ": " + e.what());
                }
            }
        }
    }

    auto rng = make_rng(seed);
    const auto w = inputs.weights.values();
    std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
    std::normal_distribution<double> z(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> index(0, m - 1);
    const double bias_sd = inputs.f * inputs.bias_scale;
    const double inv_m = 1.0 / static_cast<double>(m);

    ProjectionResult out;
    out.delta_samples.resize(inputs.n_draws);
    out.per_model_draw_counts.assign(k, 0);
    for (std::size_t d = 0; d < inputs.n_draws; ++d) {
        const std::size_t i = pick(rng);
        ++out.per_model_draw_counts[i];
        // drawn even when bias_sd is zero so the stream does not depend on f
        const double bias = bias_sd * z(rng);
        double noise = 0.0;
        if (inputs.variant == Variant::Boot) {
            const auto& anomalies = inputs.models[i].future_anomalies;
            for (std::size_t t = 0; t < m; ++t) {
                noise += anomalies[index(rng)];
            }
        } else {
            const auto& p = params[i];
            double x = p.sigma / std::sqrt(1.0 - p.rho * p.rho) * z(rng);
            noise = x;
            for (std::size_t t = 1; t < m; ++t) {
                x = p.rho * x + p.sigma * z(rng);
                noise += x;
            }
        }
        out.delta_samples[d] =
            trend_mean[i] + bias + noise * inv_m - inputs.models[i].reference_mean;
    }
    out.summary = level == SummaryLevel::Full ? summarize(out.delta_samples)
                                              : summarize_interval(out.delta_samples);
    return out;
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) {
        throw Error(Errc::InvalidInput, "quantile of an empty sample");
    }
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double silverman_bandwidth(std::span<const double> samples) {
    if (samples.size() < 2) {
        throw Error(Errc::InvalidInput, "bandwidth: need at least 2 samples");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double sd = sample_sd(sorted);
    const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    double spread = std::min(sd, iqr / 1.34);
    if (!(spread > 0.0)) {
        spread = sd;
    }
    if (!(spread > 0.0)) {
        spread = std::abs(sorted.front());
    }
    if (!(spread > 0.0)) {
        spread = 1.0;
    }
    return 0.9 * spread * std::pow(static_cast<double>(sorted.size()), -0.2);
}

DensityGrid kde_grid(std::span<const double> samples, std::size_t points) {
    if (points < 2) {
        throw Error(Errc::InvalidInput, "kde_grid: need at least 2 grid points");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    DensityGrid g;
    g.bandwidth = silverman_bandwidth(sorted);
    const double h = g.bandwidth;
    const double lo = sorted.front() - 3.0 * h;
    const double hi = sorted.back() + 3.0 * h;
    const double dx = (hi - lo) / static_cast<double>(points - 1);
    const double norm = 1.0 / (static_cast<double>(sorted.size()) * h *
                               std::sqrt(2.0 * std::numbers::pi));
    // contributions beyond 8 bandwidths are below 1e-14 and skipped
    const double cutoff = 8.0 * h;
    g.x.resize(points);
    g.density.resize(points);
    for (std::size_t p = 0; p < points; ++p) {
        const double x = lo + dx * static_cast<double>(p);
        auto first = std::lower_bound(sorted.begin(), sorted.end(), x - cutoff);
        auto last = std::upper_bound(first, sorted.end(), x + cutoff);
        double acc = 0.0;
        for (auto it = first; it != last; ++it) {
            const double u = (x - *it) / h;
            acc += std::exp(-0.5 * u * u);
        }
        g.x[p] = x;
        g.density[p] = acc * norm;
    }
    return g;
}

Summary summarize_interval(std::span<const double> samples) {
    if (samples.empty()) {
        throw Error(Errc::InvalidInput, "summarize: empty sample");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    Summary s;
    s.mean = mean(samples);
    s.median = quantile_sorted(sorted, 0.5);
    s.ci90 = {quantile_sorted(sorted, 0.05), quantile_sorted(sorted, 0.95)};
    return s;
}

Summary summarize(std::span<const double> samples) {
    auto s = summarize_interval(samples);
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    if (*lo == *hi) {
        s.mode = *lo;
        return s;
    }
    const auto grid = kde_grid(samples);
    const auto top = std::max_element(grid.density.begin(), grid.density.end());
    s.mode = grid.x[static_cast<std::size_t>(top - grid.density.begin())];
    s.bandwidth = grid.bandwidth;
    return s;
}

} // namespace tvbma
