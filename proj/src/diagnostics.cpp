#include "tvbma/diagnostics.hpp"

#include "tvbma/error.hpp"
#include "tvbma/random.hpp"
#include "tvbma/time_series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tvbma {

namespace {

// Average ranks (ties share the mean rank).
std::vector<double> ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) {
            ++j;
        }
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t m = i; m <= j; ++m) {
            r[order[m]] = avg;
        }
        i = j + 1;
    }
    return r;
}

double percentile(std::vector<double>& v, double p) {
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

} // namespace

std::optional<double> correlation(std::span<const double> x, std::span<const double> y,
                                  Correlation kind) {
    if (x.size() != y.size()) {
        throw Error(Errc::InvalidInput, "correlation: inputs differ in length");
    }
    if (x.size() < 2) {
        return std::nullopt;
    }
    if (kind == Correlation::Spearman) {
        const auto rx = ranks(x);
        const auto ry = ranks(y);
        return correlation(rx, ry, Correlation::Pearson);
    }
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) {
        return std::nullopt;
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

IndependenceReport independence_diagnostic(std::span<const std::vector<double>> trend_weight_rows,
                                           std::span<const Ar1Params> summaries,
                                           Correlation kind, double threshold) {
    const std::size_t k = summaries.size();
    if (k < 4) {
        throw Error(Errc::InsufficientEnsemble, "independence diagnostic needs at least 4 models");
    }
    std::vector<double> sigma(k), rho(k);
    for (std::size_t i = 0; i < k; ++i) {
        sigma[i] = summaries[i].sigma;
        rho[i] = summaries[i].rho;
    }
    IndependenceReport report;
    report.threshold = threshold;
    for (const auto& row : trend_weight_rows) {
        if (row.size() != k) {
            throw Error(Errc::InvalidInput, "independence diagnostic: weight row length != k");
        }
        IndependenceRow r{correlation(row, sigma, kind), correlation(row, rho, kind)};
        for (const auto& c : {r.r_sigma, r.r_rho}) {
            if (c && std::abs(*c) >= threshold) {
                report.flagged = true;
            }
        }
        report.rows.push_back(r);
    }
    return report;
}

SpectrumEnvelope spectrum_envelope_check(std::span<const double> anomalies,
                                         std::size_t n_realizations, std::uint64_t seed,
                                         double lower_q, double upper_q) {
    if (anomalies.size() < 16) {
        throw Error(Errc::InvalidInput, "spectrum check: need at least 16 anomalies");
    }
    if (n_realizations < 2 || !(lower_q >= 0.0 && lower_q < upper_q && upper_q <= 1.0)) {
        throw Error(Errc::InvalidConfiguration,
                    "spectrum check: need >= 2 realizations and 0 <= lower_q < upper_q <= 1");
    }
    SpectrumEnvelope out;
    out.fitted = ar1_mle(anomalies);
    const auto observed = periodogram(anomalies);
    out.frequencies = observed.frequencies;
    out.observed = observed.power;

    const std::size_t bins = out.frequencies.size();
    std::vector<std::vector<double>> by_frequency(bins, std::vector<double>(n_realizations));
    auto rng = make_rng(seed);
    for (std::size_t r = 0; r < n_realizations; ++r) {
        const auto sim = ar1_simulate(out.fitted, anomalies.size(), rng);
        const auto p = periodogram(sim);
        for (std::size_t b = 0; b < bins; ++b) {
            by_frequency[b][r] = p.power[b];
        }
    }
    out.lower.resize(bins);
    out.upper.resize(bins);
    std::size_t inside = 0;
    for (std::size_t b = 0; b < bins; ++b) {
        out.lower[b] = percentile(by_frequency[b], lower_q);
        out.upper[b] = percentile(by_frequency[b], upper_q);
        if (out.observed[b] >= out.lower[b] && out.observed[b] <= out.upper[b]) {
            ++inside;
        }
    }
    out.fraction_inside = static_cast<double>(inside) / static_cast<double>(bins);
    return out;
}

} // namespace tvbma
