#include "tvbma/ar1.hpp"

#include "tvbma/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

namespace tvbma {

namespace {

constexpr double kRhoCap = 0.999;

double innovation_ss(const LagMoments& m, double rho) noexcept {
    // sum (a_t - rho a_{t-1})^2, clamped against cancellation
    const double q = m.s0 - 2.0 * rho * m.s1 + rho * rho * m.s2;
    if (std::isnan(q)) {
        return std::numeric_limits<double>::infinity();  // overflowed moments
    }
    return q > 0.0 ? q : 0.0;
}

} // namespace

void Ar1Params::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw Error(Errc::InvalidParameter, "AR(1): sigma must be positive, got " +
                                                std::to_string(sigma));
    }
    if (!(std::abs(rho) < 1.0)) {
        throw Error(Errc::InvalidParameter, "AR(1): |rho| must be < 1, got " + std::to_string(rho));
    }
}

LagMoments lag_moments(std::span<const double> a) {
    LagMoments m;
    if (a.size() < 2) {
        return m;
    }
    m.terms = a.size() - 1;
    for (std::size_t t = 1; t < a.size(); ++t) {
        m.s0 += a[t] * a[t];
        m.s1 += a[t] * a[t - 1];
        m.s2 += a[t - 1] * a[t - 1];
    }
    return m;
}

double ar1_loglik(const LagMoments& m, double sigma, double rho) noexcept {
    if (!(sigma > 0.0)) {
        return -std::numeric_limits<double>::infinity();
    }
    const double terms = static_cast<double>(m.terms);
    const double q = innovation_ss(m, rho);
    return -0.5 * terms * std::log(2.0 * std::numbers::pi) - terms * std::log(sigma) -
           q / (2.0 * sigma * sigma);
}

double ar1_conditional_loglik(std::span<const double> anomalies, const Ar1Params& params) {
    if (anomalies.size() < 2) {
        throw Error(Errc::InvalidInput, "ar1_conditional_loglik: need at least 2 values");
    }
    if (!(params.sigma > 0.0) || !std::isfinite(params.sigma) || !std::isfinite(params.rho)) {
        throw Error(Errc::InvalidParameter, "ar1_conditional_loglik: sigma must be positive");
    }
    return ar1_loglik(lag_moments(anomalies), params.sigma, params.rho);
}

Ar1Params ar1_mle(std::span<const double> anomalies) {
    if (anomalies.size() < 4) {
        throw Error(Errc::InvalidInput, "ar1_mle: need at least 4 values");
    }
    const auto m = lag_moments(anomalies);
    const auto [lo, hi] = std::minmax_element(anomalies.begin(), anomalies.end());
    if (*lo == *hi || !(m.s2 > 0.0) || !(m.s0 > 0.0)) {
        throw Error(Errc::DegenerateSeries, "ar1_mle: series has zero variance");
    }
    Ar1Params p;
    p.rho = m.s1 / m.s2;
    if (p.rho > kRhoCap) {
        p.rho = kRhoCap;
    } else if (p.rho < -kRhoCap) {
        p.rho = -kRhoCap;
    }
    p.sigma = std::sqrt(innovation_ss(m, p.rho) / static_cast<double>(m.terms));
    if (!(p.sigma > 0.0)) {
        throw Error(Errc::DegenerateSeries, "ar1_mle: innovations vanish (exact AR(1) recursion)");
    }
    return p;
}

std::vector<double> ar1_simulate(const Ar1Params& params, std::size_t n, Rng& rng) {
    params.validate();
    if (n == 0) {
        throw Error(Errc::InvalidInput, "ar1_simulate: n must be positive");
    }
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> x(n);
    x[0] = params.sigma / std::sqrt(1.0 - params.rho * params.rho) * z(rng);
    for (std::size_t t = 1; t < n; ++t) {
        x[t] = params.rho * x[t - 1] + params.sigma * z(rng);
    }
    return x;
}

std::vector<double> ar1_simulate(const Ar1Params& params, std::size_t n, std::uint64_t seed) {
    auto rng = make_rng(seed);
    return ar1_simulate(params, n, rng);
}

Periodogram periodogram(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 8) {
        throw Error(Errc::InvalidInput, "periodogram: need at least 8 values");
    }
    double m = 0.0;
    for (double v : series) {
        m += v;
    }
    m /= static_cast<double>(n);

    const std::size_t half = n / 2;
    const double nn = static_cast<double>(n);
    std::vector<double> cos_table(n), sin_table(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(j) / nn;
        cos_table[j] = std::cos(phase);
        sin_table[j] = std::sin(phase);
    }
    Periodogram out;
    out.frequencies.resize(half);
    out.power.resize(half);
    for (std::size_t k = 1; k <= half; ++k) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const std::size_t j = (k * t) % n;
            const double d = series[t] - m;
            re += d * cos_table[j];
            im -= d * sin_table[j];
        }
        // folding: every ordinate except Nyquist stands for +-k
        const double fold = (2 * k == n) ? 1.0 : 2.0;
        out.frequencies[k - 1] = static_cast<double>(k) / nn;
        out.power[k - 1] = fold * (re * re + im * im) / (nn * nn);
    }
    return out;
}

double ar1_spectral_density(const Ar1Params& params, double frequency, std::size_t n) {
    const double w = 2.0 * std::numbers::pi * frequency;
    const double s = params.sigma * params.sigma /
                     (1.0 - 2.0 * params.rho * std::cos(w) + params.rho * params.rho);
    const double fold = (std::abs(frequency - 0.5) < 1e-12) ? 1.0 : 2.0;
    return fold * s / static_cast<double>(n);
}

} // namespace tvbma
