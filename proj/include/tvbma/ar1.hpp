#pragma once

#include "tvbma/random.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tvbma {

/// Innovation standard deviation and lag-1 autocorrelation of a red-noise
/// process x_t = rho * x_{t-1} + w_t, w_t ~ N(0, sigma^2).
struct Ar1Params {
    double sigma = 1.0;
    double rho = 0.0;

    /// Throws InvalidParameter unless sigma > 0 and |rho| < 1.
    void validate() const;
    bool operator==(const Ar1Params&) const = default;
};

/// Lag moments sufficient for the conditional AR(1) likelihood of a_1..a_n:
///   s0 = sum_{t>=2} a_t^2, s1 = sum_{t>=2} a_t a_{t-1}, s2 = sum_{t>=2} a_{t-1}^2.
struct LagMoments {
    std::size_t terms = 0;  ///< n - 1
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
};

LagMoments lag_moments(std::span<const double> a);

/// Conditional log-likelihood from lag moments. Returns -inf for sigma <= 0.
/// Every likelihood in the library goes through this function.
double ar1_loglik(const LagMoments& m, double sigma, double rho) noexcept;

/// sum_{t=2..n} log N(a_t; rho * a_{t-1}, sigma^2), conditional on a_1.
double ar1_conditional_loglik(std::span<const double> anomalies, const Ar1Params& params);

/// Closed-form conditional MLE: rho is the least-squares lag-1 regression
/// coefficient, sigma the RMS of the implied innovations. rho is capped at
/// +-0.999 (sigma re-evaluated there) so the result is always stationary.
Ar1Params ar1_mle(std::span<const double> anomalies);

/// Stationary-start simulation; deterministic given the seed.
std::vector<double> ar1_simulate(const Ar1Params& params, std::size_t n, std::uint64_t seed);

/// Same, drawing from a caller-owned generator.
std::vector<double> ar1_simulate(const Ar1Params& params, std::size_t n, Rng& rng);

struct Periodogram {
    std::vector<double> frequencies;  ///< cycles per step, k/n for k = 1..floor(n/2)
    std::vector<double> power;
};

/// Periodogram of the mean-removed series, normalized so that the powers sum
/// to the population variance (1/n denominator).
Periodogram periodogram(std::span<const double> series);

/// Theoretical periodogram ordinate of an AR(1) process under the same
/// normalization, for a series of length n.
double ar1_spectral_density(const Ar1Params& params, double frequency, std::size_t n);

} // namespace tvbma
