#pragma once

#include "tvbma/ar1.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace tvbma {

enum class Correlation { Pearson, Spearman };

/// Empty when either input has zero variance.
std::optional<double> correlation(std::span<const double> x, std::span<const double> y,
                                  Correlation kind = Correlation::Pearson);

struct IndependenceRow {
    std::optional<double> r_sigma;
    std::optional<double> r_rho;
};

struct IndependenceReport {
    std::vector<IndependenceRow> rows;
    double threshold = 0.5;
    bool flagged = false;  ///< some defined |r| >= threshold
};

/// Per pseudo-truth row, correlation of the trend weights across models with
/// the models' sigma and rho summaries.
IndependenceReport independence_diagnostic(std::span<const std::vector<double>> trend_weight_rows,
                                           std::span<const Ar1Params> summaries,
                                           Correlation kind = Correlation::Pearson,
                                           double threshold = 0.5);

struct SpectrumEnvelope {
    Ar1Params fitted;
    std::vector<double> frequencies;
    std::vector<double> observed;
    std::vector<double> lower;
    std::vector<double> upper;
    double fraction_inside = 0.0;
};

/// Fits AR(1) to the anomalies, simulates n_realizations series of the same
/// length, and reports the share of observed periodogram ordinates inside the
/// per-frequency [lower_q, upper_q] percentile envelope (closed interval).
SpectrumEnvelope spectrum_envelope_check(std::span<const double> anomalies,
                                         std::size_t n_realizations = 1000,
                                         std::uint64_t seed = 1, double lower_q = 0.05,
                                         double upper_q = 0.95);

} // namespace tvbma
