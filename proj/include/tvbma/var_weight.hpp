#pragma once

#include "tvbma/ar1.hpp"
#include "tvbma/weights.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tvbma {

/// AR(1) MLE summaries of each model's calibration anomalies.
struct VariabilitySummaries {
    std::vector<std::string> model_ids;
    std::vector<Ar1Params> stats;

    std::size_t size() const noexcept { return stats.size(); }
};

/// (eps_sigma, eps_rho) error sample.
struct ParamOffset {
    double sigma = 0.0;
    double rho = 0.0;
    bool operator==(const ParamOffset&) const = default;
};

/// k next-closest differences plus one (0, 0) sample, with per-dimension
/// jitter standard deviations of (max - min) / 5.
struct VarErrorPool {
    std::vector<ParamOffset> base_samples;
    ParamOffset jitter_sd;
};

struct ClippingRule {
    double rho_cap = 0.999;
    double sigma_floor_factor = 0.01;
};

struct VarWeightOptions {
    double f = 1.0;
    ClippingRule clip;
    std::size_t n_samples = 10000;
    std::uint64_t seed = 1;
};

/// ar1_mle of every model; a degenerate model throws with its id in the message.
VariabilitySummaries summarize_variability(std::span<const std::vector<double>> anomalies,
                                           std::span<const std::string> model_ids = {});

/// For each i, the j != i whose parameters give model i's anomalies the
/// highest conditional likelihood (ties to the lower index).
std::vector<std::size_t> next_closest_var(const VariabilitySummaries& summaries,
                                          std::span<const std::vector<double>> anomalies);

VarErrorPool build_var_error_pool(const VariabilitySummaries& summaries,
                                  std::span<const std::size_t> assignments);

/// Sampled real-system parameters for variability submodel `model`:
///   theta = summary_model + f * (base[u] + jitter), jitter ~ N(0, diag(jitter_sd^2)),
/// with rho clipped to +-rho_cap and sigma floored at sigma_floor_factor * min(sigma).
///
/// One generator seeded from `opts.seed` yields, per draw: the position u
/// (uniform over base samples sorted lexicographically), then the sigma and
/// rho standard normals. The draws do not depend on `model`.
std::vector<Ar1Params> sample_variability_params(const VariabilitySummaries& summaries,
                                                 const VarErrorPool& pool, std::size_t model,
                                                 const VarWeightOptions& opts);

/// Log marginal likelihood of the observed anomalies under each submodel.
std::vector<double> var_log_evidence(const VariabilitySummaries& summaries,
                                     const VarErrorPool& pool,
                                     std::span<const double> observed_anomalies,
                                     const VarWeightOptions& opts);

/// Equal-prior posterior variability-submodel probabilities.
WeightVector var_weights(const VariabilitySummaries& summaries, const VarErrorPool& pool,
                         std::span<const double> observed_anomalies, const VarWeightOptions& opts);

} // namespace tvbma
