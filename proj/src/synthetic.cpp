#include "tvbma/synthetic.hpp"

#include "tvbma/error.hpp"
#include "tvbma/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>

namespace tvbma {

namespace {

bool ordered(const Interval& i) { return i.hi >= i.lo; }

double draw(const Interval& i, Rng& rng) {
    if (i.hi == i.lo) {
        return i.lo;
    }
    return std::uniform_real_distribution<double>(i.lo, i.hi)(rng);
}

std::vector<std::int64_t> axis(const Period& p) {
    std::vector<std::int64_t> t(static_cast<std::size_t>(p.last - p.first + 1));
    std::iota(t.begin(), t.end(), p.first);
    return t;
}

// Position in [-1/2, 1/2] across the period.
std::vector<double> unit_positions(const Period& p) {
    const auto n = static_cast<std::size_t>(p.last - p.first + 1);
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) - 0.5 : 0.0;
    }
    return u;
}

std::string model_id(std::size_t j) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "m%02zu", j + 1);
    return buf;
}

} // namespace

void SyntheticEnsembleSpec::validate() const {
    if (k < 3) {
        throw Error(Errc::InvalidConfiguration, "synthetic ensemble: k must be >= 3");
    }
    if (!(coupling >= -1.0 && coupling <= 1.0)) {
        throw Error(Errc::InvalidConfiguration, "synthetic ensemble: coupling must be in [-1, 1]");
    }
    if (calibration.last - calibration.first < 4 || projection.last - projection.first < 4 ||
        !calibration.contains(projection_reference) || calibration.overlaps(projection)) {
        throw Error(Errc::InvalidConfiguration,
                    "synthetic ensemble: periods need >= 5 points, reference inside calibration, "
                    "projection disjoint from calibration");
    }
    if (!ordered(level) || !ordered(slope) || !ordered(curvature) || !ordered(future_slope) ||
        !ordered(sigma) || !ordered(rho)) {
        throw Error(Errc::InvalidConfiguration, "synthetic ensemble: reversed range");
    }
    if (!(sigma.lo > 0.0) || !(rho.lo > -1.0 && rho.hi < 1.0)) {
        throw Error(Errc::InvalidConfiguration,
                    "synthetic ensemble: sigma must be positive and |rho| < 1");
    }
    if (clusters > k || !(cluster_spread >= 0.0) || !(delta_sd >= 0.0)) {
        throw Error(Errc::InvalidConfiguration, "synthetic ensemble: invalid cluster or delta spec");
    }
}

SyntheticEnsemble generate_synthetic_ensemble(const SyntheticEnsembleSpec& spec) {
    spec.validate();
    auto rng = make_rng(spec.seed);
    std::normal_distribution<double> z(0.0, 1.0);

    SyntheticEnsemble out;
    out.truth.resize(spec.k);

    // (sigma, rho): either independent uniform draws or jittered cluster
    // centres on a Latin-square lattice (distinct sigma and rho strata).
    if (spec.clusters == 0) {
        for (auto& t : out.truth) {
            t.params.sigma = draw(spec.sigma, rng);
            t.params.rho = draw(spec.rho, rng);
        }
    } else {
        const std::size_t c = spec.clusters;
        std::vector<std::size_t> rho_stratum(c);
        std::iota(rho_stratum.begin(), rho_stratum.end(), std::size_t{0});
        std::shuffle(rho_stratum.begin(), rho_stratum.end(), rng);
        for (std::size_t j = 0; j < spec.k; ++j) {
            auto& t = out.truth[j];
            t.cluster = j % c;
            const double sc = spec.sigma.lo + (static_cast<double>(t.cluster) + 0.5) /
                                                  static_cast<double>(c) * spec.sigma.width();
            const double rc = spec.rho.lo + (static_cast<double>(rho_stratum[t.cluster]) + 0.5) /
                                                static_cast<double>(c) * spec.rho.width();
            t.params.sigma = std::clamp(sc + spec.cluster_spread * spec.sigma.width() * z(rng),
                                        spec.sigma.lo, spec.sigma.hi);
            t.params.rho = std::clamp(rc + spec.cluster_spread * spec.rho.width() * z(rng),
                                      spec.rho.lo, spec.rho.hi);
        }
    }

    for (auto& t : out.truth) {
        t.level = draw(spec.level, rng);
        t.slope = draw(spec.slope, rng);
        t.curvature = draw(spec.curvature, rng);
        t.future_slope = draw(spec.future_slope, rng);
    }

    // future change: coupling * standardized sigma + independent remainder
    std::vector<double> sigmas(spec.k);
    for (std::size_t j = 0; j < spec.k; ++j) {
        sigmas[j] = out.truth[j].params.sigma;
    }
    const double sigma_mean = mean(sigmas);
    const double sigma_sd = sample_sd(sigmas);
    const double remainder = std::sqrt(std::max(0.0, 1.0 - spec.coupling * spec.coupling));
    for (std::size_t j = 0; j < spec.k; ++j) {
        const double score = sigma_sd > 0.0 ? (sigmas[j] - sigma_mean) / sigma_sd : 0.0;
        const double c = spec.coupling * score + remainder * z(rng);
        out.truth[j].delta = spec.delta_mean + spec.delta_sd * c;
    }

    const auto cal_u = unit_positions(spec.calibration);
    const auto proj_u = unit_positions(spec.projection);
    double u2_mean = 0.0;
    for (double u : cal_u) {
        u2_mean += u * u;
    }
    u2_mean /= static_cast<double>(cal_u.size());
    const auto cal_t = axis(spec.calibration);
    const auto proj_t = axis(spec.projection);

    auto& data = out.dataset;
    data.name = "synthetic";
    data.units = "1";
    data.variable = "synthetic";
    data.calibration = spec.calibration;
    data.projection_reference = spec.projection_reference;
    data.projection = spec.projection;

    for (std::size_t j = 0; j < spec.k; ++j) {
        auto& t = out.truth[j];
        t.calibration_trend.resize(cal_u.size());
        double ref_mean = 0.0;
        std::size_t ref_count = 0;
        for (std::size_t i = 0; i < cal_u.size(); ++i) {
            const double u = cal_u[i];
            t.calibration_trend[i] = t.level + t.slope * u + t.curvature * (u * u - u2_mean);
            if (spec.projection_reference.contains(cal_t[i])) {
                ref_mean += t.calibration_trend[i];
                ++ref_count;
            }
        }
        ref_mean /= static_cast<double>(ref_count);
        t.projection_trend.resize(proj_u.size());
        for (std::size_t i = 0; i < proj_u.size(); ++i) {
            t.projection_trend[i] = ref_mean + t.delta + t.future_slope * proj_u[i];
        }

        auto noise_rng = make_rng(derive_seed(spec.seed, j + 1));
        const auto cal_noise = ar1_simulate(t.params, cal_u.size(), noise_rng);
        const auto proj_noise = ar1_simulate(t.params, proj_u.size(), noise_rng);
        std::vector<double> cal(cal_u.size()), proj(proj_u.size());
        for (std::size_t i = 0; i < cal.size(); ++i) {
            cal[i] = t.calibration_trend[i] + cal_noise[i];
        }
        for (std::size_t i = 0; i < proj.size(); ++i) {
            proj[i] = t.projection_trend[i] + proj_noise[i];
        }
        data.models.push_back(
            {model_id(j), TimeSeries(cal_t, std::move(cal)), TimeSeries(proj_t, std::move(proj))});
    }
    return out;
}

TimeSeries synthetic_observation(const SyntheticEnsemble& ensemble, std::size_t model,
                                 std::uint64_t seed) {
    const auto& t = ensemble.truth.at(model);
    const auto noise = ar1_simulate(t.params, t.calibration_trend.size(), seed);
    std::vector<double> v(noise.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = t.calibration_trend[i] + noise[i];
    }
    const auto times = ensemble.dataset.models.at(model).calibration.times();
    return TimeSeries({times.begin(), times.end()}, std::move(v));
}

} // namespace tvbma
