#include "tvbma/decompose.hpp"

#include "tvbma/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tvbma {

namespace {

double median_in_place(std::vector<double>& v) {
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (n % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

std::vector<double> step_index(std::size_t n) {
    std::vector<double> x(n);
    std::iota(x.begin(), x.end(), 0.0);
    return x;
}

// Weighted local linear fit at xs over x[left..right] (Cleveland's lowest).
bool local_fit(std::span<const double> x, std::span<const double> y, double xs, std::size_t left,
               std::size_t right, bool use_robustness, std::span<const double> robustness,
               std::vector<double>& w, double& fitted) {
    const std::size_t n = x.size();
    const double range = x[n - 1] - x[0];
    const double h = std::max(xs - x[left], x[right] - xs);
    const double h9 = 0.999 * h;
    const double h1 = 0.001 * h;

    double total = 0.0;
    std::size_t j = left;
    for (; j < n; ++j) {
        w[j] = 0.0;
        const double r = std::abs(x[j] - xs);
        if (r <= h9) {
            if (r <= h1) {
                w[j] = 1.0;
            } else {
                const double q = r / h;
                const double c = 1.0 - q * q * q;
                w[j] = c * c * c;
            }
            if (use_robustness) {
                w[j] *= robustness[j];
            }
            total += w[j];
        } else if (x[j] > xs) {
            break;
        }
    }
    const std::size_t last = j - 1;
    if (total <= 0.0) {
        return false;
    }
    for (j = left; j <= last; ++j) {
        w[j] /= total;
    }
    if (h > 0.0) {
        double a = 0.0;
        for (j = left; j <= last; ++j) {
            a += w[j] * x[j];
        }
        double b = xs - a;
        double c = 0.0;
        for (j = left; j <= last; ++j) {
            c += w[j] * (x[j] - a) * (x[j] - a);
        }
        if (std::sqrt(c) > 0.001 * range) {
            b /= c;
            for (j = left; j <= last; ++j) {
                w[j] *= b * (x[j] - a) + 1.0;
            }
        }
    }
    fitted = 0.0;
    for (j = left; j <= last; ++j) {
        fitted += w[j] * y[j];
    }
    return true;
}

} // namespace

std::vector<double> Decomposition::reconstruct() const {
    std::vector<double> out(trend.size());
    const double scale = mode == AnomalyMode::Relative ? series_mean : 1.0;
    for (std::size_t i = 0; i < trend.size(); ++i) {
        out[i] = trend[i] + scale * anomalies[i];
    }
    return out;
}

LinearFit theil_sen(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size()) {
        throw Error(Errc::InvalidInput, "theil_sen: x and y differ in length");
    }
    if (n < 2) {
        throw Error(Errc::InvalidInput, "theil_sen: need at least 2 points");
    }
    std::vector<double> slopes;
    slopes.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (x[j] != x[i]) {
                slopes.push_back((y[j] - y[i]) / (x[j] - x[i]));
            }
        }
    }
    if (slopes.empty()) {
        throw Error(Errc::InvalidInput, "theil_sen: all x values are equal");
    }
    LinearFit fit;
    fit.slope = median_in_place(slopes);
    std::vector<double> intercepts(n);
    for (std::size_t i = 0; i < n; ++i) {
        intercepts[i] = y[i] - fit.slope * x[i];
    }
    fit.intercept = median_in_place(intercepts);
    return fit;
}

LinearFit theil_sen(const TimeSeries& series) {
    const auto x = step_index(series.size());
    return theil_sen(x, series.values());
}

std::vector<double> lowess(std::span<const double> x, std::span<const double> y, double span,
                           int iterations) {
    const std::size_t n = x.size();
    if (n != y.size()) {
        throw Error(Errc::InvalidInput, "lowess: x and y differ in length");
    }
    if (n < 5) {
        throw Error(Errc::InvalidInput, "lowess: need at least 5 points");
    }
    if (!(span > 0.0 && span <= 1.0) || iterations < 0) {
        throw Error(Errc::InvalidConfiguration, "lowess: span must be in (0, 1], iterations >= 0");
    }
    if (span * static_cast<double>(n) < 2.0) {
        throw Error(Errc::InvalidConfiguration,
                    "lowess: span " + std::to_string(span) + " leaves fewer than 2 neighbours");
    }
    if (!std::is_sorted(x.begin(), x.end())) {
        throw Error(Errc::InvalidInput, "lowess: x must be sorted");
    }

    const auto ns = std::clamp<std::size_t>(
        static_cast<std::size_t>(span * static_cast<double>(n) + 1e-7), 2, n);

    const auto [y_lo, y_hi] = std::minmax_element(y.begin(), y.end());
    const double y_range = std::max(*y_hi - *y_lo, std::max(std::abs(*y_lo), std::abs(*y_hi)));

    std::vector<double> fitted(n), robustness(n, 1.0), residuals(n), w(n);
    for (int iter = 0; iter <= iterations; ++iter) {
        std::size_t left = 0;
        std::size_t right = ns - 1;
        for (std::size_t i = 0; i < n; ++i) {
            while (right < n - 1 && x[i] - x[left] > x[right + 1] - x[i]) {
                ++left;
                ++right;
            }
            if (!local_fit(x, y, x[i], left, right, iter > 0, robustness, w, fitted[i])) {
                fitted[i] = y[i];
            }
        }
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            residuals[i] = y[i] - fitted[i];
            scale += std::abs(residuals[i]);
        }
        scale /= static_cast<double>(n);
        if (iter == iterations) {
            break;
        }
        std::vector<double> abs_res(n);
        std::transform(residuals.begin(), residuals.end(), abs_res.begin(),
                       [](double r) { return std::abs(r); });
        const double cmad = 6.0 * median_in_place(abs_res);
        // also stop when the residuals are rounding noise of an exact fit
        if (cmad < 1e-7 * scale || cmad <= 1e-12 * y_range) {
            break;
        }
        const double c9 = 0.999 * cmad;
        const double c1 = 0.001 * cmad;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = std::abs(residuals[i]);
            if (r <= c1) {
                robustness[i] = 1.0;
            } else if (r <= c9) {
                const double u = r / cmad;
                robustness[i] = (1.0 - u * u) * (1.0 - u * u);
            } else {
                robustness[i] = 0.0;
            }
        }
    }
    return fitted;
}

std::vector<double> lowess(const TimeSeries& series, const SmootherSpec& spec) {
    if (spec.kind != Smoother::Lowess) {
        throw Error(Errc::InvalidConfiguration, "lowess: smoother spec is not lowess");
    }
    if (spec.iterations < 1) {
        throw Error(Errc::InvalidConfiguration, "lowess: iterations must be positive");
    }
    const auto x = step_index(series.size());
    return lowess(x, series.values(), spec.span, spec.iterations);
}

std::vector<double> fit_trend(const TimeSeries& series, const SmootherSpec& spec) {
    if (spec.kind == Smoother::Lowess) {
        return lowess(series, spec);
    }
    const auto fit = theil_sen(series);
    std::vector<double> trend(series.size());
    for (std::size_t i = 0; i < trend.size(); ++i) {
        trend[i] = fit.intercept + fit.slope * static_cast<double>(i);
    }
    return trend;
}

Decomposition decompose(const TimeSeries& series, const SmootherSpec& spec, AnomalyMode mode) {
    Decomposition d;
    d.mode = mode;
    d.trend = fit_trend(series, spec);
    const auto values = series.values();
    d.anomalies.resize(values.size());
    if (mode == AnomalyMode::Relative) {
        d.series_mean = mean(values);
        const double sd = sample_sd(values);
        if (!(std::abs(d.series_mean) > 1e-8 * sd) || d.series_mean == 0.0) {
            throw Error(Errc::DegenerateNormalization,
                        "decompose: series mean too close to zero for relative anomalies");
        }
        for (std::size_t i = 0; i < values.size(); ++i) {
            d.anomalies[i] = (values[i] - d.trend[i]) / d.series_mean;
        }
    } else {
        for (std::size_t i = 0; i < values.size(); ++i) {
            d.anomalies[i] = values[i] - d.trend[i];
        }
    }
    return d;
}

} // namespace tvbma
