#include "tvbma/time_series.hpp"

#include "tvbma/error.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace tvbma {

TimeSeries::TimeSeries(std::vector<std::int64_t> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.size() != values_.size()) {
        throw Error(Errc::InvalidInput, "time series: " + std::to_string(times_.size()) +
                                            " times but " + std::to_string(values_.size()) +
                                            " values");
    }
    if (values_.size() < 3) {
        throw Error(Errc::InvalidInput, "time series: need at least 3 points");
    }
    const auto step = times_[1] - times_[0];
    if (step <= 0) {
        throw Error(Errc::InvalidInput, "time series: times must be strictly increasing");
    }
    for (std::size_t i = 1; i < times_.size(); ++i) {
        if (times_[i] - times_[i - 1] != step) {
            throw Error(Errc::InvalidInput,
                        "time series: irregular step at time " + std::to_string(times_[i]));
        }
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw Error(Errc::InvalidInput,
                        "time series: missing value at time " + std::to_string(times_[i]));
        }
    }
}

TimeSeries TimeSeries::from_values(std::int64_t first, std::vector<double> values) {
    std::vector<std::int64_t> times(values.size());
    std::iota(times.begin(), times.end(), first);
    return TimeSeries(std::move(times), std::move(values));
}

TimeSeries TimeSeries::slice(const Period& p) const {
    if (!period().contains(p)) {
        throw Error(Errc::InvalidInput, "time series: period [" + std::to_string(p.first) + ", " +
                                            std::to_string(p.last) + "] outside the series");
    }
    std::vector<std::int64_t> t;
    std::vector<double> v;
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (p.contains(times_[i])) {
            t.push_back(times_[i]);
            v.push_back(values_[i]);
        }
    }
    return TimeSeries(std::move(t), std::move(v));
}

double mean(std::span<const double> v) {
    if (v.empty()) {
        return 0.0;
    }
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
    if (v.size() < 2) {
        return 0.0;
    }
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) {
        ss += (x - m) * (x - m);
    }
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

} // namespace tvbma
