#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tvbma {

/// Closed integer interval of time stamps, e.g. years [1880, 2004].
struct Period {
    std::int64_t first = 0;
    std::int64_t last = 0;

    bool contains(std::int64_t t) const noexcept { return t >= first && t <= last; }
    bool contains(const Period& other) const noexcept {
        return other.first >= first && other.last <= last;
    }
    bool overlaps(const Period& other) const noexcept {
        return other.first <= last && first <= other.last;
    }
    bool operator==(const Period&) const = default;
};

/// Closed real interval.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const noexcept { return hi - lo; }
    bool contains(double v) const noexcept { return v >= lo && v <= hi; }
    bool operator==(const Interval&) const = default;
};

/// Regularly spaced scalar series. Construction validates that the time axis
/// is strictly increasing with a constant step, that values are finite, and
/// that there are at least three points.
class TimeSeries {
public:
    TimeSeries() = default;
    TimeSeries(std::vector<std::int64_t> times, std::vector<double> values);

    /// Unit-step axis starting at `first`.
    static TimeSeries from_values(std::int64_t first, std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const std::int64_t> times() const noexcept { return times_; }
    std::span<const double> values() const noexcept { return values_; }
    std::int64_t step() const noexcept { return times_.size() > 1 ? times_[1] - times_[0] : 1; }
    Period period() const noexcept { return {times_.front(), times_.back()}; }

    /// Sub-series restricted to `p`; throws if `p` is not inside the axis.
    TimeSeries slice(const Period& p) const;

    bool same_axis(const TimeSeries& other) const noexcept { return times_ == other.times_; }

private:
    std::vector<std::int64_t> times_;
    std::vector<double> values_;
};

double mean(std::span<const double> v);
/// Sample standard deviation (n - 1 denominator).
double sample_sd(std::span<const double> v);

} // namespace tvbma
