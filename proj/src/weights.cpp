#include "tvbma/weights.hpp"

#include "tvbma/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tvbma {

double log_sum_exp(std::span<const double> v) noexcept {
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    double top = kNegInf;
    for (double x : v) {
        top = std::max(top, x);
    }
    if (top == kNegInf) {
        return kNegInf;
    }
    double acc = 0.0;
    for (double x : v) {
        acc += std::exp(x - top);
    }
    return top + std::log(acc);
}

double log_mean_exp(std::span<const double> v) noexcept {
    return log_sum_exp(v) - std::log(static_cast<double>(v.size()));
}

WeightVector WeightVector::from_log(std::vector<double> log_weights) {
    double top = -std::numeric_limits<double>::infinity();
    bool nan = false;
    for (double x : log_weights) {
        top = std::max(top, x);
        nan = nan || std::isnan(x);
    }
    if (nan || !std::isfinite(top)) {
        throw Error(Errc::NumericalDegeneracy,
                    "weights: every model has zero likelihood (or an infinite one)");
    }
    // Shifted by the max so that equal inputs give exactly 1/k; summed in
    // sorted order so that the normalizer ignores the model order.
    WeightVector w;
    w.p_.resize(log_weights.size());
    for (std::size_t i = 0; i < log_weights.size(); ++i) {
        w.p_[i] = std::exp(log_weights[i] - top);
    }
    std::vector<double> terms = w.p_;
    std::sort(terms.begin(), terms.end());
    double acc = 0.0;
    for (double t : terms) {
        acc += t;
    }
    const double log_acc = std::log(acc);
    w.log_p_ = std::move(log_weights);
    for (std::size_t i = 0; i < w.p_.size(); ++i) {
        w.p_[i] /= acc;
        w.log_p_[i] = w.log_p_[i] - top - log_acc;
    }
    return w;
}

WeightVector WeightVector::from_probabilities(std::span<const double> p) {
    double sum = 0.0;
    for (double x : p) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw Error(Errc::InvalidInput, "weights: negative or non-finite probability");
        }
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw Error(Errc::InvalidInput, "weights: probabilities sum to " + std::to_string(sum));
    }
    std::vector<double> logs(p.size());
    std::transform(p.begin(), p.end(), logs.begin(), [](double x) { return std::log(x); });
    return from_log(std::move(logs));
}

WeightVector WeightVector::uniform(std::size_t k) {
    return from_log(std::vector<double>(k, 0.0));
}

std::size_t WeightVector::argmax() const noexcept {
    return static_cast<std::size_t>(std::max_element(log_p_.begin(), log_p_.end()) - log_p_.begin());
}

WeightVector WeightVector::excluding(std::size_t i) const {
    auto logs = log_p_;
    logs.at(i) = -std::numeric_limits<double>::infinity();
    return from_log(std::move(logs));
}

} // namespace tvbma
