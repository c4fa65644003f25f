#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tvbma {

/// log(sum(exp(v))), stable; -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> v) noexcept;

/// log(mean(exp(v))), accumulated in index order after shifting by the max.
double log_mean_exp(std::span<const double> v) noexcept;

/// Per-model probabilities summing to one. Kept alongside their normalized
/// logarithms so that products and exclusions of tiny weights stay exact.
class WeightVector {
public:
    WeightVector() = default;

    /// Normalizes unnormalized log weights. Throws NumericalDegeneracy when
    /// every entry is -inf (or the input is empty).
    static WeightVector from_log(std::vector<double> log_weights);

    /// Validates nonnegativity and sum-to-one (within 1e-9), then renormalizes.
    static WeightVector from_probabilities(std::span<const double> p);

    static WeightVector uniform(std::size_t k);

    std::size_t size() const noexcept { return p_.size(); }
    double operator[](std::size_t i) const noexcept { return p_[i]; }
    std::span<const double> values() const noexcept { return p_; }
    std::span<const double> log_values() const noexcept { return log_p_; }

    std::size_t argmax() const noexcept;

    /// Zero weight for model `i`, remaining weights renormalized (ratios kept).
    WeightVector excluding(std::size_t i) const;

private:
    std::vector<double> p_;
    std::vector<double> log_p_;
};

} // namespace tvbma
