#pragma once

#include "tvbma/weights.hpp"

namespace tvbma {

/// w_i proportional to trend_i * var_i, renormalized. Evaluated in log space,
/// so a zero in either input stays zero. Throws DegenerateCombination when
/// every product vanishes.
WeightVector combine_weights(const WeightVector& trend_w, const WeightVector& var_w);

/// The "trend" baseline: variability weights all equal, so the combined
/// weights are the trend weights.
WeightVector trend_only_weights(const WeightVector& trend_w);

} // namespace tvbma
