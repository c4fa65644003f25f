#include "tvbma/combine.hpp"

#include "tvbma/error.hpp"

#include <cmath>
#include <vector>

namespace tvbma {

WeightVector combine_weights(const WeightVector& trend_w, const WeightVector& var_w) {
    if (trend_w.size() != var_w.size() || trend_w.size() == 0) {
        throw Error(Errc::InvalidInput, "combine_weights: weight vectors differ in length");
    }
    const auto lt = trend_w.log_values();
    const auto lv = var_w.log_values();
    std::vector<double> logs(lt.size());
    bool any = false;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        logs[i] = lt[i] + lv[i];
        any = any || std::isfinite(logs[i]);
    }
    if (!any) {
        throw Error(Errc::DegenerateCombination,
                    "combine_weights: trend and variability weights share no support");
    }
    return WeightVector::from_log(std::move(logs));
}

WeightVector trend_only_weights(const WeightVector& trend_w) {
    return trend_w;
}

} // namespace tvbma
