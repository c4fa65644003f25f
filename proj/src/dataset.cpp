#include "tvbma/dataset.hpp"

#include "tvbma/error.hpp"

#include <string>

namespace tvbma {

namespace {

std::string period_text(const Period& p) {
    return "[" + std::to_string(p.first) + ", " + std::to_string(p.last) + "]";
}

} // namespace

void EnsembleDataset::validate() const {
    if (models.empty()) {
        throw Error(Errc::InvalidInput, "dataset " + name + ": no models");
    }
    if (calibration.last < calibration.first || projection.last < projection.first) {
        throw Error(Errc::InvalidInput, "dataset " + name + ": empty period");
    }
    if (!calibration.contains(projection_reference)) {
        throw Error(Errc::InvalidInput, "dataset " + name + ": projection reference period " +
                                            period_text(projection_reference) +
                                            " is not inside the calibration period " +
                                            period_text(calibration));
    }
    if (calibration.overlaps(projection)) {
        throw Error(Errc::InvalidInput,
                    "dataset " + name + ": projection period overlaps the calibration period");
    }
    const auto& first = models.front();
    for (const auto& m : models) {
        if (m.calibration.size() == 0 || m.calibration.period() != calibration) {
            throw Error(Errc::AxisMismatch, "dataset " + name + ": model " + m.id +
                                                " calibration series does not span " +
                                                period_text(calibration));
        }
        if (m.projection.size() == 0 || m.projection.period() != projection) {
            throw Error(Errc::AxisMismatch, "dataset " + name + ": model " + m.id +
                                                " projection series does not span " +
                                                period_text(projection));
        }
        if (!m.calibration.same_axis(first.calibration)) {
            throw Error(Errc::AxisMismatch, "dataset " + name + ": calibration axes of models " +
                                                first.id + " and " + m.id + " differ");
        }
        if (!m.projection.same_axis(first.projection)) {
            throw Error(Errc::AxisMismatch, "dataset " + name + ": projection axes of models " +
                                                first.id + " and " + m.id + " differ");
        }
    }
    if (observations && !observations->same_axis(first.calibration)) {
        throw Error(Errc::AxisMismatch, "dataset " + name + ": observation axis differs from model " +
                                            first.id + " calibration axis");
    }
    if (observations_projection && !observations_projection->same_axis(first.projection)) {
        throw Error(Errc::AxisMismatch, "dataset " + name +
                                            ": projection-period observation axis differs from "
                                            "model " + first.id + " projection axis");
    }
}

} // namespace tvbma
