#pragma once

#include <stdexcept>
#include <string>

namespace tvbma {

/// Failure categories. Input-side errors map to CLI exit code 2,
/// numerical ones to exit code 3.
enum class Errc {
    InvalidInput,
    InvalidConfiguration,
    InvalidParameter,
    InsufficientEnsemble,
    DegenerateNormalization,
    DegenerateSeries,
    NumericalDegeneracy,
    DegenerateCombination,
    Parse,
    AxisMismatch,
    Io,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

    bool is_numerical() const noexcept {
        return code_ == Errc::DegenerateNormalization || code_ == Errc::DegenerateSeries ||
               code_ == Errc::NumericalDegeneracy || code_ == Errc::DegenerateCombination;
    }

private:
    Errc code_;
};

} // namespace tvbma
