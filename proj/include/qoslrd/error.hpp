#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qoslrd {

/// Error conditions raised by the library. Each carries the name of the
/// module that raised it so callers (the CLI in particular) can report a
/// module-qualified code such as `models.InvalidD`.
enum class Errc {
    EmptyInput,
    ParseError,
    NonPositiveValue,
    IrregularGrid,
    SeriesTooShort,
    LagTooLarge,
    ZeroVariance,
    SingularRegression,
    InvalidD,
    InvalidSpec,
    InvalidLevel,
    NoAdmissibleModel,
    DegenerateSampleSize,
    ConfigTooLargeForSeries,
    ConfigMismatch,
    LengthMismatch,
    ZeroActual,
    ZeroBaseline,
    NonEmbeddableCovariance,
};

[[nodiscard]] std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(std::string_view module, Errc code, const std::string& message)
        : std::runtime_error(message), module_(module), code_(code) {}

    [[nodiscard]] std::string_view module() const noexcept { return module_; }
    [[nodiscard]] Errc code() const noexcept { return code_; }

    /// "module.Code", e.g. "lrd.SeriesTooShort".
    [[nodiscard]] std::string qualified_code() const {
        return std::string(module_) + "." + std::string(to_string(code_));
    }

private:
    std::string_view module_;
    Errc code_;
};

}  // namespace qoslrd
