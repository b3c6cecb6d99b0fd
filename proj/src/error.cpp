#include "qoslrd/error.hpp"

namespace qoslrd {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::EmptyInput: return "EmptyInput";
        case Errc::ParseError: return "ParseError";
        case Errc::NonPositiveValue: return "NonPositiveValue";
        case Errc::IrregularGrid: return "IrregularGrid";
        case Errc::SeriesTooShort: return "SeriesTooShort";
        case Errc::LagTooLarge: return "LagTooLarge";
        case Errc::ZeroVariance: return "ZeroVariance";
        case Errc::SingularRegression: return "SingularRegression";
        case Errc::InvalidD: return "InvalidD";
        case Errc::InvalidSpec: return "InvalidSpec";
        case Errc::InvalidLevel: return "InvalidLevel";
        case Errc::NoAdmissibleModel: return "NoAdmissibleModel";
        case Errc::DegenerateSampleSize: return "DegenerateSampleSize";
        case Errc::ConfigTooLargeForSeries: return "ConfigTooLargeForSeries";
        case Errc::ConfigMismatch: return "ConfigMismatch";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::ZeroActual: return "ZeroActual";
        case Errc::ZeroBaseline: return "ZeroBaseline";
        case Errc::NonEmbeddableCovariance: return "NonEmbeddableCovariance";
    }
    return "Unknown";
}

}  // namespace qoslrd
