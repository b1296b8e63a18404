#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nearunit {

/// Base class for every domain error raised by the library.
///
/// `code()` is a stable identifier (e.g. "AlphaAtOrAboveOne") that the CLI
/// reports verbatim; `module()` names the component that raised it.
class Error : public std::runtime_error {
public:
    Error(std::string code, std::string module, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)), module_(std::move(module)) {}

    [[nodiscard]] const std::string& code() const noexcept { return code_; }
    [[nodiscard]] const std::string& module() const noexcept { return module_; }

private:
    std::string code_;
    std::string module_;
};

#define NEARUNIT_DEFINE_ERROR(Name, Module)                                                 \
    class Name : public Error {                                                             \
    public:                                                                                 \
        explicit Name(const std::string& message) : Error(#Name, Module, message) {}        \
    };

NEARUNIT_DEFINE_ERROR(InvalidInput, "core")

// affine_models
NEARUNIT_DEFINE_ERROR(RegimeInfeasible, "affine_models")
NEARUNIT_DEFINE_ERROR(NotStationary, "affine_models")
NEARUNIT_DEFINE_ERROR(ConfigError, "affine_models")

// cir
NEARUNIT_DEFINE_ERROR(SingularDesign, "cir")

// estimation
NEARUNIT_DEFINE_ERROR(DegenerateDesign, "estimation")
NEARUNIT_DEFINE_ERROR(ZeroDenominator, "estimation")
NEARUNIT_DEFINE_ERROR(NoConvergence, "estimation")
NEARUNIT_DEFINE_ERROR(BoundaryHit, "estimation")
NEARUNIT_DEFINE_ERROR(InsufficientData, "estimation")

// inference
NEARUNIT_DEFINE_ERROR(AlphaAtOrAboveOne, "inference")
NEARUNIT_DEFINE_ERROR(SingularOmega, "inference")

// dataio
NEARUNIT_DEFINE_ERROR(ParseError, "dataio")
NEARUNIT_DEFINE_ERROR(NegativeValue, "dataio")
NEARUNIT_DEFINE_ERROR(MissingValue, "dataio")
NEARUNIT_DEFINE_ERROR(WindowTooShort, "dataio")

#undef NEARUNIT_DEFINE_ERROR

}  // namespace nearunit
