#pragma once

#include <stdexcept>
#include <string>

namespace sddtm {

/// Base class for all sddtm errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raster format errors.
struct MalformedHeader : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct NodataPresent : Error {
    using Error::Error;
};
struct NonFiniteValue : Error {
    using Error::Error;
};
struct IoFailure : Error {
    using Error::Error;
};

// Shape / algebra errors.
struct ShapeMismatch : Error {
    using Error::Error;
};
struct SingularSystem : Error {
    using Error::Error;
};

// Solver errors.
struct NotSquare : Error {
    using Error::Error;
};
struct FactorizationFailed : Error {
    using Error::Error;
};
struct NonFiniteEncountered : Error {
    using Error::Error;
};

// Synthetic scene errors.
struct FeatureOutOfBounds : Error {
    using Error::Error;
};
struct SpecParseError : Error {
    using Error::Error;
};

// Evaluation errors.
struct EmptyInput : Error {
    using Error::Error;
};

}  // namespace sddtm
