#pragma once

#include <stdexcept>
#include <string>

namespace ergodelab {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature ran out of panel budget before meeting the tolerance.
struct NonConvergent : Error {
    using Error::Error;
};

// An endpoint hint is outside the range the substitution machinery supports
// (singularity exponent must be < 1, tail decay must be > 0).
struct InvalidHint : Error {
    using Error::Error;
};

// A measure failed its finiteness check at construction.
struct AdmissibilityViolation : Error {
    using Error::Error;
};

// An operator application left the space the model can represent.
struct DomainViolation : Error {
    using Error::Error;
};

// An operation's stated precondition does not hold for the given inputs.
struct PreconditionFailed : Error {
    using Error::Error;
};

// A classifier could not reach a verdict and the caller demanded one.
struct Inconclusive : Error {
    using Error::Error;
};

} // namespace ergodelab
