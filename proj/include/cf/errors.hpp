#pragma once

/*
 * Error taxonomy. Every failure the library can signal is a distinct type
 * rooted at cf::Error, so callers (and tests) can catch precisely.
 */

#include <stdexcept>
#include <string>

namespace cf {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* series division: denominator has zero constant term */
struct ZeroConstantTerm : Error {
    using Error::Error;
};

/* series square root: radicand vanishes at the expansion point */
struct BranchPointAtOrigin : Error {
    using Error::Error;
};

/* lambda -> z substitution produced a genuinely negative power */
struct DegreeOverflow : Error {
    using Error::Error;
};

/* spectral curve has a multiple root (genus formula inapplicable) */
struct DegenerateCurve : Error {
    using Error::Error;
};

/* Tr A(0) = 0: z = 0 is a branch point, no Weyl expansion there */
struct BranchAtOrigin : Error {
    using Error::Error;
};

/* A12(0) = 0: the state sits at or near a collision stratum */
struct ZeroDenominator : Error {
    using Error::Error;
};

/* collision normal forms need nonzero total mass */
struct ZeroTotalMass : Error {
    using Error::Error;
};

/* operation defined only for a specific particle count */
struct WrongDimension : Error {
    using Error::Error;
};

/* fewer moments than the requested Hankel block needs */
struct InsufficientMoments : Error {
    using Error::Error;
};

/* a required Hankel minor vanishes within tolerance */
struct SingularHankel : Error {
    using Error::Error;
};

/* reconstruction produced a non-positive string interval */
struct NegativeLength : Error {
    using Error::Error;
};

/* string position outside the open interval (-1/2nu, 1/2nu) */
struct OutOfRange : Error {
    using Error::Error;
};

/* malformed configuration or data file; message carries line/field info */
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace cf
