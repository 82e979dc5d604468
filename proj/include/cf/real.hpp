#pragma once

/*
 * Scalar type for the whole library. Defaults to double; define CF_REAL to
 * rebuild with another floating type (e.g. a multiprecision number that
 * models the same operations). All tolerances in the test suite assume
 * double precision.
 */

#include <cmath>
#include <limits>

namespace cf {

#ifdef CF_REAL
using Real = CF_REAL;
#else
using Real = double;
#endif

inline constexpr Real kEps = std::numeric_limits<Real>::epsilon();

/* Relative trim threshold used when canonicalizing polynomial coefficients. */
inline constexpr Real kTrimRel = 1e-13;

inline Real rel_diff(Real a, Real b) {
    Real scale = std::max(std::abs(a), std::abs(b));
    return scale > 0 ? std::abs(a - b) / scale : Real(0);
}

}  // namespace cf
