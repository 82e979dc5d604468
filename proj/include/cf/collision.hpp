#pragma once

/*
 * Two-body (d = 2) collision analysis: the scalar invariant C2 that survives
 * the collision, the limiting Lax matrix as the gap closes, and the gauge
 * reduction to a canonical rational form with a single simple pole.
 *
 * The canonical form depends only on (beta_-, beta_+, M, C2); the collision
 * point x* enters the limit matrix only through the off-diagonal scale and is
 * removed by conjugation. Its (1,2) entry carries the sign that makes the
 * form actually conjugate to the limit matrix: trace and determinant both
 * match, so the characteristic polynomials agree identically.
 */

#include <cmath>
#include <vector>

#include "errors.hpp"
#include "lax.hpp"
#include "model.hpp"
#include "poly.hpp"
#include "real.hpp"

namespace cf {

/* One rational-function entry: num/den with den kept monic. */
struct RationalEntry {
    Poly num;
    Poly den = Poly::constant(1);

    Real eval(Real z) const { return num.eval(z) / den.eval(z); }
};

struct CollisionForm {
    Real beta_minus = 0;
    Real beta_plus = 0;
    Real M = 0;
    Real C2 = 0;
    Real pole_location = 0; /* -C2/M, the only (simple) pole */
    RationalEntry entries[2][2];

    Matrix2 eval(Real z) const {
        Matrix2 v;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) v(i, j) = entries[i][j].eval(z);
        return v;
    }
};

/*
 * C2 = m1 m2 (1 - e^{2 nu (x1 - x2)}) (beta_- - beta_+ e^{2 nu (x2 - x1)}),
 * the constant coefficient of Tr A(z) for d = 2.
 */
inline Real c2_invariant(const PeakonState& s, const ModelParams& p) {
    if (s.d() != 2) throw WrongDimension("c2_invariant: requires d = 2");
    const Real gap = s.x[1] - s.x[0];
    return s.m[0] * s.m[1] * (-std::expm1(-2 * p.nu * gap)) *
           (p.beta_minus - p.beta_plus * std::exp(2 * p.nu * gap));
}

/*
 * The z-polynomial matrix A tends to as the two peakons merge at x* with
 * total mass M and invariant C2:
 *
 *   [ b-(z^2 + zM + C2)          b+ M e^{-2 nu x*}(z + C2/M) ]
 *   [ -b- M e^{2 nu x*}(z + C2/M)   b+(z^2 - zM - C2)        ]
 *
 * Both off-diagonal entries vanish at z = -C2/M; det = b- b+ z^4.
 */
inline MatrixPoly2 collision_limit_A(const ModelParams& p, Real M, Real C2, Real x_star) {
    if (std::abs(M) <= 1e-12)
        throw ZeroTotalMass("collision_limit_A: total mass too small to normalize");
    const Real r = C2 / M;
    MatrixPoly2 A;
    A.var = Var::z;
    A.entry(0, 0) = p.beta_minus * Poly({C2, M, 1});
    A.entry(1, 1) = p.beta_plus * Poly({-C2, -M, 1});
    A.entry(0, 1) = p.beta_plus * M * std::exp(-2 * p.nu * x_star) * Poly({r, 1});
    A.entry(1, 0) = -p.beta_minus * M * std::exp(2 * p.nu * x_star) * Poly({r, 1});
    return A;
}

/*
 * The x*-independent canonical form after conjugating the limit matrix by
 * D = diag(1/(z + C2/M), z + C2/M) and a constant gauge:
 *
 *   [ b- z^2                b- M (z + C2/M)^2 z^2 ]
 *   [ 1/(z + C2/M)          b+ z^2 + zM + C2      ]
 *
 * Trace (b- + b+)z^2 + zM + C2 and determinant b- b+ z^4 equal those of the
 * limit matrix, as conjugation demands.
 */
inline CollisionForm canonical_form(const ModelParams& p, Real M, Real C2) {
    if (std::abs(M) <= 1e-12)
        throw ZeroTotalMass("canonical_form: total mass too small to normalize");
    if (std::abs(p.beta_minus) <= 1e-12)
        throw Error("canonical_form: beta_minus must be nonzero");
    const Real r = C2 / M;
    CollisionForm f;
    f.beta_minus = p.beta_minus;
    f.beta_plus = p.beta_plus;
    f.M = M;
    f.C2 = C2;
    f.pole_location = -r;
    f.entries[0][0].num = p.beta_minus * Poly({0, 0, 1});
    f.entries[0][1].num = p.beta_minus * M * (Poly({r, 1}) * Poly({r, 1}) * Poly({0, 0, 1}));
    f.entries[1][0].num = Poly::constant(1);
    f.entries[1][0].den = Poly({r, 1});
    f.entries[1][1].num = Poly({C2, M, p.beta_plus});
    return f;
}

}  // namespace cf
