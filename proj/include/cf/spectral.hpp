#pragma once

/*
 * Spectral data of A(z): the hyperelliptic curve w_shift^2 = P(z) with
 *
 *     P = (Tr A)^2 / 4 - det(beta) z^{2d},
 *
 * its branch points and genus, the trace coefficients (the conserved
 * quantities of the flow), and the generalized Weyl function expanded at
 * z = 0.
 *
 * Note the normalization: the leading coefficient of P is
 * (beta_- - beta_+)^2 / 4 = 1/4, not 1. That factor is forced by the
 * shifted-eigenvalue identity (eig(A(z)) - Tr A(z)/2)^2 = P(z), which the
 * tests use as an oracle, so it is kept exact here.
 *
 * Sheet convention: z = 0 is off the branch locus whenever
 * C_d = Tr A(0) != 0, and the expansion uses the branch of w with
 * w(0) = C_d / 2 (upper sheet for C_d > 0, lower for C_d < 0). With that
 * choice W - A21/A11 = O(z^{2d}), which is the inversion workhorse.
 */

#include <cmath>
#include <complex>
#include <vector>

#include "errors.hpp"
#include "lax.hpp"
#include "poly.hpp"
#include "real.hpp"
#include "roots.hpp"

namespace cf {

struct SpectralData {
    Poly trace_poly;                     /* Tr A(z) */
    Real det_beta = 0;                   /* beta_- * beta_+ */
    Poly P;                              /* (Tr A)^2/4 - det_beta z^{2d} */
    std::vector<Complex> branch_points;  /* 2d roots of P, with multiplicity */
    int genus = 0;                       /* d - 1 for simple branch points */
    bool perfect_square = false;         /* det_beta = 0: P = (Tr A/2)^2, genus drops to 0 */
};

enum class Sheet { upper, lower };

struct WeylSeries {
    PowerSeries series; /* Taylor coefficients of W at z = 0 */
    Sheet sheet = Sheet::upper;
    int order = 0;
};

/* All coefficients of Tr A(z); index i is the coefficient of z^i. */
inline std::vector<Real> trace_invariants(const MatrixPoly2& A) {
    const Poly tr = A.trace();
    std::vector<Real> c(static_cast<std::size_t>(A.max_degree()) + 1, Real(0));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = tr[i];
    return c;
}

/*
 * Curve data for A(z). Simple branch points give genus d - 1; a vanishing
 * det(beta) makes P a perfect square (a recognized degeneration, reported
 * through the flag with genus 0); any other root collision within the
 * clustering tolerance is an error, because the genus count is meaningless
 * there.
 */
inline SpectralData curve_data(const MatrixPoly2& A, const ModelParams& p) {
    SpectralData sd;
    sd.trace_poly = A.trace();
    sd.det_beta = p.det_beta();
    const int d = A.max_degree();
    sd.P = Real(0.25) * (sd.trace_poly * sd.trace_poly) -
           Poly::monomial(sd.det_beta, static_cast<std::size_t>(2 * d));

    if (sd.det_beta == Real(0)) {
        sd.perfect_square = true;
        sd.genus = 0;
        const std::vector<Complex> tr_roots = poly_roots(sd.trace_poly);
        for (const Complex& r : tr_roots) {
            sd.branch_points.push_back(r);
            sd.branch_points.push_back(r);
        }
        return sd;
    }

    sd.branch_points = poly_roots(sd.P);
    /* collisions are judged against the spread of the whole root set, so a
       uniformly tiny spectrum (tiny masses shrink every root) is not misread
       as degenerate */
    Real scale = 0;
    for (const Complex& r : sd.branch_points) scale = std::max(scale, std::abs(r));
    for (std::size_t i = 0; i < sd.branch_points.size(); ++i)
        for (std::size_t j = i + 1; j < sd.branch_points.size(); ++j) {
            const Real sep = std::abs(sd.branch_points[i] - sd.branch_points[j]);
            if (sep <= 1e-8 * scale)
                throw DegenerateCurve("curve_data: branch points collide within clustering tolerance");
        }
    sd.genus = d - 1;
    return sd;
}

/* Series of A21/A11, the diagonal Pade approximant of the Weyl function. */
inline PowerSeries pade_ratio(const MatrixPoly2& A, int order) {
    const PowerSeries num = PowerSeries::from_poly(A.entry(1, 0), order);
    const PowerSeries den = PowerSeries::from_poly(A.entry(0, 0), order);
    if (den[0] == Real(0))
        throw ZeroDenominator("pade_ratio: A11(0) = 0, state at a collision stratum");
    return series_div(num, den);
}

/*
 * Generalized Weyl function at z = 0:
 *
 *     W = (w_shift - (A11 - A22)/2) / A12,
 *
 * with w_shift the branch of sqrt(P) selected by the sign of C_d = Tr A(0)
 * (forced_sign overrides the rule; the wrong sheet is the negative control
 * for the Pade property). When beta_+ = 0 the column A12, A22 vanishes
 * identically and the ratio degenerates to W = A21/A11, which is returned
 * directly in that case.
 */
inline WeylSeries weyl_series(const MatrixPoly2& A, const SpectralData& sd, int order,
                              int forced_sign = 0) {
    const Real cd = sd.trace_poly[0];
    const Real tr_scale = std::max(Real(1), max_abs_coeff(sd.trace_poly));
    if (std::abs(cd) <= 1e-12 * tr_scale)
        throw BranchAtOrigin("weyl_series: Tr A(0) = 0, z = 0 is a branch point");

    const int sign = forced_sign != 0 ? forced_sign : (cd > 0 ? 1 : -1);
    const Sheet sheet = sign > 0 ? Sheet::upper : Sheet::lower;

    if (A.entry(0, 1).is_zero()) {
        /* perfect-square degeneration: both Weyl formulas collapse to A21/A11 */
        return WeylSeries{pade_ratio(A, order), sheet, order};
    }

    const Real a12_0 = A.entry(0, 1)[0];
    if (std::abs(a12_0) <= 1e-10 * A.max_abs_coeff())
        throw ZeroDenominator("weyl_series: A12(0) vanishes, state at or near a collision stratum");

    const PowerSeries w = series_sqrt(PowerSeries::from_poly(sd.P, order), sign);
    const PowerSeries half_sigma =
        Real(0.5) * PowerSeries::from_poly(A.entry(0, 0) - A.entry(1, 1), order);
    const PowerSeries num = w - half_sigma;
    const PowerSeries den = PowerSeries::from_poly(A.entry(0, 1), order);
    return WeylSeries{series_div(num, den), sheet, order};
}

}  // namespace cf
