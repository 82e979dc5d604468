#pragma once

/*
 * Inverse spectral reconstruction: from the Weyl-function series around
 * z = 0 back to positions and masses.
 *
 * Pipeline: the series of W is converted to the moment sequence of a
 * Stieltjes transform in the large-parameter variable, the moments feed the
 * classical Hankel-determinant formulas for the continued-fraction
 * coefficients, the coefficients alternate between string gap lengths and
 * string point masses, two closure relations (total length 1/nu, total mass
 * M) complete the string, and a change of variables maps the string back to
 * the real line.
 *
 * Moment convention, fixed by round-trip validation at d = 1: with
 * kappa = 2 nu / z the function G(kappa) = z (1 - W(z)) / 2 expands as
 * G = sum_i (-1)^i c_i / kappa^{i+1}, giving c_0 = nu (1 - W_0) and
 * c_i = (-1)^{i+1} (2 nu)^{i+1} W_i / 2 for i >= 1.
 *
 * The string occupies (-1/(2 nu), 1/(2 nu)); position y has gap lengths
 * l_d .. l_0 read in that order from the odd continued-fraction
 * coefficients, masses g_d .. g_2 from the even ones. Line positions are
 * x = artanh(2 nu y)/nu and line masses m = g (1 - (2 nu y)^2)/2.
 */

#include <algorithm>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "poly.hpp"
#include "real.hpp"
#include "spectral.hpp"

namespace cf {

struct MomentSequence {
    std::vector<Real> c;

    int count() const { return static_cast<int>(c.size()); }
};

/*
 * String-side data in continued-fraction order: lengths[k] = l_{d-k}
 * (so lengths runs l_d, l_{d-1}, .., l_0 and has d+1 entries) and
 * masses[k] = g_{d-k} (g_d down to g_1, d entries).
 */
struct StringData {
    std::vector<Real> lengths;
    std::vector<Real> masses;
    Real total_length = 0;

    int d() const { return static_cast<int>(masses.size()); }
};

namespace detail {

struct MinorValue {
    Real det;
    Real grow; /* largest intermediate magnitude seen during elimination */
};

/*
 * Fraction-free (Bareiss) elimination of the k x k Hankel block whose
 * top-left entry is c_ell, with row pivoting. Bareiss intermediates are
 * themselves minors of the block, so eps * grow bounds the roundoff in the
 * determinant; grow is the right scale for vanishing tests, where entry
 * norms (Hadamard bounds) overshoot badly once the minor chain decays.
 */
inline MinorValue eliminate_hankel(const MomentSequence& c, int ell, int k) {
    if (ell < 0 || k < 0) throw Error("hankel_minor: negative index");
    if (k == 0) return {1, 1};
    if (ell + 2 * k - 2 >= c.count())
        throw InsufficientMoments("hankel_minor: moment sequence too short");
    const std::size_t n = static_cast<std::size_t>(k);
    std::vector<std::vector<Real>> a(n, std::vector<Real>(n));
    Real grow = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            a[i][j] = c.c[static_cast<std::size_t>(ell) + i + j];
            grow = std::max(grow, std::abs(a[i][j]));
        }

    Real sign = 1, prev = 1;
    for (std::size_t r = 0; r + 1 < n; ++r) {
        std::size_t piv = r;
        for (std::size_t i = r + 1; i < n; ++i)
            if (std::abs(a[i][r]) > std::abs(a[piv][r])) piv = i;
        if (a[piv][r] == Real(0)) return {0, grow};
        if (piv != r) {
            std::swap(a[piv], a[r]);
            sign = -sign;
        }
        for (std::size_t i = r + 1; i < n; ++i) {
            for (std::size_t j = r + 1; j < n; ++j) {
                a[i][j] = (a[i][j] * a[r][r] - a[i][r] * a[r][j]) / prev;
                grow = std::max(grow, std::abs(a[i][j]));
            }
            a[i][r] = 0;
        }
        prev = a[r][r];
    }
    return {sign * a[n - 1][n - 1], grow};
}

}  // namespace detail

/*
 * Determinant of the k x k Hankel block whose top-left entry is c_ell.
 * k = 0 returns 1 by convention.
 */
inline Real hankel_minor(const MomentSequence& c, int ell, int k) {
    return detail::eliminate_hankel(c, ell, k).det;
}

namespace detail {

/*
 * Same minor, rejected when it cannot be told apart from elimination
 * roundoff: below 1e-10 of the intermediate scale the determinant has lost
 * most of its digits, which marks non-generic moment data (collision
 * stratum, overstated dimension) rather than an unlucky draw.
 */
inline Real checked_minor(const MomentSequence& c, int ell, int k) {
    const MinorValue v = eliminate_hankel(c, ell, k);
    if (k > 0 && std::abs(v.det) <= 1e-10 * v.grow)
        throw SingularHankel("stieltjes_coefficients: Hankel minor vanishes");
    return v.det;
}

}  // namespace detail

/*
 * First n coefficients a_1..a_n of the continued fraction
 * 1/(a_1 kappa + 1/(a_2 + 1/(a_3 kappa + ...))) matching the moment
 * expansion sum (-1)^i c_i / kappa^{i+1}:
 *
 *   a_{2k}   = (D0_k)^2 / (D1_k D1_{k-1})
 *   a_{2k+1} = (D1_k)^2 / (D0_k D0_{k+1})
 *
 * where Dl_k is the k x k Hankel minor starting at c_l.
 */
inline std::vector<Real> stieltjes_coefficients(const MomentSequence& c, int n) {
    if (n < 1) throw Error("stieltjes_coefficients: need n >= 1");
    if (n > c.count())
        throw InsufficientMoments("stieltjes_coefficients: coefficient a_n needs n moments");
    std::vector<Real> a(static_cast<std::size_t>(n));
    for (int idx = 1; idx <= n; ++idx) {
        Real value;
        if (idx % 2 == 0) {
            const int k = idx / 2;
            const Real d0k = detail::checked_minor(c, 0, k);
            const Real d1k = detail::checked_minor(c, 1, k);
            const Real d1km = detail::checked_minor(c, 1, k - 1);
            value = d0k * d0k / (d1k * d1km);
        } else {
            const int k = (idx - 1) / 2;
            const Real d1k = detail::checked_minor(c, 1, k);
            const Real d0k = detail::checked_minor(c, 0, k);
            const Real d0kp = detail::checked_minor(c, 0, k + 1);
            value = d1k * d1k / (d0k * d0kp);
        }
        a[static_cast<std::size_t>(idx - 1)] = value;
    }
    return a;
}

/* Moment sequence of G(kappa) = z (1 - W(z)) / 2 from the series of W. */
inline MomentSequence moments_from_weyl(const WeylSeries& W, const ModelParams& p) {
    MomentSequence ms;
    const std::vector<Real>& w = W.series.coeffs();
    ms.c.resize(w.size());
    ms.c[0] = p.nu * (1 - w[0]);
    Real pw = 2 * p.nu; /* (2 nu)^i */
    for (std::size_t i = 1; i < w.size(); ++i) {
        pw *= 2 * p.nu;
        const Real sgn = (i % 2 == 0) ? Real(-1) : Real(1);
        ms.c[i] = sgn * pw * w[i] / 2;
    }
    return ms;
}

/*
 * Reconstruct the string from a Weyl series of order >= 2d. The last length
 * and the last mass come from the closures sum l_j = 1/nu and sum m_j = M.
 */
inline StringData reconstruct_string(const WeylSeries& W, int d, Real M, const ModelParams& p) {
    if (d < 1) throw WrongDimension("reconstruct_string: empty spectrum");
    if (W.order < 2 * d)
        throw InsufficientMoments("reconstruct_string: Weyl series order must be >= 2d");

    const MomentSequence ms = moments_from_weyl(W, p);
    const std::vector<Real> a = stieltjes_coefficients(ms, 2 * d - 1);

    StringData s;
    s.lengths.resize(static_cast<std::size_t>(d) + 1);
    s.masses.resize(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) s.lengths[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(2 * k)];
    for (int k = 0; k + 1 < d; ++k) s.masses[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(2 * k + 1)];

    Real used = 0;
    for (int k = 0; k < d; ++k) used += s.lengths[static_cast<std::size_t>(k)];
    s.lengths[static_cast<std::size_t>(d)] = 1 / p.nu - used; /* l_0 closure */
    for (Real l : s.lengths)
        if (!(l > 0)) throw NegativeLength("reconstruct_string: nonpositive string gap");

    /*
     * Mass closure: convert the already-known g_d..g_2 to line masses, take
     * m_1 = M - (m_2 + .. + m_d), and convert back at the leftmost string
     * position y_1.
     */
    std::vector<Real> y(static_cast<std::size_t>(d)); /* y[j] is position of mass g_{j+1}, left to right */
    Real pos = -1 / (2 * p.nu);
    for (int j = 0; j < d; ++j) {
        pos += s.lengths[static_cast<std::size_t>(d - j)]; /* l_j sits left of mass j+1 */
        y[static_cast<std::size_t>(j)] = pos;
    }
    Real mass_used = 0;
    for (int j = 1; j < d; ++j) { /* line index j+1, string mass g_{j+1} = masses[d-1-j] */
        const Real w = 2 * p.nu * y[static_cast<std::size_t>(j)];
        mass_used += s.masses[static_cast<std::size_t>(d - 1 - j)] * (1 - w * w) / 2;
    }
    const Real m1 = M - mass_used;
    const Real w1 = 2 * p.nu * y[0];
    if (std::abs(w1) >= 1) throw OutOfRange("reconstruct_string: string position outside interval");
    s.masses[static_cast<std::size_t>(d - 1)] = 2 * m1 / (1 - w1 * w1); /* g_1 */

    s.total_length = 0;
    for (Real l : s.lengths) s.total_length += l;
    return s;
}

/* Dimension and total mass read off the trace polynomial of the spectrum. */
inline StringData reconstruct_string(const WeylSeries& W, const SpectralData& sd,
                                     const ModelParams& p) {
    const int d = sd.trace_poly.degree();
    if (d < 1) throw WrongDimension("reconstruct_string: empty spectrum");
    return reconstruct_string(W, d, sd.trace_poly[static_cast<std::size_t>(d - 1)], p);
}

/*
 * Map string data to line data: x = artanh(2 nu y)/nu, m = g (1 - (2 nu y)^2)/2
 * with y the string positions accumulated left to right from -1/(2 nu).
 */
inline PeakonState string_to_peakons(const StringData& s, const ModelParams& p) {
    const int d = s.d();
    if (static_cast<int>(s.lengths.size()) != d + 1)
        throw WrongDimension("string_to_peakons: need d+1 lengths for d masses");
    std::vector<Real> x(static_cast<std::size_t>(d));
    std::vector<Real> m(static_cast<std::size_t>(d));
    Real y = -1 / (2 * p.nu);
    for (int j = 0; j < d; ++j) {
        y += s.lengths[static_cast<std::size_t>(d - j)]; /* l_j precedes mass j+1 */
        const Real w = 2 * p.nu * y;
        if (std::abs(w) >= 1)
            throw OutOfRange("string_to_peakons: string position outside the open interval");
        x[static_cast<std::size_t>(j)] = std::atanh(w) / p.nu;
        m[static_cast<std::size_t>(j)] = s.masses[static_cast<std::size_t>(d - 1 - j)] * (1 - w * w) / 2;
    }
    return PeakonState::make(0, x, m);
}

}  // namespace cf
