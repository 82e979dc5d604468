#pragma once

/*
 * Isospectral matrix data for the peakon flow.
 *
 * T(lambda) = T_d ... T_1 with T_j = I + lambda m_j X_j, where X_j is the
 * rank-1 traceless matrix [[1, e^{-2nu x_j}], [-e^{2nu x_j}, -1]]; det T = 1.
 *
 * A(z) = z^d T(lambda = 1/z) beta with beta = diag(beta_-, beta_+). Its
 * closed form is
 *
 *   A(z) = beta z^d + sum_{j=1}^{d} z^{d-j} sum_{|I|=j} f_I m_I K_I,
 *
 * summing over increasing index sets I = {i_1 < ... < i_j}, with
 * m_I = prod m_i, f_I = prod_k (1 - e^{-2nu(x_{i_{k+1}} - x_{i_k})}) and
 *
 *   K_I = [[beta_-,                  beta_+ e^{-2nu x_{i_1}}          ],
 *          [-beta_- e^{2nu x_{i_j}}, -beta_+ e^{2nu(x_{i_j} - x_{i_1})}]].
 *
 * The degree-1 partner B(z) is the polynomial part of A(z)/z^{d-1}; the flow
 * with the default drift C = (beta_- + beta_+) M / 2 satisfies
 * dA/dt = [B, A]. For any other drift the commutator identity picks up a
 * non-commuting sigma_3 correction, so residual checks pin the default C.
 */

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "poly.hpp"
#include "real.hpp"

namespace cf {

enum class Var { lambda, z };

struct Matrix2 {
    std::array<std::array<Real, 2>, 2> a{};

    Real& operator()(int i, int j) { return a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
    Real operator()(int i, int j) const { return a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }

    Real trace() const { return a[0][0] + a[1][1]; }
    Real det() const { return a[0][0] * a[1][1] - a[0][1] * a[1][0]; }

    friend Matrix2 operator*(const Matrix2& l, const Matrix2& r) {
        Matrix2 p;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                p(i, j) = l(i, 0) * r(0, j) + l(i, 1) * r(1, j);
        return p;
    }

    friend Matrix2 operator-(const Matrix2& l, const Matrix2& r) {
        Matrix2 s;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) s(i, j) = l(i, j) - r(i, j);
        return s;
    }

    Real max_abs() const {
        Real m = 0;
        for (const auto& row : a)
            for (Real v : row) m = std::max(m, std::abs(v));
        return m;
    }
};

struct MatrixPoly2 {
    std::array<std::array<Poly, 2>, 2> e{};
    Var var = Var::z;

    Poly& entry(int i, int j) { return e[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
    const Poly& entry(int i, int j) const { return e[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }

    Poly trace() const { return entry(0, 0) + entry(1, 1); }
    Poly det() const { return entry(0, 0) * entry(1, 1) - entry(0, 1) * entry(1, 0); }

    int max_degree() const {
        int deg = Poly::kZeroDegree;
        for (const auto& row : e)
            for (const Poly& p : row) deg = std::max(deg, p.degree());
        return deg;
    }

    Real max_abs_coeff() const {
        Real m = 0;
        for (const auto& row : e)
            for (const Poly& p : row) m = std::max(m, cf::max_abs_coeff(p));
        return m;
    }

    Matrix2 eval(Real v) const {
        Matrix2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r(i, j) = entry(i, j).eval(v);
        return r;
    }

    static MatrixPoly2 identity(Var var) {
        MatrixPoly2 m;
        m.var = var;
        m.entry(0, 0) = Poly::constant(1);
        m.entry(1, 1) = Poly::constant(1);
        return m;
    }

    friend MatrixPoly2 operator*(const MatrixPoly2& l, const MatrixPoly2& r) {
        MatrixPoly2 p;
        p.var = l.var;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                p.entry(i, j) = l.entry(i, 0) * r.entry(0, j) + l.entry(i, 1) * r.entry(1, j);
        return p;
    }

    friend MatrixPoly2 operator-(const MatrixPoly2& l, const MatrixPoly2& r) {
        MatrixPoly2 s;
        s.var = l.var;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) s.entry(i, j) = l.entry(i, j) - r.entry(i, j);
        return s;
    }
};

inline Real max_entry_diff(const MatrixPoly2& a, const MatrixPoly2& b) {
    Real m = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m = std::max(m, max_coeff_diff(a.entry(i, j), b.entry(i, j)));
    return m;
}

/* T(lambda) = T_d ... T_1, each factor I + lambda m_j X_j. */
inline MatrixPoly2 build_T(const PeakonState& s, const ModelParams& p) {
    MatrixPoly2 T = MatrixPoly2::identity(Var::lambda);
    for (std::size_t j = 0; j < s.x.size(); ++j) {
        const Real ep = std::exp(2 * p.nu * s.x[j]);
        const Real em = std::exp(-2 * p.nu * s.x[j]);
        MatrixPoly2 Tj;
        Tj.var = Var::lambda;
        Tj.entry(0, 0) = Poly({1, s.m[j]});
        Tj.entry(0, 1) = Poly::monomial(s.m[j] * em, 1);
        Tj.entry(1, 0) = Poly::monomial(-s.m[j] * ep, 1);
        Tj.entry(1, 1) = Poly({1, -s.m[j]});
        T = Tj * T; /* factors accumulate on the left */
    }
    return T;
}

enum class AMethod { product, closed_form };

namespace detail {

/* z^d t(1/z) for a single entry: coefficient reversal within degree d. */
inline Poly reverse_to_degree(const Poly& t, int d) {
    if (t.degree() > d)
        throw DegreeOverflow("build_A: entry degree exceeds particle count after substitution");
    std::vector<Real> r(static_cast<std::size_t>(d) + 1, Real(0));
    for (int k = 0; k <= t.degree(); ++k)
        r[static_cast<std::size_t>(d - k)] = t[static_cast<std::size_t>(k)];
    return Poly(std::move(r));
}

}  // namespace detail

/*
 * A(z), by substituting lambda = 1/z into T and clearing z^d (product), or
 * by the structured multi-index sum (closed_form). The two agree entry-wise;
 * keeping both gives each an independent check on the other.
 */
inline MatrixPoly2 build_A(const PeakonState& s, const ModelParams& p,
                           AMethod method = AMethod::product) {
    const int d = s.d();
    MatrixPoly2 A;
    A.var = Var::z;
    if (method == AMethod::product) {
        const MatrixPoly2 T = build_T(s, p);
        const Real beta[2] = {p.beta_minus, p.beta_plus};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                A.entry(i, j) = beta[j] * detail::reverse_to_degree(T.entry(i, j), d);
        return A;
    }

    /* closed form: iterate over increasing index sets I as bit masks */
    std::vector<Real> acc[2][2];
    for (auto& row : acc)
        for (auto& v : row) v.assign(static_cast<std::size_t>(d) + 1, Real(0));
    acc[0][0][static_cast<std::size_t>(d)] = p.beta_minus;
    acc[1][1][static_cast<std::size_t>(d)] = p.beta_plus;

    for (unsigned mask = 1; mask < (1u << d); ++mask) {
        Real m_I = 1, f_I = 1;
        int first = -1, last = -1, count = 0, prev = -1;
        for (int j = 0; j < d; ++j) {
            if (!(mask & (1u << j))) continue;
            m_I *= s.m[static_cast<std::size_t>(j)];
            if (first < 0) first = j;
            if (prev >= 0)
                f_I *= -std::expm1(-2 * p.nu * (s.x[static_cast<std::size_t>(j)] - s.x[static_cast<std::size_t>(prev)]));
            prev = j;
            ++count;
        }
        last = prev;
        const Real w = f_I * m_I;
        const Real x_first = s.x[static_cast<std::size_t>(first)];
        const Real x_last = s.x[static_cast<std::size_t>(last)];
        const std::size_t pow = static_cast<std::size_t>(d - count);
        acc[0][0][pow] += w * p.beta_minus;
        acc[0][1][pow] += w * p.beta_plus * std::exp(-2 * p.nu * x_first);
        acc[1][0][pow] += -w * p.beta_minus * std::exp(2 * p.nu * x_last);
        acc[1][1][pow] += -w * p.beta_plus * std::exp(2 * p.nu * (x_last - x_first));
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) A.entry(i, j) = Poly(std::move(acc[i][j]));
    return A;
}

/*
 * Degree-1 partner: polynomial part of A(z)/z^{d-1}, which works out to
 * diag(beta_- z, beta_+ z) + [[beta_- M, beta_+ M_-], [-beta_- M_+, -beta_+ M]].
 * When the drift equals its default value the symmetric gauge (diagonal
 * z/2, -z/2) is returned instead; the two differ by a multiple of the
 * identity, which drops out of every commutator.
 */
inline MatrixPoly2 build_B(const MatrixPoly2& A, const ModelParams& p, const PeakonState& s) {
    const int d = s.d();
    if (A.var != Var::z || d < 1) throw Error("build_B: need A(z) of a valid state");
    MatrixPoly2 B;
    B.var = Var::z;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            B.entry(i, j) = A.entry(i, j).shifted_down(static_cast<std::size_t>(d - 1));
    const Real M = s.total_mass();
    if (p.has_default_C(M)) {
        /* subtract ((beta_-+beta_+)/2 z + M/2) I */
        const Poly shift({M / 2, (p.beta_minus + p.beta_plus) / 2});
        B.entry(0, 0) = B.entry(0, 0) - shift;
        B.entry(1, 1) = B.entry(1, 1) - shift;
    }
    return B;
}

/*
 * Max-norm defect of dA/dt = [B, A] over the given sample points, with dA/dt
 * taken by a central difference of build_A along the flow direction. Each
 * sample's defect is scaled by that sample's matrix magnitude, so the number
 * is comparable across states of very different size.
 */
inline Real lax_residual(const PeakonState& s, const ModelParams& p,
                         const std::vector<Real>& z_samples, Real h = 1e-5) {
    const Field f = vector_field(s, p);
    const MatrixPoly2 A = build_A(s, p);
    const MatrixPoly2 Ap = build_A(advanced(s, f, h), p);
    const MatrixPoly2 Am = build_A(advanced(s, f, -h), p);
    const MatrixPoly2 B = build_B(A, p, s);
    Real worst = 0;
    for (Real z : z_samples) {
        const Matrix2 a = A.eval(z);
        const Matrix2 b = B.eval(z);
        const Matrix2 ap = Ap.eval(z);
        const Matrix2 am = Am.eval(z);
        Matrix2 defect;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const Real adot = (ap(i, j) - am(i, j)) / (2 * h);
                Real comm = 0;
                for (int k = 0; k < 2; ++k) comm += b(i, k) * a(k, j) - a(i, k) * b(k, j);
                defect(i, j) = adot - comm;
            }
        worst = std::max(worst, defect.max_abs() / std::max(Real(1), a.max_abs()));
    }
    return worst;
}

}  // namespace cf
