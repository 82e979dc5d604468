#pragma once

/*
 * Peakon model: parameters, dynamical state, the two-exponential kernel
 *
 *     G(x) = (beta_-/2nu) e^{-2nu|x|} + (beta_+/2nu) e^{2nu|x|},
 *
 * the induced velocity field u(x) = sum_j m_j G(x - x_j) - C, and the
 * equations of motion
 *
 *     xdot_j = u(x_j),    mdot_j = -m_j <u_x>(x_j),
 *
 * where <u_x> takes the mean of one-sided slopes at a peak. Since G is even,
 * a peakon's own kink contributes zero to <u_x> at its position, so only the
 * smooth part from the other peakons enters.
 */

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "real.hpp"

namespace cf {

struct ModelParams {
    Real nu = 1;         /* inverse length, > 0 */
    Real beta_plus = 0;  /* growing-exponential weight */
    Real beta_minus = 1; /* decaying-exponential weight; beta_- - beta_+ = 1 */
    Real C = 0;          /* drift subtracted from the velocity field */
    int d = 1;           /* particle count */

    /*
     * Default factory: beta_- = beta_+ + 1, and C = (beta_- + beta_+)/(2nu) * M
     * = G(0) M for the total mass M of the paired initial state. That drift
     * choice is the one for which the degree-1 polynomial Lax partner is exact
     * (any other C leaves an O(1) commutator defect whenever nu != 1); pass
     * c_override to study other drifts (C = 0 is the classical choice).
     */
    static ModelParams make(Real nu, Real beta_plus, const std::vector<Real>& masses,
                            std::optional<Real> c_override = std::nullopt,
                            std::optional<Real> beta_minus_override = std::nullopt) {
        if (!(nu > 0)) throw Error("ModelParams: nu must be positive");
        if (masses.empty()) throw Error("ModelParams: particle count must be at least 1");
        ModelParams p;
        p.nu = nu;
        p.beta_plus = beta_plus;
        p.beta_minus = beta_minus_override ? *beta_minus_override : beta_plus + 1;
        if (std::abs(p.beta_minus - p.beta_plus - 1) > 1e-12)
            throw Error("ModelParams: normalization beta_- - beta_+ = 1 violated");
        p.d = static_cast<int>(masses.size());
        const Real M = std::accumulate(masses.begin(), masses.end(), Real(0));
        p.C = c_override ? *c_override : (p.beta_minus + p.beta_plus) / (2 * nu) * M;
        return p;
    }

    Real det_beta() const { return beta_minus * beta_plus; }

    bool has_default_C(const Real total_mass) const {
        const Real def = (beta_minus + beta_plus) / (2 * nu) * total_mass;
        return std::abs(C - def) <= 1e-12 * std::max(Real(1), std::abs(def));
    }
};

struct PeakonState {
    Real t = 0;
    std::vector<Real> x; /* positions, strictly increasing */
    std::vector<Real> m; /* signed masses, all nonzero */
    bool was_sorted = false; /* constructor had to reorder its input */

    int d() const { return static_cast<int>(x.size()); }

    Real total_mass() const { return std::accumulate(m.begin(), m.end(), Real(0)); }

    Real min_gap() const {
        Real g = std::numeric_limits<Real>::infinity();
        for (std::size_t j = 1; j < x.size(); ++j) g = std::min(g, x[j] - x[j - 1]);
        return g;
    }

    /*
     * Canonical constructor: pairs (x_j, m_j) are sorted by position so that
     * labels increase left to right; was_sorted records whether the input
     * needed reordering. Coincident positions and zero masses are rejected.
     */
    static PeakonState make(Real t, std::vector<Real> x, std::vector<Real> m) {
        if (x.empty() || x.size() != m.size())
            throw Error("PeakonState: need matching, nonempty position and mass lists");
        std::vector<std::size_t> idx(x.size());
        std::iota(idx.begin(), idx.end(), std::size_t(0));
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
        PeakonState s;
        s.t = t;
        s.x.reserve(x.size());
        s.m.reserve(x.size());
        for (std::size_t j = 0; j < idx.size(); ++j) {
            s.x.push_back(x[idx[j]]);
            s.m.push_back(m[idx[j]]);
            s.was_sorted |= (idx[j] != j);
        }
        for (std::size_t j = 1; j < s.x.size(); ++j)
            if (!(s.x[j - 1] < s.x[j])) throw Error("PeakonState: positions must be strictly increasing");
        for (Real mj : s.m)
            if (mj == Real(0)) throw Error("PeakonState: masses must be nonzero");
        return s;
    }
};

struct Asymptotics {
    Real M = 0;       /* sum m_j */
    Real M_plus = 0;  /* sum m_j e^{+2nu x_j} */
    Real M_minus = 0; /* sum m_j e^{-2nu x_j} */
};

inline Asymptotics asymptotics(const PeakonState& s, const ModelParams& p) {
    Asymptotics a;
    for (std::size_t j = 0; j < s.x.size(); ++j) {
        a.M += s.m[j];
        a.M_plus += s.m[j] * std::exp(2 * p.nu * s.x[j]);
        a.M_minus += s.m[j] * std::exp(-2 * p.nu * s.x[j]);
    }
    return a;
}

inline Real green(Real x, const ModelParams& p) {
    const Real ax = std::abs(x);
    return p.beta_minus / (2 * p.nu) * std::exp(-2 * p.nu * ax) +
           p.beta_plus / (2 * p.nu) * std::exp(2 * p.nu * ax);
}

/* Derivative of G away from the kink; the averaged value 0 at x = 0. */
inline Real green_deriv_avg(Real x, const ModelParams& p) {
    if (x == Real(0)) return 0;
    const Real ax = std::abs(x);
    const Real s = x > 0 ? Real(1) : Real(-1);
    return s * (-p.beta_minus * std::exp(-2 * p.nu * ax) + p.beta_plus * std::exp(2 * p.nu * ax));
}

struct PotentialValue {
    Real u;      /* velocity field at x */
    Real ux_avg; /* slope with one-sided limits averaged at peaks */
};

inline PotentialValue potential(const PeakonState& s, const ModelParams& p, Real x) {
    PotentialValue v{-p.C, 0};
    for (std::size_t j = 0; j < s.x.size(); ++j) {
        v.u += s.m[j] * green(x - s.x[j], p);
        v.ux_avg += s.m[j] * green_deriv_avg(x - s.x[j], p);
    }
    return v;
}

struct Field {
    std::vector<Real> xdot;
    std::vector<Real> mdot;
};

inline Field vector_field(const PeakonState& s, const ModelParams& p) {
    Field f;
    f.xdot.resize(s.x.size());
    f.mdot.resize(s.x.size());
    for (std::size_t j = 0; j < s.x.size(); ++j) {
        const PotentialValue v = potential(s, p, s.x[j]);
        f.xdot[j] = v.u;
        f.mdot[j] = -s.m[j] * v.ux_avg;
    }
    return f;
}

/* H = (1/2) sum_{j,k} m_j m_k G(x_j - x_k); the flow's energy. */
inline Real hamiltonian(const PeakonState& s, const ModelParams& p) {
    Real h = 0;
    for (std::size_t j = 0; j < s.x.size(); ++j)
        for (std::size_t k = 0; k < s.x.size(); ++k)
            h += s.m[j] * s.m[k] * green(s.x[j] - s.x[k], p);
    return h / 2;
}

/* State displaced along a tangent field; small enough steps keep ordering. */
inline PeakonState advanced(const PeakonState& s, const Field& f, Real h) {
    PeakonState r = s;
    r.t += h;
    for (std::size_t j = 0; j < r.x.size(); ++j) {
        r.x[j] += h * f.xdot[j];
        r.m[j] += h * f.mdot[j];
    }
    return r;
}

}  // namespace cf
