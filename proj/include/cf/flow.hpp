#pragma once

/*
 * Adaptive integration of the peakon ODEs with invariant logging and
 * collision / blow-up event detection.
 *
 * Scheme: Dormand-Prince embedded 5(4) pair with PI step-size control.
 *
 * Internal coordinates: the integrator advances (x_1, gap_1..gap_{d-1},
 * m_1..m_d) rather than absolute positions. Near a two-body collision the
 * interesting gap shrinks to ~1e-12 while positions stay O(1); storing the
 * gap as its own variable keeps full relative precision where absolute
 * coordinates would drown it in position roundoff. The right-hand side for
 * d(gap)/dt is evaluated through expm1-based kernel differences, so no
 * catastrophic cancellation occurs either. Trace invariants are logged from
 * the translation-invariant closed form in these coordinates, which is
 * mathematically identical to the trace of A(z) but immune to the same
 * rounding problem; sampled states are rounded back to absolute positions.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "real.hpp"

namespace cf {

struct IntegratorConfig {
    Real rel_tol = 1e-10;
    Real abs_tol = 1e-14;
    Real max_step = std::numeric_limits<Real>::infinity();
    Real collision_gap = 1e-9; /* terminate when a gap crosses this */
    Real mass_cap = 1e6;       /* terminate when any |m_j| exceeds this */
};

enum class Termination { reached_t_end, collision, blowup, step_failure };

struct Trajectory {
    std::vector<PeakonState> samples;
    std::vector<std::vector<Real>> invariant_log; /* Tr A coefficients per sample */
    Termination termination = Termination::reached_t_end;
    int collision_index = -1;  /* j of the closing gap (x_{j+1} - x_j) */
    Real collision_time = std::numeric_limits<Real>::quiet_NaN();
};

/*
 * Coefficients of Tr A(z) evaluated from gaps and masses only (the trace is
 * translation invariant). Index i is the coefficient of z^i.
 */
inline std::vector<Real> trace_invariants_from_gaps(const std::vector<Real>& gap,
                                                    const std::vector<Real>& m,
                                                    const ModelParams& p) {
    const int d = static_cast<int>(m.size());
    std::vector<Real> c(static_cast<std::size_t>(d) + 1, Real(0));
    c[static_cast<std::size_t>(d)] = p.beta_minus + p.beta_plus;
    for (unsigned mask = 1; mask < (1u << d); ++mask) {
        Real m_I = 1, f_I = 1, span = 0;
        int count = 0, prev = -1;
        for (int j = 0; j < d; ++j) {
            if (!(mask & (1u << j))) continue;
            m_I *= m[static_cast<std::size_t>(j)];
            if (prev >= 0) {
                Real seg = 0;
                for (int i = prev; i < j; ++i) seg += gap[static_cast<std::size_t>(i)];
                f_I *= -std::expm1(-2 * p.nu * seg);
                span += seg;
            }
            prev = j;
            ++count;
        }
        c[static_cast<std::size_t>(d - count)] +=
            f_I * m_I * (p.beta_minus - p.beta_plus * std::exp(2 * p.nu * span));
    }
    return c;
}

namespace detail {

/* State vector layout: y = [x_1, gap_1..gap_{d-1}, m_1..m_d]. */
struct GapSystem {
    const ModelParams* p;
    int d;

    std::size_t dim() const { return static_cast<std::size_t>(2 * d); }

    static Real x1_of(const std::vector<Real>& y) { return y[0]; }
    const Real* gaps(const std::vector<Real>& y) const { return y.data() + 1; }
    const Real* masses(const std::vector<Real>& y) const { return y.data() + d; }

    /* sum of gaps with indices [a, b); all terms nonnegative, no cancellation */
    Real segsum(const std::vector<Real>& y, int a, int b) const {
        Real s = 0;
        for (int i = a; i < b; ++i) s += y[static_cast<std::size_t>(1 + i)];
        return s;
    }

    /* |x_j - x_k| for particle indices j, k (0-based) */
    Real absdist(const std::vector<Real>& y, int j, int k) const {
        return j >= k ? segsum(y, k, j) : segsum(y, j, k);
    }

    /*
     * G(q) - G(p) where p = x_j - x_k, q = x_{j+1} - x_k. The increment of
     * |.| is +gap_j when k <= j and -gap_j when k > j, known exactly, so the
     * difference is two expm1 terms with no subtraction of close numbers.
     */
    Real kernel_diff(const std::vector<Real>& y, int j, int k) const {
        const Real nu = p->nu;
        const Real gap_j = y[static_cast<std::size_t>(1 + j)];
        const Real abs_p = k <= j ? segsum(y, k, j) : segsum(y, j, k);
        const Real delta = k <= j ? gap_j : -gap_j;
        return p->beta_minus / (2 * nu) * std::exp(-2 * nu * abs_p) * std::expm1(-2 * nu * delta) +
               p->beta_plus / (2 * nu) * std::exp(2 * nu * abs_p) * std::expm1(2 * nu * delta);
    }

    void rhs(const std::vector<Real>& y, std::vector<Real>& f) const {
        const Real nu = p->nu;
        const Real* m = masses(y);
        f.assign(dim(), Real(0));

        /* dx_1/dt = u(x_1) */
        Real u1 = -p->C;
        for (int k = 0; k < d; ++k) {
            const Real r = absdist(y, 0, k);
            u1 += m[k] * (p->beta_minus / (2 * nu) * std::exp(-2 * nu * r) +
                          p->beta_plus / (2 * nu) * std::exp(2 * nu * r));
        }
        f[0] = u1;

        /* d(gap_j)/dt = u(x_{j+1}) - u(x_j), by stable kernel differences */
        for (int j = 0; j + 1 < d; ++j) {
            Real g = 0;
            for (int k = 0; k < d; ++k) g += m[k] * kernel_diff(y, j, k);
            f[static_cast<std::size_t>(1 + j)] = g;
        }

        /* dm_j/dt = -m_j sum_{k != j} m_k G'(x_j - x_k) */
        for (int j = 0; j < d; ++j) {
            Real slope = 0;
            for (int k = 0; k < d; ++k) {
                if (k == j) continue; /* own kink averages to zero */
                const Real r = absdist(y, j, k);
                const Real sgn = j > k ? Real(1) : Real(-1);
                slope += m[k] * sgn *
                         (-p->beta_minus * std::exp(-2 * nu * r) + p->beta_plus * std::exp(2 * nu * r));
            }
            f[static_cast<std::size_t>(d + j)] = -m[j] * slope;
        }
    }

    PeakonState to_state(Real t, const std::vector<Real>& y) const {
        std::vector<Real> x(static_cast<std::size_t>(d));
        std::vector<Real> mm(static_cast<std::size_t>(d));
        Real pos = y[0];
        for (int j = 0; j < d; ++j) {
            x[static_cast<std::size_t>(j)] = pos;
            if (j + 1 < d) pos += y[static_cast<std::size_t>(1 + j)];
            mm[static_cast<std::size_t>(j)] = y[static_cast<std::size_t>(d + j)];
        }
        PeakonState s;
        s.t = t;
        s.x = std::move(x);
        s.m = std::move(mm);
        return s;
    }

    static std::vector<Real> from_state(const PeakonState& s) {
        const int d = s.d();
        std::vector<Real> y(static_cast<std::size_t>(2 * d));
        y[0] = s.x[0];
        for (int j = 0; j + 1 < d; ++j)
            y[static_cast<std::size_t>(1 + j)] = s.x[static_cast<std::size_t>(j + 1)] - s.x[static_cast<std::size_t>(j)];
        for (int j = 0; j < d; ++j) y[static_cast<std::size_t>(d + j)] = s.m[static_cast<std::size_t>(j)];
        return y;
    }

    Real min_gap(const std::vector<Real>& y) const {
        Real g = std::numeric_limits<Real>::infinity();
        for (int j = 0; j + 1 < d; ++j) g = std::min(g, y[static_cast<std::size_t>(1 + j)]);
        return g;
    }

    int argmin_gap(const std::vector<Real>& y) const {
        int arg = 0;
        Real g = std::numeric_limits<Real>::infinity();
        for (int j = 0; j + 1 < d; ++j)
            if (y[static_cast<std::size_t>(1 + j)] < g) {
                g = y[static_cast<std::size_t>(1 + j)];
                arg = j;
            }
        return arg;
    }

    Real max_abs_mass(const std::vector<Real>& y) const {
        Real m = 0;
        for (int j = 0; j < d; ++j) m = std::max(m, std::abs(y[static_cast<std::size_t>(d + j)]));
        return m;
    }
};

/* Dormand-Prince 5(4) tableau. */
struct Dopri5 {
    static constexpr Real c[7] = {0, 1. / 5, 3. / 10, 4. / 5, 8. / 9, 1, 1};
    static constexpr Real a[7][6] = {
        {},
        {1. / 5},
        {3. / 40, 9. / 40},
        {44. / 45, -56. / 15, 32. / 9},
        {19372. / 6561, -25360. / 2187, 64448. / 6561, -212. / 729},
        {9017. / 3168, -355. / 33, 46732. / 5247, 49. / 176, -5103. / 18656},
        {35. / 384, 0, 500. / 1113, 125. / 192, -2187. / 6784, 11. / 84},
    };
    /* 5th-order weights are row a[6]; e = b5 - b4 drives the error estimate */
    static constexpr Real e[7] = {35. / 384 - 5179. / 57600,    0,
                                  500. / 1113 - 7571. / 16695,  125. / 192 - 393. / 640,
                                  -2187. / 6784 + 92097. / 339200, 11. / 84 - 187. / 2100,
                                  -1. / 40};
};

struct StepResult {
    std::vector<Real> y;
    Real err; /* scaled error estimate; accept when <= 1 */
};

template <typename System>
StepResult rk_step(const System& sys, const std::vector<Real>& y, Real h,
                   const IntegratorConfig& cfg) {
    const std::size_t n = y.size();
    std::vector<Real> k[7];
    std::vector<Real> tmp(n);
    for (int s = 0; s < 7; ++s) {
        k[s].resize(n);
        if (s == 0) {
            sys.rhs(y, k[0]);
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            Real acc = y[i];
            for (int q = 0; q < s; ++q) acc += h * Dopri5::a[s][q] * k[q][i];
            tmp[i] = acc;
        }
        sys.rhs(tmp, k[s]);
    }
    StepResult r;
    r.y.resize(n);
    Real errsq = 0;
    for (std::size_t i = 0; i < n; ++i) {
        Real ynew = y[i];
        Real errterm = 0;
        for (int s = 0; s < 7; ++s) {
            if (s < 6) ynew += h * Dopri5::a[6][s] * k[s][i];
            errterm += Dopri5::e[s] * k[s][i];
        }
        r.y[i] = ynew;
        const Real sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew));
        const Real ei = h * errterm / sc;
        errsq += ei * ei;
    }
    r.err = std::sqrt(errsq / static_cast<Real>(n));
    return r;
}

}  // namespace detail

/*
 * Advance state0 to t_end, or stop early at a collision (a gap crossing
 * cfg.collision_gap, event time refined by bisection to 1e-10), a mass
 * blow-up past cfg.mass_cap, or a step-size underflow below 1e-14 of the
 * requested span. Every accepted step is sampled and its trace invariants
 * logged; invariants are diagnostics only and never correct the state.
 */
inline Trajectory integrate(const PeakonState& state0, const ModelParams& p, Real t_end,
                            const IntegratorConfig& cfg) {
    if (!(t_end > state0.t)) throw Error("integrate: t_end must exceed the initial time");
    const detail::GapSystem sys{&p, state0.d()};
    const Real span = t_end - state0.t;

    Trajectory traj;
    std::vector<Real> y = detail::GapSystem::from_state(state0);
    Real t = state0.t;

    auto log_sample = [&](Real tt, const std::vector<Real>& yy) {
        traj.samples.push_back(sys.to_state(tt, yy));
        std::vector<Real> gap(yy.begin() + 1, yy.begin() + sys.d);
        std::vector<Real> m(yy.begin() + sys.d, yy.end());
        traj.invariant_log.push_back(trace_invariants_from_gaps(gap, m, p));
    };

    log_sample(t, y);
    if (sys.d > 1 && sys.min_gap(y) <= cfg.collision_gap) {
        traj.termination = Termination::collision;
        traj.collision_index = sys.argmin_gap(y);
        traj.collision_time = t;
        return traj;
    }

    /* initial step: aim for a scaled displacement of about 1e-2 */
    std::vector<Real> f0(sys.dim());
    sys.rhs(y, f0);
    Real fscale = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const Real sc = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
        fscale = std::max(fscale, std::abs(f0[i]) * cfg.rel_tol / sc);
    }
    Real h = fscale > 0 ? Real(0.01) / fscale : Real(1e-3) * span;
    h = std::min({h, span, cfg.max_step});

    Real err_prev = 1;
    const Real h_floor = 1e-14 * span;

    while (t < t_end) {
        h = std::min({h, cfg.max_step, t_end - t});
        if (h < h_floor) {
            traj.termination = Termination::step_failure;
            return traj;
        }
        const detail::StepResult step = detail::rk_step(sys, y, h, cfg);
        if (!(step.err <= 1)) {
            /* reject: shrink and retry */
            const Real fac = std::max(Real(0.1), Real(0.9) * std::pow(step.err, Real(-0.2)));
            h *= std::min(fac, Real(1));
            err_prev = 1;
            continue;
        }

        Real t_new = t + h;
        std::vector<Real> y_new = step.y;
        bool collided = false;

        if (sys.d > 1 && sys.min_gap(y_new) <= cfg.collision_gap) {
            /*
             * Bisect the event time with single fixed steps from the last
             * accepted state; each trial step is at least as accurate as the
             * accepted full step.
             */
            Real lo = 0, hi = h;
            while (hi - lo > 1e-10) {
                const Real mid = (lo + hi) / 2;
                const detail::StepResult trial = detail::rk_step(sys, y, mid, cfg);
                if (sys.min_gap(trial.y) <= cfg.collision_gap)
                    hi = mid;
                else
                    lo = mid;
            }
            const detail::StepResult final_step = detail::rk_step(sys, y, hi, cfg);
            t_new = t + hi;
            y_new = final_step.y;
            collided = true;
        }

        t = t_new;
        y = y_new;
        log_sample(t, y);

        if (collided) {
            traj.termination = Termination::collision;
            traj.collision_index = sys.argmin_gap(y);
            traj.collision_time = t;
            return traj;
        }
        if (sys.max_abs_mass(y) > cfg.mass_cap) {
            traj.termination = Termination::blowup;
            return traj;
        }

        /* PI controller (accepted step) */
        const Real fac = Real(0.9) * std::pow(std::max(step.err, Real(1e-10)), Real(-0.17)) *
                         std::pow(err_prev, Real(0.04));
        h *= std::clamp(fac, Real(0.2), Real(5));
        err_prev = std::max(step.err, Real(1e-10));
    }

    traj.termination = Termination::reached_t_end;
    return traj;
}

/* Max relative drift of each logged invariant against its initial value. */
inline std::vector<Real> invariant_drift(const Trajectory& traj) {
    if (traj.invariant_log.size() < 2) {
        return std::vector<Real>(traj.invariant_log.empty() ? 0 : traj.invariant_log[0].size(),
                                 Real(0));
    }
    const std::vector<Real>& c0 = traj.invariant_log.front();
    std::vector<Real> drift(c0.size(), Real(0));
    for (const std::vector<Real>& c : traj.invariant_log)
        for (std::size_t i = 0; i < c0.size(); ++i) {
            const Real denom = std::max(std::abs(c0[i]), Real(1e-12));
            drift[i] = std::max(drift[i], std::abs(c[i] - c0[i]) / denom);
        }
    return drift;
}

/* True iff no mass changed sign anywhere along the trajectory. */
inline bool sign_check(const Trajectory& traj) {
    if (traj.samples.empty()) return true;
    const std::vector<Real>& m0 = traj.samples.front().m;
    for (const PeakonState& s : traj.samples)
        for (std::size_t j = 0; j < m0.size(); ++j)
            if ((s.m[j] > 0) != (m0[j] > 0) || s.m[j] == Real(0)) return false;
    return true;
}

}  // namespace cf
