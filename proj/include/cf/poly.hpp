#pragma once

/*
 * Univariate polynomials and truncated power series over cf::Real.
 *
 * Conventions:
 *  - coefficients are stored ascending in the power of the variable;
 *  - Poly is kept in canonical form: trailing coefficients whose magnitude
 *    falls below kTrimRel times the largest input coefficient are trimmed
 *    when a result is canonicalized, never in the middle of arithmetic;
 *  - PowerSeries tracks an exclusive truncation order and binary operations
 *    propagate the minimum order of their operands, so a coefficient is
 *    never reported beyond what both inputs support.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "real.hpp"

namespace cf {

using Complex = std::complex<Real>;

namespace detail {

inline Real max_abs(const std::vector<Real>& v) {
    Real m = 0;
    for (Real x : v) m = std::max(m, std::abs(x));
    return m;
}

/* Drop trailing coefficients that are negligible at the given scale. */
inline void trim(std::vector<Real>& c, Real scale) {
    const Real thresh = kTrimRel * scale;
    while (!c.empty() && std::abs(c.back()) <= thresh) c.pop_back();
}

}  // namespace detail

class Poly {
  public:
    static constexpr int kZeroDegree = -1;

    Poly() = default;

    explicit Poly(std::vector<Real> coeffs) : c_(std::move(coeffs)) {
        detail::trim(c_, detail::max_abs(c_));
    }

    static Poly constant(Real a) { return Poly(std::vector<Real>{a}); }

    /* a * x^k */
    static Poly monomial(Real a, std::size_t k) {
        std::vector<Real> c(k + 1, Real(0));
        c[k] = a;
        return Poly(std::move(c));
    }

    const std::vector<Real>& coeffs() const { return c_; }

    int degree() const { return static_cast<int>(c_.size()) - 1; }

    bool is_zero() const { return c_.empty(); }

    /* Coefficient of x^k, zero beyond the stored degree. */
    Real operator[](std::size_t k) const {
        return k < c_.size() ? c_[k] : Real(0);
    }

    Real eval(Real x) const {
        Real y = 0;
        for (std::size_t i = c_.size(); i-- > 0;) y = y * x + c_[i];
        return y;
    }

    Complex eval(Complex x) const {
        Complex y = 0;
        for (std::size_t i = c_.size(); i-- > 0;) y = y * x + c_[i];
        return y;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<Real> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * Real(k);
        return Poly(std::move(d));
    }

    /* Multiply by x^k. */
    Poly shifted_up(std::size_t k) const {
        if (is_zero()) return Poly();
        std::vector<Real> r(c_.size() + k, Real(0));
        std::copy(c_.begin(), c_.end(), r.begin() + static_cast<std::ptrdiff_t>(k));
        return Poly(std::move(r));
    }

    /* Polynomial part of p / x^k: drops every power below k. */
    Poly shifted_down(std::size_t k) const {
        if (c_.size() <= k) return Poly();
        return Poly(std::vector<Real>(c_.begin() + static_cast<std::ptrdiff_t>(k), c_.end()));
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<Real> r(std::max(a.c_.size(), b.c_.size()), Real(0));
        for (std::size_t k = 0; k < r.size(); ++k) r[k] = a[k] + b[k];
        detail::trim(r, std::max(detail::max_abs(a.c_), detail::max_abs(b.c_)));
        return Poly(raw{}, std::move(r));
    }

    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<Real> r(std::max(a.c_.size(), b.c_.size()), Real(0));
        for (std::size_t k = 0; k < r.size(); ++k) r[k] = a[k] - b[k];
        detail::trim(r, std::max(detail::max_abs(a.c_), detail::max_abs(b.c_)));
        return Poly(raw{}, std::move(r));
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<Real> r(a.c_.size() + b.c_.size() - 1, Real(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        detail::trim(r, std::max(detail::max_abs(a.c_), detail::max_abs(b.c_)));
        return Poly(raw{}, std::move(r));
    }

    friend Poly operator*(Real s, const Poly& p) {
        std::vector<Real> r = p.c_;
        for (Real& x : r) x *= s;
        detail::trim(r, detail::max_abs(r));
        return Poly(raw{}, std::move(r));
    }

    friend Poly operator*(const Poly& p, Real s) { return s * p; }

    friend Poly operator-(const Poly& p) { return Real(-1) * p; }

  private:
    /* Tag for internal construction from an already-trimmed vector. */
    struct raw {};
    Poly(raw, std::vector<Real> coeffs) : c_(std::move(coeffs)) {}

    std::vector<Real> c_;
};

/* Largest coefficient-wise difference; the test suite's polynomial metric. */
inline Real max_coeff_diff(const Poly& a, const Poly& b) {
    Real m = 0;
    const std::size_t n = std::max(a.coeffs().size(), b.coeffs().size());
    for (std::size_t k = 0; k < n; ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

inline Real max_abs_coeff(const Poly& p) { return detail::max_abs(p.coeffs()); }

class PowerSeries {
  public:
    /* The zero series to a given order. */
    explicit PowerSeries(int order) : c_(checked(order), Real(0)) {}

    PowerSeries(std::vector<Real> coeffs, int order) : c_(std::move(coeffs)) {
        c_.resize(checked(order), Real(0));
    }

    /* Truncation of a polynomial. */
    static PowerSeries from_poly(const Poly& p, int order) {
        PowerSeries s(order);
        for (std::size_t k = 0; k < s.c_.size(); ++k) s.c_[k] = p[k];
        return s;
    }

    static PowerSeries constant(Real a, int order) {
        PowerSeries s(order);
        s.c_[0] = a;
        return s;
    }

    int order() const { return static_cast<int>(c_.size()); }

    const std::vector<Real>& coeffs() const { return c_; }

    Real operator[](std::size_t k) const {
        return k < c_.size() ? c_[k] : Real(0);
    }

    PowerSeries truncated(int order) const {
        std::vector<Real> r(c_.begin(), c_.begin() + std::min<std::ptrdiff_t>(checked(order), c_.size()));
        return PowerSeries(std::move(r), order);
    }

    friend PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
        PowerSeries r(std::min(a.order(), b.order()));
        for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] = a.c_[k] + b.c_[k];
        return r;
    }

    friend PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) {
        PowerSeries r(std::min(a.order(), b.order()));
        for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] = a.c_[k] - b.c_[k];
        return r;
    }

    friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
        PowerSeries r(std::min(a.order(), b.order()));
        const std::size_t n = r.c_.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (a.c_[i] == Real(0)) continue;
            for (std::size_t j = 0; i + j < n; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        return r;
    }

    friend PowerSeries operator*(Real s, const PowerSeries& p) {
        PowerSeries r = p;
        for (Real& x : r.c_) x *= s;
        return r;
    }

    friend PowerSeries operator*(const PowerSeries& p, Real s) { return s * p; }

    friend PowerSeries operator-(const PowerSeries& p) { return Real(-1) * p; }

  private:
    static std::size_t checked(int order) {
        if (order < 1) throw Error("PowerSeries order must be at least 1");
        return static_cast<std::size_t>(order);
    }

    std::vector<Real> c_;
};

/*
 * q = num / den to the common truncation order, by the long-division
 * recurrence q_n = (num_n - sum_{k<n} q_k den_{n-k}) / den_0.
 */
inline PowerSeries series_div(const PowerSeries& num, const PowerSeries& den) {
    if (den[0] == Real(0))
        throw ZeroConstantTerm("series_div: denominator constant term is zero; factor out the variable first");
    const int n = std::min(num.order(), den.order());
    std::vector<Real> q(static_cast<std::size_t>(n), Real(0));
    for (std::size_t k = 0; k < q.size(); ++k) {
        Real acc = num[k];
        for (std::size_t j = 0; j < k; ++j) acc -= q[j] * den[k - j];
        q[k] = acc / den[0];
    }
    return PowerSeries(std::move(q), n);
}

/*
 * Branch of the formal square root: s with s^2 = p to truncation order and
 * s(0) = sign * sqrt(p(0)). The expansion point must not be a branch point.
 */
inline PowerSeries series_sqrt(const PowerSeries& p, int sign) {
    if (p[0] == Real(0))
        throw BranchPointAtOrigin("series_sqrt: radicand vanishes at the expansion point");
    if (p[0] < Real(0))
        throw Error("series_sqrt: negative constant term has no real branch");
    std::vector<Real> s(static_cast<std::size_t>(p.order()), Real(0));
    s[0] = (sign >= 0 ? Real(1) : Real(-1)) * std::sqrt(p[0]);
    for (std::size_t k = 1; k < s.size(); ++k) {
        Real acc = p[k];
        for (std::size_t j = 1; j < k; ++j) acc -= s[j] * s[k - j];
        s[k] = acc / (Real(2) * s[0]);
    }
    return PowerSeries(std::move(s), p.order());
}

inline Real max_coeff_diff(const PowerSeries& a, const PowerSeries& b) {
    Real m = 0;
    const std::size_t n = static_cast<std::size_t>(std::min(a.order(), b.order()));
    for (std::size_t k = 0; k < n; ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

inline Real max_abs_coeff(const PowerSeries& p) { return detail::max_abs(p.coeffs()); }

}  // namespace cf
