#pragma once

/*
 * Polynomial root finding: eigenvalues of the companion matrix, then one
 * Newton step on each eigenvalue to polish. Robust and accurate at the
 * degrees this library meets (at most 2d with d <= 5 or so).
 */

#include <Eigen/Dense>
#include <vector>

#include "poly.hpp"
#include "real.hpp"

namespace cf {

inline std::vector<Complex> poly_roots(const Poly& p) {
    const int n = p.degree();
    if (n < 1) return {};
    const Real lead = p[static_cast<std::size_t>(n)];
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -p[static_cast<std::size_t>(i)] / lead;
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);

    const Poly dp = p.derivative();
    std::vector<Complex> roots;
    roots.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Complex r(es.eigenvalues()(i).real(), es.eigenvalues()(i).imag());
        const Complex slope = dp.eval(r);
        if (std::abs(slope) > 0) r -= p.eval(r) / slope;
        roots.push_back(r);
    }
    return roots;
}

}  // namespace cf
