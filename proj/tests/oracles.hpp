#pragma once

// Test-only oracles, independent of the library's evaluation paths:
// adaptive Gauss-Kronrod quadrature for transform values, brute-force
// enumerations for counting and separation claims.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <vector>

#include "surfframe/geometry.hpp"
#include "surfframe/spectrum.hpp"

namespace oracles {

using surfframe::Matrix;
using surfframe::Vector;

inline double gk_integrate(const std::function<double(double)>& f, double a, double b,
                           double tol = 1e-12) {
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 12, tol);
}

/// Transform of unit-circle arclength at |xi| = s, by adaptive quadrature of
/// the angular integral.
inline std::complex<double> circle_ft(double s) {
    auto re = [s](double th) { return std::cos(-2.0 * M_PI * s * std::cos(th)); };
    auto im = [s](double th) { return std::sin(-2.0 * M_PI * s * std::cos(th)); };
    return {gk_integrate(re, 0.0, 2.0 * M_PI), gk_integrate(im, 0.0, 2.0 * M_PI)};
}

/// Transform of Lebesgue measure on [0,1]^2 at (a, b), iterated adaptive
/// quadrature (no product shortcut).
inline std::complex<double> square_ft(double a, double b) {
    auto inner = [&](double x, bool real_part) {
        auto f = [&](double y) {
            double ph = -2.0 * M_PI * (a * x + b * y);
            return real_part ? std::cos(ph) : std::sin(ph);
        };
        return gk_integrate(f, 0.0, 1.0);
    };
    auto re = [&](double x) { return inner(x, true); };
    auto im = [&](double x) { return inner(x, false); };
    return {gk_integrate(re, 0.0, 1.0), gk_integrate(im, 0.0, 1.0)};
}

/// J0 by its integral definition (1/pi) int_0^pi cos(x sin t) dt.
inline double j0_integral(double x) {
    auto f = [x](double t) { return std::cos(x * std::sin(t)); };
    return gk_integrate(f, 0.0, M_PI) / M_PI;
}

/// O(n^2) minimum pairwise distance.
inline double brute_min_distance(const Matrix& pts) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < pts.rows(); ++i)
        for (int j = i + 1; j < pts.rows(); ++j)
            best = std::min(best, (pts.row(i) - pts.row(j)).norm());
    return best;
}

/// Counting oracle with reversed iteration order.
inline long count_in_ball_reversed(const Matrix& freq, double R) {
    long c = 0;
    for (int i = static_cast<int>(freq.rows()) - 1; i >= 0; --i)
        if (freq.row(i).norm() <= R + 1e-12) ++c;
    return c;
}

/// Power-sum oracle with reversed iteration order.
inline double partial_sum_reversed(const Matrix& freq, double gamma, double R) {
    double s = 0;
    for (int i = static_cast<int>(freq.rows()) - 1; i >= 0; --i) {
        double n = freq.row(i).norm();
        if (n > 0 && n <= R + 1e-12) s += std::pow(n, -gamma);
    }
    return s;
}

/// Diameter of {|xi| = t} ∩ B_r(lambda) for the circle, in closed form.
inline double circle_cap_diameter(double t, double lambda_norm, double r) {
    double c = (t * t + lambda_norm * lambda_norm - r * r) / (2.0 * t * lambda_norm);
    if (c > 1.0) return -1.0;  // empty cap
    if (c < -1.0) c = -1.0;
    return 2.0 * t * std::sin(std::acos(c));
}

}  // namespace oracles
