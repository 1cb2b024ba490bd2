#pragma once

#include <cmath>
#include <complex>
#include <functional>

#include "surfframe/geometry.hpp"
#include "surfframe/quadrature.hpp"

namespace surfframe {

using Complex = std::complex<double>;

inline double bessel_j0(double x) { return std::cyl_bessel_j(0.0, x); }

namespace detail {

/// sum_{j=0}^{n-1} e^{-2 pi i a (j + 1/2)}  (Dirichlet kernel, phase-reduced).
inline Complex midpoint_phase_sum(double a, int n) {
    double m = std::round(a);
    double ar = a - m;
    double s1 = std::sin(M_PI * ar);
    double ratio;
    if (std::abs(s1) < 1e-300) {
        ratio = static_cast<double>(n);
    } else {
        ratio = std::sin(M_PI * n * ar) / s1;
    }
    // sign from the removed integer part: (-1)^{m(n-1)}
    long mi = static_cast<long>(m);
    if ((mi % 2 != 0) && ((n - 1) % 2 != 0)) ratio = -ratio;
    double phase = -M_PI * n * a;
    return ratio * Complex(std::cos(phase), std::sin(phase));
}

inline bool product_structure_complete(const QuadratureMeasure& mu) {
    if (mu.blocks.empty() || !mu.circles.empty() || !mu.spheres.empty()) return false;
    long total = 0;
    for (const auto& b : mu.blocks) {
        long cnt = 1;
        for (const auto& ax : b.axes) cnt *= ax.n;
        total += cnt;
    }
    return total == mu.points.rows();
}

}  // namespace detail

/// mu_hat(xi) = sum_i w_i e^{-2 pi i xi . x_i}. Tensor-product facet grids are
/// evaluated with per-axis closed-form geometric sums (exact same value as the
/// direct sum up to roundoff, O(#axes) instead of O(#nodes) per frequency).
inline Complex fourier_transform(const QuadratureMeasure& mu, const Vector& xi) {
    if (xi.size() != mu.dim()) throw Error("fourier_transform: dimension mismatch");
    if (detail::product_structure_complete(mu)) {
        Complex total(0, 0);
        for (const auto& blk : mu.blocks) {
            double corner_phase = -2.0 * M_PI * xi.dot(blk.corner);
            Complex f(std::cos(corner_phase), std::sin(corner_phase));
            for (const auto& ax : blk.axes)
                f *= ax.step * detail::midpoint_phase_sum(xi.dot(ax.dir) * ax.step, ax.n);
            total += f;
        }
        return total;
    }
    Vector phases = mu.points * xi;
    Complex total(0, 0);
    for (int i = 0; i < mu.size(); ++i) {
        double ph = -2.0 * M_PI * phases[i];
        total += mu.weights[i] * Complex(std::cos(ph), std::sin(ph));
    }
    return total;
}

/// Nyquist-style aliasing check: node spacing must be at most
/// 1 / (factor * max |xi_coordinate|). Not fatal; callers log it.
inline bool alias_risk(const QuadratureMeasure& mu, const Vector& xi, double factor = 4.0) {
    double mx = xi.cwiseAbs().maxCoeff();
    if (mx == 0) return false;
    return mu.resolution < factor * mx;
}

/// Closed-form transform of the unit-sphere surface measure.
inline Complex sphere_ft_closed_form(int d, const Vector& xi) {
    double s = xi.norm();
    if (d == 2) return Complex(2.0 * M_PI * bessel_j0(2.0 * M_PI * s), 0.0);
    if (d == 3) {
        if (s < 1e-12) return Complex(4.0 * M_PI, 0.0);
        return Complex(2.0 * std::sin(2.0 * M_PI * s) / s, 0.0);
    }
    throw UnsupportedDimension("sphere_ft_closed_form: d in {2,3} only");
}

/// Leading oscillatory term of the transform of a smooth positively curved
/// boundary measure:
///   C(xi/|xi|) |xi|^{-(d-1)/2} cos(2 pi (rho*(xi) - (d-1)/8)).
/// Closed-form amplitude is available for balls: C = 2 r^{(d-1)/2}
/// (matches the large-argument J0 / spherical sinc expansions exactly).
struct HerzAsymptotic {
    ConvexBody body;
    std::function<double(const Vector&)> amplitude;  // on the unit sphere
    double order_exponent;                           // (d-1)/2
    double phase_shift;                              // (d-1)/8
};

inline HerzAsymptotic make_herz(const ConvexBody& body) {
    if (body.kind() != ConvexBody::Kind::Ball)
        throw UnsupportedBody("make_herz: closed-form amplitude known for balls only");
    const int d = body.dim();
    if (d != 2 && d != 3) throw UnsupportedDimension("make_herz: d in {2,3} only");
    const double r = body.semi_axes()[0];
    double amp = 2.0 * std::pow(r, 0.5 * (d - 1));
    return HerzAsymptotic{body, [amp](const Vector&) { return amp; },
                          0.5 * (d - 1), (d - 1) / 8.0};
}

inline double herz_eval(const HerzAsymptotic& h, const Vector& xi) {
    double s = xi.norm();
    if (s <= 1.0) throw TooCloseToOrigin("herz_eval: |xi| must exceed 1");
    double rho = dual_norm(h.body, xi);
    return h.amplitude(xi / s) * std::pow(s, -h.order_exponent) *
           std::cos(2.0 * M_PI * (rho - h.phase_shift));
}

}  // namespace surfframe
