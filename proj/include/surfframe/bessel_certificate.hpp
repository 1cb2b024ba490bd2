#pragma once

#include <cmath>
#include <complex>
#include <deque>
#include <map>
#include <mutex>
#include <vector>

#include "surfframe/errors.hpp"
#include "surfframe/quadrature.hpp"

namespace surfframe {

// Upper Bessel certificate for delta-separated frequency sets on [0,1]^d:
//   constant = ||phat^#||_1^2 / (v_d delta^d)
// where phat is the transform of a fixed smooth cutoff == 1 on [0,1]^d and
// supported in [-1,2]^d, phat^#(x) = sup_{|y-x|<=delta} |phat(y)| is its
// running maximal function, and v_d is the unit-ball volume. The maximal
// L1 norm is computed on a dense grid plus an analytic second-derivative
// tail bound; the value is a numerical evaluation of the covering argument,
// not an interval-arithmetic enclosure.

namespace bump {

/// exp(-1/t) smoothstep: 0 at t<=0, 1 at t>=1, C-infinity.
inline double smoothstep(double t) {
    if (t <= 0) return 0.0;
    if (t >= 1) return 1.0;
    double a = std::exp(-1.0 / t);
    double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

/// 1-d cutoff: 1 on [0,1], smooth ramps on [-1,0] and [1,2], 0 outside.
inline double phi1(double x) {
    if (x <= -1.0 || x >= 2.0) return 0.0;
    if (x < 0.0) return smoothstep(x + 1.0);
    if (x <= 1.0) return 1.0;
    return smoothstep(2.0 - x);
}

/// phi1_hat(xi) = int phi1(x) e^{-2 pi i xi x} dx. The plateau integrates in
/// closed form; the two ramps use composite Gauss-Legendre with panel count
/// scaled to the oscillation.
inline std::complex<double> phi1_hat(double xi) {
    using C = std::complex<double>;
    // plateau [0,1]
    C mid;
    if (std::abs(xi) < 1e-12) {
        mid = C(1.0, 0.0);
    } else {
        double s = std::sin(M_PI * xi) / (M_PI * xi);
        mid = std::polar(s, -M_PI * xi);
    }
    static std::vector<double> gx, gw;
    static std::once_flag once;
    std::call_once(once, [] { gauss_legendre(16, gx, gw); });

    auto ramp = [&](double a, double b, bool rising) {
        int panels = std::max(8, static_cast<int>(std::ceil(std::abs(xi) / 3.0)));
        C acc(0, 0);
        double w = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            double lo = a + p * w;
            for (std::size_t q = 0; q < gx.size(); ++q) {
                double x = lo + 0.5 * w * (gx[q] + 1.0);
                double v = rising ? smoothstep(x + 1.0) : smoothstep(2.0 - x);
                double ph = -2.0 * M_PI * xi * x;
                acc += 0.5 * w * gw[q] * v * C(std::cos(ph), std::sin(ph));
            }
        }
        return acc;
    };
    return mid + ramp(-1.0, 0.0, true) + ramp(1.0, 2.0, false);
}

/// ||phi1''||_1, for the tail bound |phi1_hat(xi)| <= C2 / (2 pi xi)^2.
/// Central finite differences on the ramps, inflated 20%.
inline double second_derivative_l1() {
    const double h = 1e-4;
    double acc = 0;
    for (double a : {-1.0, 1.0}) {
        for (double x = a + h; x < a + 1.0 - h; x += h) {
            double dd = (phi1(x + h) - 2.0 * phi1(x) + phi1(x - h)) / (h * h);
            acc += std::abs(dd) * h;
        }
    }
    return 1.2 * acc;
}

struct MaximalTable {
    double h = 0;       // grid spacing
    double X = 0;       // half-width of the sampled range
    std::vector<double> absvals;  // |phi1_hat| at 0, h, 2h, ..., X
    double c2 = 0;
};

inline const MaximalTable& table() {
    static MaximalTable t = [] {
        MaximalTable tt;
        tt.h = 5e-3;
        tt.X = 400.0;
        int n = static_cast<int>(std::round(tt.X / tt.h)) + 1;
        tt.absvals.resize(n);
        for (int i = 0; i < n; ++i) tt.absvals[i] = std::abs(phi1_hat(i * tt.h));
        tt.c2 = second_derivative_l1();
        return tt;
    }();
    return t;
}

/// ||phat^#||_1 in one dimension for window radius delta: sliding maximum of
/// the sampled |phi1_hat| (|phi1_hat| is even) plus the decay-tail bound.
inline double maximal_l1_1d(double delta) {
    const auto& t = table();
    const int n = static_cast<int>(t.absvals.size());
    const int w = static_cast<int>(std::ceil(delta / t.h)) + 1;

    // sliding-window maximum over |j - i| <= w on the even extension
    std::vector<double> mx(n);
    std::deque<int> dq;
    auto val = [&](int j) { return t.absvals[std::abs(j)]; };
    for (int j = -w; j < n; ++j) {
        if (j + w < n) {
            while (!dq.empty() && val(dq.back()) <= val(j + w)) dq.pop_back();
            dq.push_back(j + w);
        }
        while (!dq.empty() && dq.front() < j - w) dq.pop_front();
        if (j >= 0) mx[j] = val(dq.front());
    }
    double l1 = mx[0] * t.h;  // center cell
    for (int i = 1; i < n; ++i) l1 += 2.0 * mx[i] * t.h;
    // tail: |phi1_hat(y)| <= c2/(2 pi y)^2 for |y| > X - delta
    double tail = 2.0 * t.c2 / (4.0 * M_PI * M_PI * (t.X - delta - t.h));
    return l1 + tail;
}

inline double unit_ball_volume(int d) {
    return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

}  // namespace bump

/// Certified upper Bessel bound for E(Gamma) on L^2([0,1]^d) over every
/// delta-separated Gamma. For d >= 2 the ball maximal function is majorized
/// by the product of 1-d cube maximal functions (still a valid upper bound).
inline double certified_bessel_constant(double delta, int d) {
    if (!(delta > 0.0) || delta > 2.0)
        throw DeltaOutOfRange("certified_bessel_constant: need 0 < delta <= 2");
    if (d < 1 || d > 3) throw UnsupportedDimension("certified_bessel_constant: d in {1,2,3}");

    static std::map<std::pair<double, int>, double> cache;
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find({delta, d});
        if (it != cache.end()) return it->second;
    }
    double l1 = bump::maximal_l1_1d(delta);
    double l1d = std::pow(l1, d);
    double value = l1d * l1d / (bump::unit_ball_volume(d) * std::pow(delta, d));
    {
        std::lock_guard<std::mutex> lock(mtx);
        cache[{delta, d}] = value;
    }
    return value;
}

}  // namespace surfframe
