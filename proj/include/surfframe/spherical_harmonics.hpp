#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "surfframe/errors.hpp"
#include "surfframe/quadrature.hpp"

namespace surfframe {

// Real spherical harmonics, orthonormal in L^2(S^2), no Condon-Shortley phase:
//   Y_{l,0}  = Pbar_l^0(cos th)
//   Y_{l,m}  = sqrt(2) Pbar_l^m(cos th) cos(m ph),   m > 0
//   Y_{l,-m} = sqrt(2) Pbar_l^m(cos th) sin(m ph),   m > 0
// with Pbar the fully normalized associated Legendre functions (standard
// three-term recurrence, stable for the modest degrees used here).

inline int sph_index(int l, int m) { return l * l + l + m; }

/// All Y_{l,m}(x) for l <= L into a flat vector indexed by sph_index.
/// `x` need not be normalized.
inline std::vector<double> sph_harm_all(int L, const Eigen::Vector3d& x) {
    Eigen::Vector3d u = x.normalized();
    const double z = u[2];
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));  // sin(theta)
    const double phi = std::atan2(u[1], u[0]);

    std::vector<double> out((L + 1) * (L + 1), 0.0);
    // pbar[m][l] built in place: pmm walks the diagonal
    std::vector<std::vector<double>> pbar(L + 1, std::vector<double>(L + 1, 0.0));
    double pmm = std::sqrt(1.0 / (4.0 * M_PI));
    for (int m = 0; m <= L; ++m) {
        if (m > 0) pmm *= s * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
        pbar[m][m] = pmm;
        if (m + 1 <= L) pbar[m][m + 1] = z * std::sqrt(2.0 * m + 3.0) * pmm;
        for (int l = m + 2; l <= L; ++l) {
            double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
            double b = std::sqrt((double(l - 1) * (l - 1) - double(m) * m) /
                                 (4.0 * double(l - 1) * (l - 1) - 1.0));
            pbar[m][l] = a * (z * pbar[m][l - 1] - b * pbar[m][l - 2]);
        }
    }
    const double r2 = std::sqrt(2.0);
    for (int l = 0; l <= L; ++l) {
        out[sph_index(l, 0)] = pbar[0][l];
        for (int m = 1; m <= l; ++m) {
            out[sph_index(l, m)] = r2 * pbar[m][l] * std::cos(m * phi);
            out[sph_index(l, -m)] = r2 * pbar[m][l] * std::sin(m * phi);
        }
    }
    return out;
}

/// Degree-l slice (2l+1 values, m = -l..l) of sph_harm_all.
inline Vector sph_harm_degree(int l, const Eigen::Vector3d& x) {
    auto all = sph_harm_all(l, x);
    Vector out(2 * l + 1);
    for (int m = -l; m <= l; ++m) out[m + l] = all[sph_index(l, m)];
    return out;
}

struct SphereGridPoint {
    Eigen::Vector3d x;
    double weight;
};

/// Gauss-Legendre in cos(theta) x uniform longitude on the unit sphere;
/// integrates spherical polynomials of degree <= min(2*n_theta - 1, n_phi - 1)
/// exactly.
inline std::vector<SphereGridPoint> sphere_polynomial_grid(int n_theta, int n_phi) {
    std::vector<double> gx, gw;
    gauss_legendre(n_theta, gx, gw);
    std::vector<SphereGridPoint> pts;
    pts.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i) {
        double z = gx[i];
        double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        double w = gw[i] * (2.0 * M_PI / n_phi);
        for (int j = 0; j < n_phi; ++j) {
            double ph = 2.0 * M_PI * j / n_phi;
            pts.push_back({Eigen::Vector3d(s * std::cos(ph), s * std::sin(ph), z), w});
        }
    }
    return pts;
}

/// Quadrature adapted to the wedge {z > 0, azimuth in [0, 2 pi / n)}:
/// Gauss-Legendre in colatitude over [0, pi/2] and in azimuth over the wedge
/// angle (the integrands here are analytic in both angles).
inline std::vector<SphereGridPoint> wedge_grid(int n, int n_theta, int n_phi) {
    std::vector<double> tx, tw, px, pw;
    gauss_legendre(n_theta, tx, tw);
    gauss_legendre(n_phi, px, pw);
    const double wedge = 2.0 * M_PI / n;
    std::vector<SphereGridPoint> pts;
    pts.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i) {
        double th = 0.25 * M_PI * (tx[i] + 1.0);
        double wt = 0.25 * M_PI * tw[i] * std::sin(th);
        for (int j = 0; j < n_phi; ++j) {
            double ph = 0.5 * wedge * (px[j] + 1.0);
            double w = wt * 0.5 * wedge * pw[j];
            pts.push_back({Eigen::Vector3d(std::sin(th) * std::cos(ph),
                                           std::sin(th) * std::sin(ph), std::cos(th)),
                           w});
        }
    }
    return pts;
}

}  // namespace surfframe
