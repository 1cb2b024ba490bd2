#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "surfframe/errors.hpp"
#include "surfframe/geometry.hpp"

namespace surfframe {

/// Gauss-Legendre nodes/weights on [-1, 1] (Newton on the Legendre recurrence).
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
}

/// One uniform-midpoint axis of a tensor-product grid: nodes at
/// offset-contribution t_j = (j + 1/2) * step along `dir`, j = 0..n-1.
struct GridAxis {
    Vector dir;   // unit vector in R^d
    double step;  // node spacing (= side / n)
    int n;
};

/// A tensor-product block: corner + midpoint grid over each axis. The weight
/// of a node is the product of the axis steps.
struct ProductBlock {
    Vector corner;
    std::vector<GridAxis> axes;
};

/// Structure tags letting Fourier sums use closed-form factorizations and
/// letting the measure re-render itself at a finer resolution.
struct CircleStructure {
    Vector center;
    double radius = 1.0;
    int n = 0;
};

struct Sphere3Structure {
    Vector center;
    double radius = 1.0;
};

/// Weighted point cloud approximating a surface measure. Points/weights are
/// always materialized; `blocks`/`circle` carry the generating structure when
/// the measure came from facet or circle quadrature.
struct QuadratureMeasure {
    Eigen::MatrixXd points;  // n x d
    Vector weights;          // n, strictly positive
    double total_mass = 0;
    std::string provenance;
    double resolution = 0;  // nodes per unit length

    std::vector<ProductBlock> blocks;       // nonempty for facet grids
    std::vector<CircleStructure> circles;   // nonempty for d=2 sphere grids
    std::vector<Sphere3Structure> spheres;  // nonempty for d=3 sphere grids

    int dim() const { return static_cast<int>(points.cols()); }
    int size() const { return static_cast<int>(points.rows()); }

    void validate() const {
        if (weights.size() != points.rows()) throw Error("measure: weight/point mismatch");
        if (weights.minCoeff() <= 0) throw Error("measure: nonpositive weight");
        double s = weights.sum();
        if (std::abs(s - total_mass) > 1e-12 * std::max(1.0, std::abs(total_mass)))
            throw Error("measure: weights do not sum to total mass");
    }

    /// Concatenate another measure over the same ambient space.
    void append(const QuadratureMeasure& other) {
        if (other.dim() != dim()) throw Error("measure append: dimension mismatch");
        Eigen::MatrixXd pts(size() + other.size(), dim());
        pts.topRows(size()) = points;
        pts.bottomRows(other.size()) = other.points;
        Vector w(weights.size() + other.weights.size());
        w.head(weights.size()) = weights;
        w.tail(other.weights.size()) = other.weights;
        points = std::move(pts);
        weights = std::move(w);
        total_mass += other.total_mass;
        resolution = std::min(resolution, other.resolution);
        provenance += "+" + other.provenance;
        blocks.insert(blocks.end(), other.blocks.begin(), other.blocks.end());
        circles.insert(circles.end(), other.circles.begin(), other.circles.end());
        spheres.insert(spheres.end(), other.spheres.begin(), other.spheres.end());
    }
};

/// Uniform midpoint tensor grid over a facet; weights sum to its k-volume.
inline QuadratureMeasure facet_quadrature(const Facet& f, double resolution) {
    if (resolution < 2.0)
        throw ResolutionTooLow("facet_quadrature: need >= 2 nodes per unit length");
    const int k = f.dim();
    const int d = f.ambient_dim();

    std::vector<int> counts(k);
    std::vector<double> steps(k);
    long total = 1;
    for (int i = 0; i < k; ++i) {
        counts[i] = std::max(1, static_cast<int>(std::ceil(resolution * f.sides[i])));
        steps[i] = f.sides[i] / counts[i];
        total *= counts[i];
    }

    QuadratureMeasure mu;
    mu.points.resize(total, d);
    mu.weights.resize(total);
    double w0 = 1.0;
    for (int i = 0; i < k; ++i) w0 *= steps[i];

    std::vector<int> idx(k, 0);
    for (long row = 0; row < total; ++row) {
        Vector p = f.subspace.offset;
        for (int i = 0; i < k; ++i)
            p += (idx[i] + 0.5) * steps[i] * f.subspace.basis.col(i);
        mu.points.row(row) = p.transpose();
        mu.weights[row] = w0;
        for (int i = 0; i < k; ++i) {
            if (++idx[i] < counts[i]) break;
            idx[i] = 0;
        }
    }
    mu.total_mass = f.volume();
    // mass is exact by construction; keep the stored value analytic
    mu.provenance = "facet grid";
    mu.resolution = resolution;

    ProductBlock blk;
    blk.corner = f.subspace.offset;
    for (int i = 0; i < k; ++i)
        blk.axes.push_back(GridAxis{f.subspace.basis.col(i), steps[i], counts[i]});
    mu.blocks.push_back(std::move(blk));
    return mu;
}

/// Surface measure of the boundary of a polytope given by its facets.
inline QuadratureMeasure surface_quadrature(const std::vector<Facet>& facets, double resolution) {
    if (facets.empty()) throw Error("surface_quadrature: no facets");
    QuadratureMeasure mu = facet_quadrature(facets.front(), resolution);
    for (std::size_t i = 1; i < facets.size(); ++i)
        mu.append(facet_quadrature(facets[i], resolution));
    mu.provenance = "facet grid";
    return mu;
}

/// Sphere surface measure: uniform angles for d=2, Gauss-Legendre in
/// colatitude x uniform longitude for d=3. Total mass is exact (2*pi*r, 4*pi*r^2).
inline QuadratureMeasure sphere_quadrature(int d, double radius, double resolution,
                                           const Vector& center = Vector()) {
    if (d != 2 && d != 3)
        throw UnsupportedDimension("sphere_quadrature: d in {2,3} only");
    if (!(radius > 0)) throw Error("sphere_quadrature: radius must be positive");
    Vector c = center.size() ? center : Vector::Zero(d);
    if (c.size() != d) throw Error("sphere_quadrature: center dimension mismatch");

    QuadratureMeasure mu;
    mu.resolution = resolution;
    if (d == 2) {
        int n = std::max(8, static_cast<int>(std::ceil(resolution * 2.0 * M_PI * radius)));
        mu.points.resize(n, 2);
        mu.weights = Vector::Constant(n, 2.0 * M_PI * radius / n);
        for (int i = 0; i < n; ++i) {
            double th = 2.0 * M_PI * i / n;
            mu.points(i, 0) = c[0] + radius * std::cos(th);
            mu.points(i, 1) = c[1] + radius * std::sin(th);
        }
        mu.total_mass = 2.0 * M_PI * radius;
        mu.provenance = "circle arc";
        mu.circles.push_back(CircleStructure{c, radius, n});
    } else {
        int ntheta = std::max(6, static_cast<int>(std::ceil(resolution * M_PI * radius)));
        int nphi = std::max(12, 2 * ntheta);
        std::vector<double> gx, gw;
        gauss_legendre(ntheta, gx, gw);  // in u = cos(theta)
        mu.points.resize(static_cast<long>(ntheta) * nphi, 3);
        mu.weights.resize(static_cast<long>(ntheta) * nphi);
        long row = 0;
        for (int i = 0; i < ntheta; ++i) {
            double u = gx[i];
            double s = std::sqrt(std::max(0.0, 1.0 - u * u));
            double w = radius * radius * gw[i] * (2.0 * M_PI / nphi);
            for (int j = 0; j < nphi; ++j) {
                double ph = 2.0 * M_PI * j / nphi;
                mu.points(row, 0) = c[0] + radius * s * std::cos(ph);
                mu.points(row, 1) = c[1] + radius * s * std::sin(ph);
                mu.points(row, 2) = c[2] + radius * u;
                mu.weights[row] = w;
                ++row;
            }
        }
        mu.total_mass = 4.0 * M_PI * radius * radius;
        mu.provenance = "sphere grid";
        mu.spheres.push_back(Sphere3Structure{c, radius});
    }
    return mu;
}

/// Re-render the measure at a finer resolution (factor > 1). Only possible
/// when the generating structure is known.
inline QuadratureMeasure refine_measure(const QuadratureMeasure& mu, double factor) {
    QuadratureMeasure out;
    bool first = true;
    double res = mu.resolution * factor;
    for (const auto& blk : mu.blocks) {
        int k = static_cast<int>(blk.axes.size());
        Matrix basis(blk.corner.size(), k);
        Vector sides(k);
        for (int i = 0; i < k; ++i) {
            basis.col(i) = blk.axes[i].dir;
            sides[i] = blk.axes[i].step * blk.axes[i].n;
        }
        Facet f(AffineSubspace(basis, blk.corner), sides);
        QuadratureMeasure part = facet_quadrature(f, res);
        if (first) { out = std::move(part); first = false; }
        else out.append(part);
    }
    for (const auto& circ : mu.circles) {
        QuadratureMeasure part = sphere_quadrature(2, circ.radius, res, circ.center);
        if (first) { out = std::move(part); first = false; }
        else out.append(part);
    }
    for (const auto& sph : mu.spheres) {
        QuadratureMeasure part = sphere_quadrature(3, sph.radius, res, sph.center);
        if (first) { out = std::move(part); first = false; }
        else out.append(part);
    }
    if (first) throw Error("refine_measure: measure carries no generating structure");
    out.provenance = mu.provenance;
    return out;
}

}  // namespace surfframe
