#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "surfframe/errors.hpp"
#include "surfframe/rng.hpp"
#include "surfframe/spherical_harmonics.hpp"

namespace surfframe {

// ---------------------------------------------------------------------------
// Finite isometry groups acting on S^2 and the group-averaging projector
//   (P f)(x) = (1/#G) sum_{phi in G} f(phi x),
// diagonalized degree by degree in the real spherical-harmonic basis.
// ---------------------------------------------------------------------------

struct IsometryGroup {
    std::vector<Eigen::Matrix3d> elements;
    std::string name;

    int order() const { return static_cast<int>(elements.size()); }

    /// Orthogonality, identity membership, closure and inverses, all checked
    /// exhaustively at entry tolerance 1e-12.
    void validate() const {
        if (elements.empty()) throw GroupAxiomViolation("group: empty element list");
        auto find = [&](const Eigen::Matrix3d& m) {
            for (const auto& e : elements)
                if ((e - m).cwiseAbs().maxCoeff() < 1e-12) return true;
            return false;
        };
        for (const auto& e : elements)
            if ((e.transpose() * e - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-12)
                throw GroupAxiomViolation("group: non-orthogonal element");
        if (!find(Eigen::Matrix3d::Identity()))
            throw GroupAxiomViolation("group: identity missing");
        for (const auto& a : elements) {
            if (!find(a.transpose()))
                throw GroupAxiomViolation("group: inverse missing");
            for (const auto& b : elements)
                if (!find(a * b))
                    throw GroupAxiomViolation("group: not closed under products");
        }
    }
};

/// Dihedral group of order 2n: rotations by 2 pi k / n about the z-axis and
/// their compositions with the half-turn swapping the poles.
inline IsometryGroup dihedral_group(int n) {
    if (n < 2) throw Error("dihedral_group: n >= 2");
    IsometryGroup g;
    g.name = "dihedral-" + std::to_string(n);
    Eigen::Matrix3d tau;
    tau << 1, 0, 0, 0, -1, 0, 0, 0, -1;
    for (int k = 0; k < n; ++k) {
        double a = 2.0 * M_PI * k / n;
        Eigen::Matrix3d s;
        s << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
        g.elements.push_back(s);
        g.elements.push_back(s * tau);
    }
    g.validate();
    return g;
}

inline IsometryGroup cyclic_group(int n) {
    if (n < 1) throw Error("cyclic_group: n >= 1");
    IsometryGroup g;
    g.name = "cyclic-" + std::to_string(n);
    for (int k = 0; k < n; ++k) {
        double a = 2.0 * M_PI * k / n;
        Eigen::Matrix3d s;
        s << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
        g.elements.push_back(s);
    }
    g.validate();
    return g;
}

inline IsometryGroup trivial_group() {
    IsometryGroup g;
    g.name = "trivial";
    g.elements.push_back(Eigen::Matrix3d::Identity());
    return g;
}

/// Matrix of P restricted to the degree-l harmonic space, entries
/// <P Y_b, Y_a> by quadrature exact for degree-2l polynomials. The same grid
/// must reproduce the identity on the degree-l Gram, otherwise GridTooCoarse.
inline Matrix projector_matrix(const IsometryGroup& g, int l,
                               const std::vector<SphereGridPoint>& grid) {
    const int n = 2 * l + 1;
    Matrix P = Matrix::Zero(n, n);
    Matrix gram = Matrix::Zero(n, n);
    for (const auto& q : grid) {
        Vector y0 = sph_harm_degree(l, q.x);
        Vector yavg = Vector::Zero(n);
        for (const auto& e : g.elements) yavg += sph_harm_degree(l, e * q.x);
        yavg /= g.order();
        P += q.weight * y0 * yavg.transpose();
        gram += q.weight * y0 * y0.transpose();
    }
    if ((gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-9)
        throw GridTooCoarse("projector_matrix: grid does not resolve degree " +
                            std::to_string(l));
    return P;
}

inline Matrix projector_matrix(const IsometryGroup& g, int l) {
    return projector_matrix(g, l, sphere_polynomial_grid(l + 1, 2 * l + 2));
}

struct FixedSubspace {
    Matrix basis;  // (2l+1) x dim, orthonormal eigenvalue-1 eigenvectors
    int dim = 0;
};

/// Eigendecompose a symmetric idempotent; eigenvalues must cluster at {0,1}
/// (anything inside [0.01, 0.99] flags a broken projector).
inline FixedSubspace fixed_subspace(const Matrix& P) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(P);
    const Vector& ev = es.eigenvalues();
    FixedSubspace out;
    std::vector<int> ones;
    for (int i = 0; i < ev.size(); ++i) {
        if (ev[i] >= 0.01 && ev[i] <= 0.99)
            throw NotIdempotent("fixed_subspace: eigenvalue " + std::to_string(ev[i]) +
                                " inside the forbidden band [0.01, 0.99]");
        if (ev[i] > 0.99) ones.push_back(i);
    }
    out.dim = static_cast<int>(ones.size());
    out.basis.resize(P.rows(), out.dim);
    for (int c = 0; c < out.dim; ++c) out.basis.col(c) = es.eigenvectors().col(ones[c]);
    return out;
}

/// Per-degree projector matrices and their fixed subspaces up to L_max.
struct ProjectedEigenbasis {
    int l_max = 0;
    std::vector<Matrix> projectors;       // per degree
    std::vector<FixedSubspace> fixed;     // per degree
    std::vector<int> dims;                // d_l

    int total_dim() const {
        int t = 0;
        for (int v : dims) t += v;
        return t;
    }
};

inline ProjectedEigenbasis build_projected_eigenbasis(const IsometryGroup& g, int l_max) {
    ProjectedEigenbasis out;
    out.l_max = l_max;
    for (int l = 0; l <= l_max; ++l) {
        Matrix P = projector_matrix(g, l);
        auto fs = fixed_subspace(P);
        double tr = P.trace();
        if (std::abs(tr - std::round(tr)) > 1e-6)
            throw NotIdempotent("projector trace " + std::to_string(tr) +
                                " is not within 1e-6 of an integer");
        if (static_cast<int>(std::llround(tr)) != fs.dim)
            throw NotIdempotent("projector trace disagrees with the fixed dimension");
        out.projectors.push_back(std::move(P));
        out.dims.push_back(fs.dim);
        out.fixed.push_back(std::move(fs));
    }
    return out;
}

/// Character of the degree-l action of one isometry, evaluated by quadrature
/// (trace of the projector-free rotation matrix on the degree-l space).
inline double degree_character(const Eigen::Matrix3d& phi, int l,
                               const std::vector<SphereGridPoint>& grid) {
    double tr = 0;
    for (const auto& q : grid) {
        Vector y0 = sph_harm_degree(l, q.x);
        Vector yr = sph_harm_degree(l, phi * q.x);
        tr += q.weight * y0.dot(yr);
    }
    return tr;
}

/// Fixed-space dimension by the averaged-character formula, the independent
/// route to d_l.
inline double trace_formula_dimension(const IsometryGroup& g, int l) {
    auto grid = sphere_polynomial_grid(l + 1, 2 * l + 2);
    double acc = 0;
    for (const auto& e : g.elements) acc += degree_character(e, l, grid);
    return acc / g.order();
}

// ---------------------------------------------------------------------------
// Fundamental domains and tiling.
// ---------------------------------------------------------------------------

struct WedgeDomain {
    std::string kind;
    std::function<bool(const Eigen::Vector3d&)> indicator;
    double nominal_area = 0;
    int wedge_n = 0;  // > 0 for hemisphere wedges
};

/// Wedge of the upper hemisphere with azimuth in [0, 2 pi / n); half-open so
/// boundary points are never double counted.
inline WedgeDomain hemisphere_wedge(int n) {
    if (n < 1) throw Error("hemisphere_wedge: n >= 1");
    WedgeDomain d;
    d.kind = "hemisphere-wedge";
    d.wedge_n = n;
    d.nominal_area = 2.0 * M_PI / n;
    d.indicator = [n](const Eigen::Vector3d& x) {
        if (x[2] <= 0.0) return false;
        double ph = std::atan2(x[1], x[0]);
        if (ph < 0) ph += 2.0 * M_PI;
        return ph < 2.0 * M_PI / n;
    };
    return d;
}

inline WedgeDomain full_sphere_domain() {
    WedgeDomain d;
    d.kind = "full-sphere";
    d.nominal_area = 4.0 * M_PI;
    d.indicator = [](const Eigen::Vector3d&) { return true; };
    return d;
}

struct TilingReport {
    bool pass = false;
    double max_pair_overlap = 0;  // fraction of samples in phi1 D ∩ phi2 D
    double coverage = 0;          // fraction of samples in U phi D
    int samples = 0;
};

/// Monte-Carlo style tiling audit on a quasi-uniform sample: translates of D
/// under G must cover S^2 with negligible pairwise overlap.
inline TilingReport tiling_check(const WedgeDomain& dom, const IsometryGroup& g,
                                 int samples = 100000) {
    samples = std::max(samples, 100000);
    TilingReport rep;
    rep.samples = samples;
    const int ng = g.order();
    std::vector<long> pair_overlap(static_cast<std::size_t>(ng) * ng, 0);
    long covered = 0;
    const double ga = M_PI * (3.0 - std::sqrt(5.0));
    std::vector<char> in(ng);
    for (int i = 0; i < samples; ++i) {
        double z = 1.0 - 2.0 * (i + 0.5) / samples;
        double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
        double th = ga * i;
        Eigen::Vector3d x(rr * std::cos(th), rr * std::sin(th), z);
        int hits = 0;
        for (int a = 0; a < ng; ++a) {
            // x in phi D  <=>  phi^T x in D
            in[a] = dom.indicator(g.elements[a].transpose() * x) ? 1 : 0;
            hits += in[a];
        }
        if (hits > 0) ++covered;
        if (hits > 1)
            for (int a = 0; a < ng; ++a)
                for (int b = a + 1; b < ng; ++b)
                    if (in[a] && in[b]) ++pair_overlap[a * ng + b];
    }
    long worst = 0;
    for (long v : pair_overlap) worst = std::max(worst, v);
    rep.max_pair_overlap = double(worst) / samples;
    rep.coverage = double(covered) / samples;
    rep.pass = rep.max_pair_overlap < 1e-3 && rep.coverage > 1.0 - 1e-3;
    return rep;
}

// ---------------------------------------------------------------------------
// Orthogonality and completeness of the fixed basis over the domain.
// ---------------------------------------------------------------------------

struct BasisVerification {
    double gram_offdiag_max = 0;
    Vector gram_diagonal;          // expected ~ 1/#G for unit-norm eigenfunctions
    double max_reconstruction_error = 0;
    double invariance_max = 0;     // max |e(phi x) - e(x)| over samples
    int basis_size = 0;
};

/// Gram over D of the fixed functions up to L_max (wedge-adapted quadrature),
/// plus a reconstruction test on projected random band-limited functions.
inline BasisVerification verify_basis(const WedgeDomain& dom, const IsometryGroup& g,
                                      const ProjectedEigenbasis& basis, int trials,
                                      std::uint64_t seed = 1) {
    if (dom.wedge_n <= 0 && dom.kind != "full-sphere")
        throw Error("verify_basis: adapted quadrature available for wedge domains only");
    const int L = basis.l_max;
    const int nb = basis.total_dim();
    BasisVerification rep;
    rep.basis_size = nb;
    if (nb == 0) return rep;

    auto grid = (dom.wedge_n > 0)
                    ? wedge_grid(dom.wedge_n, std::max(48, 2 * L + 16), std::max(48, 2 * L + 16))
                    : sphere_polynomial_grid(L + 1, 2 * L + 2);

    // values of every fixed basis function at the domain quadrature points
    Matrix vals(nb, static_cast<int>(grid.size()));
    {
        int col = 0;
        for (const auto& q : grid) {
            auto all = sph_harm_all(L, q.x);
            int rowi = 0;
            for (int l = 0; l <= L; ++l) {
                const auto& fs = basis.fixed[l];
                for (int c = 0; c < fs.dim; ++c, ++rowi) {
                    double acc = 0;
                    for (int m = -l; m <= l; ++m)
                        acc += fs.basis(m + l, c) * all[sph_index(l, m)];
                    vals(rowi, col) = acc;
                }
            }
            ++col;
        }
    }
    Vector w(static_cast<int>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) w[static_cast<int>(i)] = grid[i].weight;
    Matrix gram = vals * w.asDiagonal() * vals.transpose();
    rep.gram_diagonal = gram.diagonal();
    for (int a = 0; a < nb; ++a)
        for (int b = 0; b < nb; ++b)
            if (a != b) rep.gram_offdiag_max = std::max(rep.gram_offdiag_max,
                                                        std::abs(gram(a, b)));

    // completeness: project random degree-<=L coefficient vectors, expand over
    // the fixed basis on D, measure the residual in L^2(D)
    auto rng = make_rng(seed, 77);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < trials; ++t) {
        Vector fvals = Vector::Zero(static_cast<int>(grid.size()));
        // f = sum_l P_l c_l in harmonic coordinates
        std::vector<Vector> coeff(L + 1);
        for (int l = 0; l <= L; ++l) {
            Vector c(2 * l + 1);
            for (int i = 0; i < c.size(); ++i) c[i] = gauss(rng);
            coeff[l] = basis.projectors[l] * c;
        }
        int col = 0;
        for (const auto& q : grid) {
            auto all = sph_harm_all(L, q.x);
            double acc = 0;
            for (int l = 0; l <= L; ++l)
                for (int m = -l; m <= l; ++m)
                    acc += coeff[l][m + l] * all[sph_index(l, m)];
            fvals[col++] = acc;
        }
        double fnorm2 = fvals.cwiseAbs2().dot(w);
        if (fnorm2 < 1e-14) continue;
        // expansion coefficients against the (orthogonal, not normalized) basis
        Vector proj = vals * (w.asDiagonal() * fvals);
        Vector recon_coeff(nb);
        for (int i = 0; i < nb; ++i) recon_coeff[i] = proj[i] / gram(i, i);
        Vector resid = fvals - vals.transpose() * recon_coeff;
        double err = std::sqrt(resid.cwiseAbs2().dot(w) / fnorm2);
        rep.max_reconstruction_error = std::max(rep.max_reconstruction_error, err);
    }

    // G-invariance of each basis function on a deterministic sample
    auto sample_dirs = detail::unit_directions(3, 1000);
    for (int l = 0, rowi = 0; l <= L; ++l) {
        const auto& fs = basis.fixed[l];
        for (int c = 0; c < fs.dim; ++c, ++rowi) {
            for (const auto& u : sample_dirs) {
                Eigen::Vector3d x(u[0], u[1], u[2]);
                Vector y = sph_harm_degree(l, x);
                double ex = y.dot(fs.basis.col(c));
                for (const auto& e : g.elements) {
                    Vector yr = sph_harm_degree(l, e * x);
                    rep.invariance_max = std::max(rep.invariance_max,
                                                  std::abs(yr.dot(fs.basis.col(c)) - ex));
                }
            }
        }
    }
    return rep;
}

}  // namespace surfframe
