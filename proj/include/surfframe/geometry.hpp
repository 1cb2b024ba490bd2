#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "surfframe/errors.hpp"
#include "surfframe/rng.hpp"

namespace surfframe {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

namespace detail {

// Dense two-phase primal simplex with Bland's rule, for the tiny LPs behind
// the polytope gauge:  minimize 1.y  s.t.  A y = b, y >= 0.
// Returns nullopt when infeasible.
inline std::optional<double> simplex_min_sum(Matrix A, Vector b) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    for (int i = 0; i < m; ++i) {
        if (b[i] < 0) { A.row(i) *= -1.0; b[i] *= -1.0; }
    }
    // columns: [original | artificial identity]
    Matrix T(m, n + m);
    T.leftCols(n) = A;
    T.rightCols(m) = Matrix::Identity(m, m);
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    Vector rhs = b;
    auto run_phase = [&](const Vector& cost, int ncols) -> double {
        const double tol = 1e-11;
        for (std::int64_t iter = 0;; ++iter) {
            if (iter > 100000) throw Error("simplex: iteration limit");
            // reduced costs via basis cost vector
            Vector cb(m);
            for (int i = 0; i < m; ++i) cb[i] = cost[basis[i]];
            int enter = -1;
            for (int j = 0; j < ncols; ++j) {
                bool in_basis = false;
                for (int i = 0; i < m; ++i) if (basis[i] == j) { in_basis = true; break; }
                if (in_basis) continue;
                double red = cost[j] - cb.dot(T.col(j));
                if (red < -tol) { enter = j; break; }  // Bland: first improving index
            }
            if (enter < 0) break;
            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                double a = T(i, enter);
                if (a > tol) {
                    double ratio = rhs[i] / a;
                    if (ratio < best - tol ||
                        (ratio < best + tol && (leave < 0 || basis[i] < basis[leave]))) {
                        best = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) return -std::numeric_limits<double>::infinity();  // unbounded
            double piv = T(leave, enter);
            T.row(leave) /= piv;
            rhs[leave] /= piv;
            for (int i = 0; i < m; ++i) {
                if (i == leave) continue;
                double f = T(i, enter);
                if (f != 0.0) { T.row(i) -= f * T.row(leave); rhs[i] -= f * rhs[leave]; }
            }
            basis[leave] = enter;
        }
        double v = 0;
        for (int i = 0; i < m; ++i) v += cost[basis[i]] * rhs[i];
        return v;
    };

    Vector phase1 = Vector::Zero(n + m);
    phase1.tail(m).setOnes();
    double art = run_phase(phase1, n + m);
    if (art > 1e-8) return std::nullopt;  // infeasible

    // drive any leftover artificial out of the basis if possible; if its row is
    // all-zero over original columns the constraint is redundant and stays.
    for (int i = 0; i < m; ++i) {
        if (basis[i] >= n) {
            for (int j = 0; j < n; ++j) {
                if (std::abs(T(i, j)) > 1e-9) {
                    double piv = T(i, j);
                    T.row(i) /= piv; rhs[i] /= piv;
                    for (int k = 0; k < m; ++k) {
                        if (k == i) continue;
                        double f = T(k, j);
                        if (f != 0.0) { T.row(k) -= f * T.row(i); rhs[k] -= f * rhs[i]; }
                    }
                    basis[i] = j;
                    break;
                }
            }
        }
    }
    Vector phase2 = Vector::Zero(n + m);
    phase2.head(n).setOnes();
    // forbid artificials from re-entering
    for (int j = n; j < n + m; ++j) phase2[j] = 1e30;
    return run_phase(phase2, n + m);
}

/// Orthonormal basis of the orthogonal complement of col(basis).
inline Matrix perp_basis(const Matrix& basis) {
    const int d = static_cast<int>(basis.rows());
    const int k = static_cast<int>(basis.cols());
    if (k >= d) return Matrix(d, 0);
    Eigen::HouseholderQR<Matrix> qr(basis);
    Matrix Q = qr.householderQ();
    return Q.rightCols(d - k);
}

/// Deterministic quasi-uniform unit directions (dense circle for d=2,
/// Fibonacci sphere for d=3, seeded Gaussian otherwise).
inline std::vector<Vector> unit_directions(int d, int n) {
    std::vector<Vector> out;
    out.reserve(n);
    if (d == 2) {
        for (int i = 0; i < n; ++i) {
            double th = 2.0 * M_PI * i / n;
            Vector u(2); u << std::cos(th), std::sin(th);
            out.push_back(u);
        }
    } else if (d == 3) {
        const double ga = M_PI * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < n; ++i) {
            double z = 1.0 - 2.0 * (i + 0.5) / n;
            double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
            double th = ga * i;
            Vector u(3); u << rr * std::cos(th), rr * std::sin(th), z;
            out.push_back(u);
        }
    } else {
        auto rng = make_rng(0xd1ec7u, static_cast<std::uint64_t>(d));
        std::normal_distribution<double> g;
        for (int i = 0; i < n; ++i) {
            Vector u(d);
            do { for (int j = 0; j < d; ++j) u[j] = g(rng); } while (u.norm() < 1e-12);
            out.push_back(u.normalized());
        }
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Convex bodies: gauge (Minkowski functional) and support function.
// ---------------------------------------------------------------------------

class ConvexBody {
  public:
    enum class Kind { Ball, Ellipsoid, PolytopeHull };

    static ConvexBody ball(int dim, double radius) {
        if (dim < 2) throw InvalidBody("ball: dimension must be >= 2");
        if (!(radius > 0)) throw InvalidBody("ball: radius must be positive");
        ConvexBody b;
        b.kind_ = Kind::Ball;
        b.dim_ = dim;
        b.semi_axes_ = Vector::Constant(dim, radius);
        return b;
    }

    static ConvexBody ellipsoid(const Vector& semi_axes) {
        if (semi_axes.size() < 2) throw InvalidBody("ellipsoid: dimension must be >= 2");
        if ((semi_axes.array() <= 0).any())
            throw InvalidBody("ellipsoid: all semi-axes must be strictly positive");
        ConvexBody b;
        b.kind_ = Kind::Ellipsoid;
        b.dim_ = static_cast<int>(semi_axes.size());
        b.semi_axes_ = semi_axes;
        return b;
    }

    static ConvexBody polytope_hull(std::vector<Vector> vertices) {
        if (vertices.empty()) throw InvalidBody("polytope_hull: no vertices");
        const int d = static_cast<int>(vertices.front().size());
        if (d < 2) throw InvalidBody("polytope_hull: dimension must be >= 2");
        for (const auto& v : vertices)
            if (v.size() != d) throw InvalidBody("polytope_hull: mixed dimensions");
        ConvexBody b;
        b.kind_ = Kind::PolytopeHull;
        b.dim_ = d;
        b.vertices_ = std::move(vertices);
        // origin must be interior: the support function has to be positive in
        // every direction (checked on a dense direction sample).
        for (const auto& u : detail::unit_directions(d, d == 2 ? 4096 : 8192)) {
            if (b.support(u) <= 1e-10)
                throw InvalidBody("polytope_hull: origin not in the interior");
        }
        return b;
    }

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    const Vector& semi_axes() const { return semi_axes_; }
    const std::vector<Vector>& vertices() const { return vertices_; }

    /// Support function rho*(xi) = sup_{x in K} x.xi. Exact for all three kinds.
    double support(const Vector& xi) const {
        switch (kind_) {
            case Kind::Ball:
                return semi_axes_[0] * xi.norm();
            case Kind::Ellipsoid: {
                double s = 0;
                for (int i = 0; i < dim_; ++i) s += semi_axes_[i] * semi_axes_[i] * xi[i] * xi[i];
                return std::sqrt(s);
            }
            case Kind::PolytopeHull: {
                double best = -std::numeric_limits<double>::infinity();
                for (const auto& v : vertices_) best = std::max(best, v.dot(xi));
                return best;
            }
        }
        return 0;
    }

    /// Gauge rho(x) = inf{t > 0 : x/t in K}. For the hull this is the optimum
    /// of a small LP (min sum of barycentric weights reproducing x).
    double gauge(const Vector& x) const {
        if (x.norm() == 0) return 0;
        switch (kind_) {
            case Kind::Ball:
                return x.norm() / semi_axes_[0];
            case Kind::Ellipsoid: {
                double s = 0;
                for (int i = 0; i < dim_; ++i) {
                    double q = x[i] / semi_axes_[i];
                    s += q * q;
                }
                return std::sqrt(s);
            }
            case Kind::PolytopeHull: {
                Matrix A(dim_, static_cast<int>(vertices_.size()));
                for (int j = 0; j < A.cols(); ++j) A.col(j) = vertices_[j];
                auto v = detail::simplex_min_sum(A, x);
                if (!v) throw InvalidBody("gauge: point outside the vertex cone (origin not interior?)");
                return *v;
            }
        }
        return 0;
    }

    /// Radii of the largest origin-centered inscribed ball and the smallest
    /// circumscribed one. Closed form except the hull inradius, which is a
    /// dense direction-sample minimum of the support function.
    std::pair<double, double> in_out_radii() const {
        switch (kind_) {
            case Kind::Ball:
                return {semi_axes_[0], semi_axes_[0]};
            case Kind::Ellipsoid:
                return {semi_axes_.minCoeff(), semi_axes_.maxCoeff()};
            case Kind::PolytopeHull: {
                double rout = 0;
                for (const auto& v : vertices_) rout = std::max(rout, v.norm());
                double rin = std::numeric_limits<double>::infinity();
                for (const auto& u : detail::unit_directions(dim_, dim_ == 2 ? 8192 : 16384))
                    rin = std::min(rin, support(u));
                return {rin, rout};
            }
        }
        return {0, 0};
    }

    /// C_K >= 1 with |x|/C_K <= rho*(x) <= C_K |x|.
    double sandwich_constant() const {
        auto [rin, rout] = in_out_radii();
        return std::max({1.0, rout, 1.0 / rin});
    }

  private:
    ConvexBody() = default;
    Kind kind_ = Kind::Ball;
    int dim_ = 0;
    Vector semi_axes_;
    std::vector<Vector> vertices_;
};

inline double minkowski_functional(const ConvexBody& body, const Vector& x) {
    return body.gauge(x);
}

inline double dual_norm(const ConvexBody& body, const Vector& xi) {
    return body.support(xi);
}

// ---------------------------------------------------------------------------
// Affine subspaces, facets, classification.
// ---------------------------------------------------------------------------

struct AffineSubspace {
    Matrix basis;   // d x k, orthonormal columns
    Vector offset;  // point in R^d

    AffineSubspace(Matrix basis_, Vector offset_)
        : basis(std::move(basis_)), offset(std::move(offset_)) {
        const int d = static_cast<int>(basis.rows());
        const int k = static_cast<int>(basis.cols());
        if (k < 1 || k > d) throw Error("AffineSubspace: need 0 < k <= d");
        if (offset.size() != d) throw Error("AffineSubspace: offset dimension mismatch");
        Matrix gram = basis.transpose() * basis;
        if ((gram - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-12)
            throw Error("AffineSubspace: basis not orthonormal to 1e-12");
    }

    int ambient_dim() const { return static_cast<int>(basis.rows()); }
    int dim() const { return static_cast<int>(basis.cols()); }
};

/// Orthogonal projection onto the direction space spanned by the (orthonormal)
/// columns of `basis`.
inline Vector project(const Matrix& basis, const Vector& x) {
    return basis * (basis.transpose() * x);
}

inline Vector project(const AffineSubspace& v, const Vector& x) {
    return project(v.basis, x);
}

/// One axis-aligned box piece of a surface: point set
///   {offset + sum_i t_i b_i : 0 <= t_i <= side_i}.
struct Facet {
    AffineSubspace subspace;
    Vector sides;        // k strictly positive side lengths
    Vector translation;  // canonical position tag: the facet centroid
    int class_id = -1;   // filled by classify_facets

    Facet(AffineSubspace sub, Vector sides_)
        : subspace(std::move(sub)), sides(std::move(sides_)) {
        if (sides.size() != subspace.dim())
            throw DegenerateFacet("facet: sides/basis rank mismatch");
        if (sides.minCoeff() < 1e-12)
            throw DegenerateFacet("facet: side length below 1e-12");
        translation = centroid();
    }

    int ambient_dim() const { return subspace.ambient_dim(); }
    int dim() const { return subspace.dim(); }

    Vector centroid() const {
        Vector c = subspace.offset;
        for (int i = 0; i < dim(); ++i) c += 0.5 * sides[i] * subspace.basis.col(i);
        return c;
    }

    /// All 2^k corners.
    std::vector<Vector> corner_points() const {
        const int k = dim();
        std::vector<Vector> out;
        out.reserve(std::size_t(1) << k);
        for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
            Vector p = subspace.offset;
            for (int i = 0; i < k; ++i)
                if (mask & (1u << i)) p += sides[i] * subspace.basis.col(i);
            out.push_back(p);
        }
        return out;
    }

    double volume() const { return sides.prod(); }
};

struct FacetClass {
    Matrix direction;                 // d x k orthonormal basis of V_j
    Matrix perp;                      // d x (d-k) orthonormal basis of V_j^perp
    Vector ref_sides;                 // side lengths of the reference box
    Matrix ref_basis;                 // basis the reference box is laid out in
    std::vector<Vector> translations; // centroid of each member facet
    std::vector<int> members;         // indices into the input facet list
    bool perp_projections_distinct = true;

    int dim() const { return static_cast<int>(direction.cols()); }
    int ambient_dim() const { return static_cast<int>(direction.rows()); }
    int size() const { return static_cast<int>(members.size()); }
};

struct FacetClassification {
    std::vector<FacetClass> classes;
    int ambient_dim = 0;
    bool hypothesis_ok = true;              // no lower-dim direction space sits inside a higher-dim one
    std::vector<std::string> violations;

    int num_classes() const { return static_cast<int>(classes.size()); }
    int max_class_size() const {
        int m = 0;
        for (const auto& c : classes) m = std::max(m, c.size());
        return m;
    }
};

namespace detail {

inline bool same_direction_space(const Matrix& a, const Matrix& b, double tol = 1e-9) {
    if (a.cols() != b.cols()) return false;
    Matrix pa = a * a.transpose();
    Matrix pb = b * b.transpose();
    return (pa - pb).cwiseAbs().maxCoeff() < tol;
}

/// True when col(inner) is contained in col(outer).
inline bool direction_contained(const Matrix& inner, const Matrix& outer, double tol = 1e-9) {
    Matrix res = inner - outer * (outer.transpose() * inner);
    return res.cwiseAbs().maxCoeff() < tol;
}

inline std::vector<Vector> centered_sorted_corners(const Facet& f) {
    Vector c = f.centroid();
    auto pts = f.corner_points();
    for (auto& p : pts) p -= c;
    std::sort(pts.begin(), pts.end(), [](const Vector& x, const Vector& y) {
        for (int i = 0; i < x.size(); ++i) {
            if (x[i] < y[i] - 1e-12) return true;
            if (x[i] > y[i] + 1e-12) return false;
        }
        return false;
    });
    return pts;
}

inline bool translate_equivalent(const Facet& a, const Facet& b) {
    if (!same_direction_space(a.subspace.basis, b.subspace.basis)) return false;
    auto pa = centered_sorted_corners(a);
    auto pb = centered_sorted_corners(b);
    if (pa.size() != pb.size()) return false;
    for (std::size_t i = 0; i < pa.size(); ++i)
        if ((pa[i] - pb[i]).cwiseAbs().maxCoeff() > 1e-9) return false;
    return true;
}

}  // namespace detail

/// Partition facets into translate-equivalence classes; validate the two
/// structural hypotheses of the frame construction. With `enforce` set the
/// dimension-nesting violation (a lower-dimensional piece whose direction
/// space translates into a higher-dimensional one) throws HypothesisViolation.
inline FacetClassification classify_facets(const std::vector<Facet>& facets,
                                           bool enforce = true) {
    if (facets.empty()) throw Error("classify_facets: empty facet list");
    FacetClassification out;
    out.ambient_dim = facets.front().ambient_dim();
    for (const auto& f : facets)
        if (f.ambient_dim() != out.ambient_dim)
            throw Error("classify_facets: mixed ambient dimensions");

    for (int idx = 0; idx < static_cast<int>(facets.size()); ++idx) {
        const Facet& f = facets[idx];
        int found = -1;
        for (int c = 0; c < out.num_classes(); ++c) {
            const Facet& ref = facets[out.classes[c].members.front()];
            if (detail::translate_equivalent(ref, f)) { found = c; break; }
        }
        if (found < 0) {
            FacetClass cls;
            cls.direction = f.subspace.basis;
            cls.perp = detail::perp_basis(f.subspace.basis);
            cls.ref_sides = f.sides;
            cls.ref_basis = f.subspace.basis;
            out.classes.push_back(std::move(cls));
            found = out.num_classes() - 1;
        }
        out.classes[found].members.push_back(idx);
        out.classes[found].translations.push_back(f.centroid());
    }

    // perp-projection distinctness inside each class (needed by the phase-set
    // construction; equivalently: parallel members lie in distinct affine planes)
    for (auto& cls : out.classes) {
        for (std::size_t a = 0; a + 1 < cls.translations.size() && cls.perp_projections_distinct; ++a)
            for (std::size_t b = a + 1; b < cls.translations.size(); ++b) {
                Vector da = cls.perp.transpose() * cls.translations[a];
                Vector db = cls.perp.transpose() * cls.translations[b];
                if ((da - db).cwiseAbs().maxCoeff() < 1e-9) {
                    cls.perp_projections_distinct = false;
                    break;
                }
            }
    }

    // nesting hypothesis: no lower-dimensional class direction inside a
    // higher-dimensional one
    for (int a = 0; a < out.num_classes(); ++a)
        for (int b = 0; b < out.num_classes(); ++b) {
            if (a == b) continue;
            const auto& ca = out.classes[a];
            const auto& cb = out.classes[b];
            if (ca.dim() < cb.dim() &&
                detail::direction_contained(ca.direction, cb.direction)) {
                out.hypothesis_ok = false;
                out.violations.push_back(
                    "class " + std::to_string(a) + " (dim " + std::to_string(ca.dim()) +
                    ") direction space translates into class " + std::to_string(b) +
                    " (dim " + std::to_string(cb.dim()) + ")");
            }
        }

    if (enforce && !out.hypothesis_ok) {
        std::string msg = "facet hypothesis violation:";
        for (const auto& v : out.violations) msg += " " + v + ";";
        throw HypothesisViolation(msg);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Level-set caps of the support function.
// ---------------------------------------------------------------------------

/// Lower bound on the diameter of B_r(lambda) ∩ {xi : rho*(xi) = t}, obtained
/// by shooting `samples` rays from the origin through a direction cap around
/// lambda and solving rho*(s u) = t exactly by 1-homogeneity.
inline double cap_diameter(const ConvexBody& body, const Vector& lambda, double t,
                           double r, int samples = 10000) {
    const int d = body.dim();
    if (lambda.size() != d) throw Error("cap_diameter: dimension mismatch");
    const double ln = lambda.norm();
    if (!(ln > 0)) throw Error("cap_diameter: |lambda| must be positive");
    if (!(t > 0)) throw Error("cap_diameter: level t must be positive");
    if (d != 2 && d != 3) throw UnsupportedDimension("cap_diameter: d in {2,3} only");

    const Vector lhat = lambda / ln;
    const double beta = (r >= ln) ? M_PI : std::min(M_PI, 1.1 * std::asin(r / ln));

    std::vector<Vector> kept;
    kept.reserve(samples);
    auto try_direction = [&](const Vector& u) {
        double s = body.support(u);
        if (s <= 0) return;
        Vector xi = (t / s) * u;
        if ((xi - lambda).norm() <= r + 1e-12) kept.push_back(std::move(xi));
    };

    if (d == 2) {
        double th0 = std::atan2(lhat[1], lhat[0]);
        for (int i = 0; i < samples; ++i) {
            double th = th0 - beta + 2.0 * beta * (i + 0.5) / samples;
            Vector u(2); u << std::cos(th), std::sin(th);
            try_direction(u);
        }
    } else {
        // spiral over the spherical cap of half-angle beta, rotated onto lhat
        Eigen::Vector3d axis(0, 0, 1);
        Eigen::Vector3d target(lhat[0], lhat[1], lhat[2]);
        Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
        Eigen::Vector3d v = axis.cross(target);
        double c = axis.dot(target);
        if (v.norm() > 1e-14) {
            Eigen::Matrix3d vx;
            vx << 0, -v[2], v[1], v[2], 0, -v[0], -v[1], v[0], 0;
            rot = Eigen::Matrix3d::Identity() + vx + vx * vx / (1.0 + c);
        } else if (c < 0) {
            rot = -Eigen::Matrix3d::Identity();
            rot(0, 0) = 1.0;
        }
        const double zmin = std::cos(beta);
        const double ga = M_PI * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < samples; ++i) {
            double z = 1.0 - (1.0 - zmin) * (i + 0.5) / samples;
            double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
            double th = ga * i;
            Vector u(3); u << rr * std::cos(th), rr * std::sin(th), z;
            try_direction(rot * u);
        }
    }

    if (kept.empty())
        throw EmptyCap("cap_diameter: no level-set sample inside the ball");
    double best = 0;
    for (std::size_t i = 0; i + 1 < kept.size(); ++i)
        for (std::size_t j = i + 1; j < kept.size(); ++j)
            best = std::max(best, (kept[i] - kept[j]).norm());
    return best;
}

}  // namespace surfframe
