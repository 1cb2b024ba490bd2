#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "surfframe/bessel_certificate.hpp"
#include "surfframe/errors.hpp"
#include "surfframe/geometry.hpp"
#include "surfframe/rng.hpp"
#include "surfframe/spectrum.hpp"

namespace surfframe {

// ---------------------------------------------------------------------------
// Per-class oblique lattice: the dual lattice of the reference box, each
// lattice point carrying exactly N shifts along a transverse direction omega,
// chosen greedily so that the projections onto every foreign class direction
// space stay delta-separated.
// ---------------------------------------------------------------------------

struct ObliqueLattice {
    int class_id = -1;
    Vector omega;        // unit transverse direction; zero-size when perp space is trivial
    double delta = 0;    // foreign-projection separation target
    double delta_prime = 0;  // t-scan step
    double window_radius = 0;
    int shifts_per_point = 0;  // N

    Matrix points;  // (#fibers * N) x d, fiber-major, acceptance order inside a fiber
    std::vector<Eigen::VectorXi> fiber_index;          // base-lattice coordinates
    std::vector<std::vector<double>> fiber_shifts;     // accepted t values per fiber

    int size() const { return static_cast<int>(points.rows()); }
    int fibers() const { return static_cast<int>(fiber_index.size()); }
};

struct PhaseSet {
    int class_id = -1;
    Vector alpha0;                 // in V_j^perp
    std::vector<Vector> elements;  // s * alpha0, s = 1..#F_j
    double epsilon = 0;            // smallest singular value of the phase matrix
    Eigen::MatrixXcd phase_matrix; // (e^{-2 pi i tau_l . alpha_s})
};

/// Direction omega in V_j^perp with angle at least theta_min from every
/// foreign V_l^perp (equivalently |P_{V_l} omega| >= sin(theta_min)), found by
/// rejection sampling; the admissible set has full measure.
inline Vector choose_direction(const FacetClassification& cls, int j, int trials,
                               std::mt19937_64& rng, double theta_min = 1e-3) {
    const auto& me = cls.classes.at(j);
    const int pdim = static_cast<int>(me.perp.cols());
    if (pdim == 0)
        throw DirectionSearchFailed("choose_direction: class " + std::to_string(j) +
                                    " has trivial perp space");
    const double smin = std::sin(theta_min);
    std::normal_distribution<double> g;
    for (int t = 0; t < trials; ++t) {
        Vector coeff(pdim);
        for (int i = 0; i < pdim; ++i) coeff[i] = g(rng);
        Vector omega = me.perp * coeff;
        double n = omega.norm();
        if (n < 1e-12) continue;
        omega /= n;
        bool ok = true;
        for (int l = 0; l < cls.num_classes() && ok; ++l) {
            if (l == j) continue;
            if (project(cls.classes[l].direction, omega).norm() < smin) ok = false;
        }
        if (ok) return omega;
    }
    throw DirectionSearchFailed("choose_direction: no admissible direction after " +
                                std::to_string(trials) + " trials (near-degenerate geometry; "
                                "raise trials or lower theta_min)");
}

namespace detail {

/// Base lattice of the reference box: integer combinations of (1/side_i) b_i,
/// enumerated inside B_{R_w} by increasing norm (ties lexicographic).
inline std::vector<Eigen::VectorXi> enumerate_base_lattice(const FacetClass& cls, double R_w) {
    const int k = cls.dim();
    std::vector<int> hi(k);
    for (int i = 0; i < k; ++i)
        hi[i] = static_cast<int>(std::floor(R_w * cls.ref_sides[i] + 1e-9));
    std::vector<Eigen::VectorXi> zs;
    Eigen::VectorXi cur(k);
    for (int i = 0; i < k; ++i) cur[i] = -hi[i];
    while (true) {
        double n2 = 0;
        for (int i = 0; i < k; ++i) {
            double c = cur[i] / cls.ref_sides[i];
            n2 += c * c;
        }
        if (n2 <= R_w * R_w + 1e-12) zs.push_back(cur);
        int i = 0;
        for (; i < k; ++i) {
            if (++cur[i] <= hi[i]) break;
            cur[i] = -hi[i];
        }
        if (i == k) break;
    }
    std::sort(zs.begin(), zs.end(), [&](const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
        double na = 0, nb = 0;
        for (int i = 0; i < k; ++i) {
            na += double(a[i]) / cls.ref_sides[i] * a[i] / cls.ref_sides[i];
            nb += double(b[i]) / cls.ref_sides[i] * b[i] / cls.ref_sides[i];
        }
        if (std::abs(na - nb) > 1e-12) return na < nb;
        for (int i = 0; i < k; ++i)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    });
    return zs;
}

inline Vector embed_lattice_point(const FacetClass& cls, const Eigen::VectorXi& z) {
    Vector p = Vector::Zero(cls.ambient_dim());
    for (int i = 0; i < cls.dim(); ++i)
        p += (z[i] / cls.ref_sides[i]) * cls.ref_basis.col(i);
    return p;
}

/// Hash grid of points in foreign-class coordinates, used for the
/// delta-separation acceptance tests during the greedy t-scan.
struct ForeignGrid {
    Matrix basis;   // d x k_l, coordinates taken in this basis
    double cell;
    std::unordered_map<std::uint64_t, std::vector<Vector>> cells;

    static std::uint64_t key_of(const Vector& c, double cell) {
        std::uint64_t h = 1469598103934665603ull;
        for (int i = 0; i < c.size(); ++i) {
            auto q = static_cast<std::int64_t>(std::floor(c[i] / cell));
            h ^= static_cast<std::uint64_t>(q + 0x2000000);
            h *= 1099511628211ull;
        }
        return h;
    }

    bool clear_of(const Vector& proj, double delta) const {
        const int k = static_cast<int>(proj.size());
        std::vector<int> off(k, -1);
        while (true) {
            Vector shifted = proj;
            for (int i = 0; i < k; ++i) shifted[i] += off[i] * cell;
            auto it = cells.find(key_of(shifted, cell));
            if (it != cells.end()) {
                for (const auto& q : it->second)
                    if ((q - proj).norm() < delta) return false;
            }
            int i = 0;
            for (; i < k; ++i) {
                if (++off[i] <= 1) break;
                off[i] = -1;
            }
            if (i == k) break;
        }
        return true;
    }

    void insert(const Vector& proj) { cells[key_of(proj, cell)].push_back(proj); }
};

}  // namespace detail

/// Greedy deterministic realization of the oblique lattice: lattice points by
/// increasing norm, shift candidates 0, d', -d', 2d', ... accepted iff every
/// foreign projection stays delta-separated from everything accepted so far.
inline ObliqueLattice build_gamma(const FacetClassification& cls, int j, const Vector& omega,
                                  int N, double delta, double R_w) {
    if (N < 1) throw Error("build_gamma: N must be >= 1");
    if (!(delta > 0)) throw Error("build_gamma: delta must be positive");
    const auto& me = cls.classes.at(j);
    const int d = me.ambient_dim();

    ObliqueLattice out;
    out.class_id = j;
    out.delta = delta;
    out.window_radius = R_w;
    out.shifts_per_point = N;

    auto zs = detail::enumerate_base_lattice(me, R_w);
    const bool trivial_perp = (omega.size() == 0 || omega.norm() < 1e-14);

    if (trivial_perp) {
        if (N != 1)
            throw Error("build_gamma: trivial perp space admits only N = 1");
        out.omega = Vector::Zero(d);
        out.delta_prime = delta;
        out.points.resize(zs.size(), d);
        for (std::size_t i = 0; i < zs.size(); ++i) {
            out.points.row(i) = detail::embed_lattice_point(me, zs[i]).transpose();
            out.fiber_index.push_back(zs[i]);
            out.fiber_shifts.push_back({0.0});
        }
        return out;
    }

    out.omega = omega;
    double min_push = std::numeric_limits<double>::infinity();
    std::vector<detail::ForeignGrid> grids;
    for (int l = 0; l < cls.num_classes(); ++l) {
        if (l == j) continue;
        detail::ForeignGrid g;
        g.basis = cls.classes[l].direction;
        g.cell = delta;
        grids.push_back(std::move(g));
        min_push = std::min(min_push, project(cls.classes[l].direction, omega).norm());
    }
    out.delta_prime = grids.empty() ? delta : delta / min_push;

    const long stall_limit = 1000000;
    std::vector<Vector> pts;
    pts.reserve(zs.size() * N);
    for (const auto& z : zs) {
        Vector base = detail::embed_lattice_point(me, z);
        std::vector<double> accepted;
        long tried = 0;
        for (long q = 0; static_cast<int>(accepted.size()) < N; ++q) {
            if (++tried > stall_limit)
                throw SeparationStall("build_gamma: 1e6 shift candidates failed for a lattice point");
            double t = (q == 0) ? 0.0
                                : ((q % 2 == 1) ? ((q + 1) / 2) * out.delta_prime
                                                : -(q / 2) * out.delta_prime);
            Vector p = base + t * omega;
            bool ok = true;
            for (const auto& g : grids) {
                Vector proj = g.basis.transpose() * p;
                if (!g.clear_of(proj, delta)) { ok = false; break; }
            }
            if (!ok) continue;
            for (auto& g : grids) g.insert(g.basis.transpose() * p);
            accepted.push_back(t);
            pts.push_back(std::move(p));
        }
        out.fiber_index.push_back(z);
        out.fiber_shifts.push_back(std::move(accepted));
    }
    out.points.resize(pts.size(), d);
    for (std::size_t i = 0; i < pts.size(); ++i) out.points.row(i) = pts[i].transpose();
    return out;
}

/// Phase set A_j = {s alpha_0}: the alpha_0 direction comes from the first
/// pair of perp-projected translations, its magnitude from a grid scan
/// maximizing the smallest singular value of the phase matrix.
inline PhaseSet build_alpha(const FacetClassification& cls, int j,
                            std::vector<double> magnitude_grid = {}) {
    const auto& me = cls.classes.at(j);
    const int d = me.ambient_dim();
    const int nf = me.size();
    PhaseSet out;
    out.class_id = j;

    if (nf == 1) {
        out.alpha0 = (me.perp.cols() > 0) ? Vector(0.5 * me.perp.col(0))
                                          : Vector(Vector::Zero(d));
        out.elements = {out.alpha0};
        out.phase_matrix.resize(1, 1);
        double ph = -2.0 * M_PI * me.translations[0].dot(out.alpha0);
        out.phase_matrix(0, 0) = Complex(std::cos(ph), std::sin(ph));
        out.epsilon = 1.0;
        return out;
    }

    if (!me.perp_projections_distinct)
        throw PhaseDegenerate("build_alpha: class translations project onto coincident "
                              "perp components");
    Matrix pproj = me.perp * me.perp.transpose();
    Vector u = pproj * (me.translations[0] - me.translations[1]);
    if (u.norm() < 1e-12)
        throw PhaseDegenerate("build_alpha: first translation pair has no perp spread");
    u.normalize();

    double spread = 0;
    std::vector<double> tu(nf);
    for (int l = 0; l < nf; ++l) tu[l] = me.translations[l].dot(u);
    for (int a = 0; a < nf; ++a)
        for (int b = 0; b < nf; ++b) spread = std::max(spread, std::abs(tu[a] - tu[b]));

    if (magnitude_grid.empty())
        for (int k = 1; k <= 32; ++k) magnitude_grid.push_back(k / 16.0 / spread);

    double best_eps = -1, best_mag = 0;
    Eigen::MatrixXcd best_M;
    for (double mag : magnitude_grid) {
        Eigen::MatrixXcd M(nf, nf);
        for (int l = 0; l < nf; ++l)
            for (int s = 0; s < nf; ++s) {
                double ph = -2.0 * M_PI * tu[l] * mag * (s + 1);
                M(l, s) = Complex(std::cos(ph), std::sin(ph));
            }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
        double eps = svd.singularValues().minCoeff();
        if (eps > best_eps + 1e-15) {
            best_eps = eps;
            best_mag = mag;
            best_M = std::move(M);
        }
    }
    if (best_eps < 1e-8)
        throw PhaseDegenerate("build_alpha: all scanned magnitudes give a near-singular "
                              "phase matrix (projections nearly coincide)");
    out.alpha0 = best_mag * u;
    for (int s = 1; s <= nf; ++s) out.elements.push_back(s * out.alpha0);
    out.epsilon = best_eps;
    out.phase_matrix = std::move(best_M);
    return out;
}

// ---------------------------------------------------------------------------
// Full pipeline and its certificates.
// ---------------------------------------------------------------------------

struct LowerBoundCertificate {
    double epsilon = 0;      // min over classes of the phase-matrix lower bound
    double c_delta = 0;      // certified Bessel constant at (delta, max facet dim)
    int n = 0, m = 0, max_class_size = 0, dim = 0;
    double delta = 0;
    // the quadratic-in-epsilon bound from the two-term estimate, and the
    // linear variant; both are surfaced, never reconciled
    double value_eps_sq = 0;
    double value_eps_linear = 0;
    int n_min_eps_sq = 0;
    int n_min_eps_linear = 0;
};

inline LowerBoundCertificate lower_bound_certificate(double epsilon, int N, int m,
                                                     double delta, int M, int d) {
    if (!(epsilon > 0) || N < 1 || m < 1 || M < 1 || d < 1)
        throw Error("lower_bound_certificate: inputs must be positive");
    LowerBoundCertificate c;
    c.epsilon = epsilon;
    c.n = N;
    c.m = m;
    c.max_class_size = M;
    c.dim = d;
    c.delta = delta;
    c.c_delta = certified_bessel_constant(delta, d);
    const double loss = (m - 1) * c.c_delta * double(M) * M;
    c.value_eps_sq = epsilon * epsilon * N / m - loss;
    c.value_eps_linear = epsilon * N / m - loss;
    auto nmin = [&](double eps_pow) {
        double thr = m * loss / eps_pow;
        return static_cast<int>(std::floor(std::max(0.0, thr))) + 1;
    };
    c.n_min_eps_sq = nmin(epsilon * epsilon);
    c.n_min_eps_linear = nmin(epsilon);
    return c;
}

struct SeparationAudit {
    bool ok = true;
    // per ordered pair (j, l), j != l: smallest projected distance found below
    // delta (none when the pair is clean)
    std::vector<std::tuple<int, int, double>> violations;
    double union_min_distance = 0;  // over the assembled spectrum
};

struct BuildOptions {
    std::uint64_t seed = 1;
    int direction_trials = 10000;
    double theta_min = 1e-3;
    std::vector<double> magnitude_grid;  // empty = default scan
};

struct FrameSpectrumBuild {
    Spectrum spectrum;
    FacetClassification classification;
    std::vector<ObliqueLattice> lattices;
    std::vector<PhaseSet> phases;
    LowerBoundCertificate certificate;
    SeparationAudit audit;
    int duplicates_merged = 0;
};

/// Exhaustive foreign-projection audit of the built lattices (1-d projections
/// by sorting, higher-dimensional ones through the spatial hash).
inline SeparationAudit exhaustive_separation_audit(const FacetClassification& cls,
                                                   const std::vector<ObliqueLattice>& gammas,
                                                   double delta) {
    SeparationAudit audit;
    for (int j = 0; j < cls.num_classes(); ++j) {
        for (int l = 0; l < cls.num_classes(); ++l) {
            if (l == j) continue;
            const Matrix& pts = gammas[j].points;
            Matrix proj = pts * cls.classes[l].direction;  // rows in V_l coordinates
            if (proj.cols() == 1) {
                std::vector<double> v(proj.data(), proj.data() + proj.rows());
                std::sort(v.begin(), v.end());
                double mind = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i + 1 < v.size(); ++i)
                    mind = std::min(mind, v[i + 1] - v[i]);
                if (mind < delta * (1.0 - 1e-12)) {
                    audit.ok = false;
                    audit.violations.emplace_back(j, l, mind);
                }
            } else {
                auto bad = detail::min_distance_below(proj, delta * (1.0 - 1e-12));
                if (bad) {
                    audit.ok = false;
                    audit.violations.emplace_back(j, l, *bad);
                }
            }
        }
    }
    return audit;
}

/// classify -> per-class direction, oblique lattice, phase set -> tagged union
/// with the lower-bound certificate and the exhaustive separation audit.
inline FrameSpectrumBuild build_frame_spectrum(const std::vector<Facet>& facets, int N,
                                               double delta, double R_w,
                                               BuildOptions opts = {}) {
    FrameSpectrumBuild out;
    out.classification = classify_facets(facets, /*enforce=*/true);
    const auto& cls = out.classification;
    const int m = cls.num_classes();
    const int d = cls.ambient_dim;

    for (int j = 0; j < m; ++j) {
        const auto& me = cls.classes[j];
        Vector omega;
        if (me.perp.cols() == 0) {
            if (m > 1)
                throw DirectionSearchFailed("build_frame_spectrum: full-dimensional class "
                                            "coexists with other classes");
            omega = Vector();
        } else {
            auto rng = make_rng(opts.seed, static_cast<std::uint64_t>(j));
            omega = choose_direction(cls, j, opts.direction_trials, rng, opts.theta_min);
        }
        out.lattices.push_back(build_gamma(cls, j, omega, N, delta, R_w));
        out.phases.push_back(build_alpha(cls, j, opts.magnitude_grid));
    }

    // tagged union Lambda = U_j (Gamma_j + A_j), exact duplicates merged
    struct Row { Vector f; FrequencyTag tag; };
    std::vector<Row> rows;
    for (int j = 0; j < m; ++j) {
        const auto& gam = out.lattices[j];
        const auto& pha = out.phases[j];
        int r = 0;
        for (int fib = 0; fib < gam.fibers(); ++fib) {
            for (std::size_t s_i = 0; s_i < gam.fiber_shifts[fib].size(); ++s_i, ++r) {
                Vector base = gam.points.row(r).transpose();
                for (std::size_t s = 0; s < pha.elements.size(); ++s) {
                    rows.push_back(Row{base + pha.elements[s],
                                       FrequencyTag{j, gam.fiber_index[fib],
                                                    static_cast<int>(s + 1)}});
                }
            }
        }
    }
    std::vector<int> order(rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        for (int i = 0; i < d; ++i) {
            if (rows[a].f[i] < rows[b].f[i]) return true;
            if (rows[a].f[i] > rows[b].f[i]) return false;
        }
        return false;
    });
    std::vector<int> kept;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (!kept.empty()) {
            const Vector& prev = rows[kept.back()].f;
            if ((rows[order[i]].f - prev).cwiseAbs().maxCoeff() < 1e-12) {
                ++out.duplicates_merged;
                continue;
            }
        }
        kept.push_back(order[i]);
    }
    // restore input (class-major) order among the kept rows for reproducible tags
    std::sort(kept.begin(), kept.end());
    Matrix freq(kept.size(), d);
    std::vector<FrequencyTag> tags;
    tags.reserve(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        freq.row(i) = rows[kept[i]].f.transpose();
        tags.push_back(rows[kept[i]].tag);
    }

    out.audit = exhaustive_separation_audit(cls, out.lattices, delta);
    double union_delta = delta;
    auto below = detail::min_distance_below(freq, delta * (1.0 - 1e-12));
    if (below) union_delta = *below * (1.0 - 1e-9);
    out.audit.union_min_distance = union_delta;

    int max_k = 0;
    for (const auto& c : cls.classes) max_k = std::max(max_k, c.dim());
    double eps_min = std::numeric_limits<double>::infinity();
    for (const auto& p : out.phases) eps_min = std::min(eps_min, p.epsilon);
    out.certificate =
        lower_bound_certificate(eps_min, N, m, delta, cls.max_class_size(), max_k);

    out.spectrum = Spectrum(std::move(freq), union_delta, R_w, std::move(tags));
    return out;
}

}  // namespace surfframe
