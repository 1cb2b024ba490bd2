#pragma once

#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "surfframe/eigenbasis.hpp"
#include "surfframe/errors.hpp"
#include "surfframe/fourier.hpp"
#include "surfframe/frame_bounds.hpp"
#include "surfframe/io.hpp"
#include "surfframe/obstruction.hpp"
#include "surfframe/polytope_frame.hpp"
#include "surfframe/version.hpp"

namespace surfframe {

// ---------------------------------------------------------------------------
// Canonical geometries used by the recipes (and the test suite).
// ---------------------------------------------------------------------------

inline Facet segment_facet(const Vector& from, const Vector& to) {
    Vector dir = to - from;
    double len = dir.norm();
    Matrix basis(from.size(), 1);
    basis.col(0) = dir / len;
    Vector sides(1);
    sides << len;
    return Facet(AffineSubspace(basis, from), sides);
}

/// Boundary of the polygon with the given vertices (in order), one segment
/// facet per edge.
inline std::vector<Facet> polygon_boundary(const std::vector<Vector>& vertices) {
    std::vector<Facet> out;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        out.push_back(segment_facet(vertices[i], vertices[(i + 1) % vertices.size()]));
    return out;
}

/// Equilateral unit triangle: three side classes, all singletons.
inline std::vector<Facet> unit_triangle_boundary() {
    Vector a(2), b(2), c(2);
    a << 0, 0;
    b << 1, 0;
    c << 0.5, std::sqrt(3.0) / 2.0;
    return polygon_boundary({a, b, c});
}

/// Unit square boundary: two classes (bottom/top, left/right) of size two.
inline std::vector<Facet> unit_square_boundary() {
    Vector a(2), b(2), c(2), d(2);
    a << 0, 0;
    b << 1, 0;
    c << 1, 1;
    d << 0, 1;
    return polygon_boundary({a, b, c, d});
}

/// The filled unit square as a single full-dimensional facet (Lebesgue measure).
inline Facet unit_square_region() {
    Matrix basis = Matrix::Identity(2, 2);
    Vector sides(2);
    sides << 1, 1;
    return Facet(AffineSubspace(basis, Vector::Zero(2)), sides);
}

// ---------------------------------------------------------------------------
// Experiment configuration.
// ---------------------------------------------------------------------------

struct ExperimentConfig {
    std::string kind;
    std::uint64_t seed = 1;
    std::string out_dir = ".";

    // frame experiments
    int n_shifts = 4;       // N
    double delta = 0.1;
    double window = 12.0;   // R_w
    double band = 4.0;
    double resolution = 0;  // 0 = Nyquist-rule automatic
    double spectrum_radius = 20.0;  // lattice truncation (parseval / dichotomy)

    // obstruction
    double gamma = 1.0;
    double r = 5.0;
    double bessel_hypothetical = 10.0;
    int body_dim = 2;

    // eigenbasis
    std::string group_kind = "dihedral";
    int group_n = 3;
    int lmax = 12;
    int trials = 20;
    int tiling_samples = 100000;

    Json to_json() const {
        Json j;
        j["experiment"] = kind;
        j["seed"] = seed;
        j["out"] = out_dir;
        j["n"] = n_shifts;
        j["delta"] = delta;
        j["window"] = window;
        j["band"] = band;
        j["resolution"] = resolution;
        j["spectrum_radius"] = spectrum_radius;
        j["gamma"] = gamma;
        j["r"] = r;
        j["bessel_hypothetical"] = bessel_hypothetical;
        j["body_dim"] = body_dim;
        j["group"] = group_kind + ":" + std::to_string(group_n);
        j["lmax"] = lmax;
        j["trials"] = trials;
        j["tiling_samples"] = tiling_samples;
        return j;
    }
};

inline const std::vector<std::string>& known_experiments() {
    static const std::vector<std::string> kinds = {
        "parseval", "triangle-frame", "square-frame", "herz", "dichotomy", "eigenbasis"};
    return kinds;
}

inline ExperimentConfig parse_config(const Json& j) {
    ExperimentConfig c;
    if (!j.contains("experiment") || !j["experiment"].is_string())
        throw ConfigInvalid("experiment: required string field");
    c.kind = j["experiment"].get<std::string>();
    bool known = false;
    for (const auto& k : known_experiments()) known |= (k == c.kind);
    if (!known) throw ConfigInvalid("experiment: unknown kind '" + c.kind + "'");

    auto num = [&](const char* field, double lo, double hi, double dflt) {
        if (!j.contains(field)) return dflt;
        if (!j[field].is_number()) throw ConfigInvalid(std::string(field) + ": expected a number");
        double v = j[field].get<double>();
        if (v < lo || v > hi)
            throw ConfigInvalid(std::string(field) + ": out of range [" + std::to_string(lo) +
                                ", " + std::to_string(hi) + "]");
        return v;
    };
    c.seed = static_cast<std::uint64_t>(num("seed", 0, 9e15, 1));
    if (j.contains("out")) c.out_dir = j["out"].get<std::string>();
    c.n_shifts = static_cast<int>(num("n", 1, 1e7, 4));
    c.delta = num("delta", 1e-6, 2.0, 0.1);
    c.window = num("window", 1.0, 1e4, 12.0);
    c.band = num("band", 0.5, 64.0, c.kind == "parseval" ? 10.0 : 4.0);
    c.resolution = num("resolution", 0.0, 1e6, 0.0);
    c.spectrum_radius = num("spectrum_radius", 1.0, 1e4,
                            c.kind == "dichotomy" ? 200.0 : 20.0);
    c.gamma = num("gamma", 0.1, 8.0, 1.0);
    c.r = num("r", 0.5, 64.0, 5.0);
    c.bessel_hypothetical = num("bessel_hypothetical", 1e-6, 1e9, 10.0);
    c.body_dim = static_cast<int>(num("body_dim", 2, 3, 2));
    c.lmax = static_cast<int>(num("lmax", 0, 24, 12));
    c.trials = static_cast<int>(num("trials", 1, 1e4, 20));
    c.tiling_samples = static_cast<int>(num("tiling_samples", 1e5, 1e8, 1e5));
    if (j.contains("group")) {
        std::string g = j["group"].get<std::string>();
        auto pos = g.find(':');
        if (pos == std::string::npos)
            throw ConfigInvalid("group: expected '<kind>:<n>', e.g. dihedral:3");
        c.group_kind = g.substr(0, pos);
        if (c.group_kind != "dihedral" && c.group_kind != "cyclic" && c.group_kind != "trivial")
            throw ConfigInvalid("group: kind must be dihedral, cyclic or trivial");
        try {
            c.group_n = std::stoi(g.substr(pos + 1));
        } catch (...) {
            throw ConfigInvalid("group: bad integer after ':'");
        }
        if (c.group_n < 1 || c.group_n > 64) throw ConfigInvalid("group: n out of range [1, 64]");
    }
    return c;
}

// ---------------------------------------------------------------------------
// Recipes.
// ---------------------------------------------------------------------------

struct RecipeOutcome {
    Json report;
    std::map<std::string, std::string> csv_files;  // filename stem -> csv text
    std::map<std::string, double> metrics;
};

namespace detail {

inline double auto_resolution(const ExperimentConfig& cfg, const Spectrum& lambda) {
    if (cfg.resolution > 0) return cfg.resolution;
    return std::max(8.0, 4.0 * std::max(lambda.max_coordinate(), cfg.band));
}

inline void warn_band_reach(Json& report, const ExperimentConfig& cfg, const Spectrum& lam) {
    if (cfg.band > lam.max_norm())
        report["warnings"].push_back("band exceeds the spectrum reach max|lambda| = " +
                                     std::to_string(lam.max_norm()));
}

inline RecipeOutcome run_parseval(const ExperimentConfig& cfg) {
    RecipeOutcome out;
    Spectrum lambda = lattice_ball(2, cfg.spectrum_radius);
    double res = auto_resolution(cfg, lambda);
    QuadratureMeasure mu = facet_quadrature(unit_square_region(), res);
    FrameReport rep = frame_bounds(mu, lambda, cfg.band);

    out.report["frame"] = io::frame_report_to_json(rep);
    out.report["a_deviation"] = std::abs(rep.a_est - 1.0);
    out.report["b_deviation"] = std::abs(rep.b_est - 1.0);
    double drift = 0;
    if (rep.history.size() >= 2) {
        const auto& h0 = rep.history[rep.history.size() - 2];
        const auto& h1 = rep.history.back();
        drift = std::max(std::abs(h1.a_est - h0.a_est) / std::max(1e-30, h0.a_est),
                         std::abs(h1.b_est - h0.b_est) / std::max(1e-30, h0.b_est));
    }
    out.report["resolution_drift"] = drift;
    io::CsvWriter csv({"resolution", "a_est", "b_est"});
    for (const auto& h : rep.history) csv.row({h.resolution, h.a_est, h.b_est});
    out.csv_files["history"] = csv.text();
    out.metrics["a_est"] = rep.a_est;
    out.metrics["b_est"] = rep.b_est;
    out.metrics["resolution_drift"] = drift;
    return out;
}

inline RecipeOutcome run_polytope_frame(const ExperimentConfig& cfg,
                                        const std::vector<Facet>& facets) {
    RecipeOutcome out;
    BuildOptions bopts;
    bopts.seed = cfg.seed;
    FrameSpectrumBuild build =
        build_frame_spectrum(facets, cfg.n_shifts, cfg.delta, cfg.window, bopts);
    double res = auto_resolution(cfg, build.spectrum);
    QuadratureMeasure mu = surface_quadrature(facets, res);
    warn_band_reach(out.report, cfg, build.spectrum);
    FrameReport rep = frame_bounds(mu, build.spectrum, cfg.band);

    double eps_min = std::numeric_limits<double>::infinity();
    Json epsilons = Json::array();
    for (const auto& p : build.phases) {
        epsilons.push_back(p.epsilon);
        eps_min = std::min(eps_min, p.epsilon);
    }
    out.report["frame"] = io::frame_report_to_json(rep);
    out.report["classes"] = build.classification.num_classes();
    out.report["spectrum_size"] = build.spectrum.size();
    out.report["duplicates_merged"] = build.duplicates_merged;
    out.report["epsilons"] = epsilons;
    out.report["certificate"] = io::certificate_to_json(build.certificate);
    out.report["separation_audit"] =
        Json{{"ok", build.audit.ok},
             {"union_min_distance", build.audit.union_min_distance},
             {"violations", build.audit.violations.size()}};

    io::CsvWriter csv({"resolution", "a_est", "b_est"});
    for (const auto& h : rep.history) csv.row({h.resolution, h.a_est, h.b_est});
    out.csv_files["history"] = csv.text();

    out.metrics["a_est"] = rep.a_est;
    out.metrics["b_est"] = rep.b_est;
    out.metrics["eps_min"] = eps_min;
    out.metrics["certificate_eps_sq"] = build.certificate.value_eps_sq;
    out.metrics["n_min_eps_sq"] = build.certificate.n_min_eps_sq;
    out.metrics["spectrum_size"] = build.spectrum.size();
    out.metrics["audit_ok"] = build.audit.ok ? 1.0 : 0.0;
    return out;
}

inline RecipeOutcome run_herz(const ExperimentConfig& cfg) {
    RecipeOutcome out;
    HerzAsymptotic herz = make_herz(ConvexBody::ball(2, 1.0));

    // residual envelope slope on log-spaced bins over [10, 200]
    const double lo = 10.0, hi = 200.0;
    const int bins = 24, per_bin = 160;
    std::vector<double> bin_x, bin_env;
    io::CsvWriter csv({"xi", "sigma_hat", "herz", "residual"});
    for (int b = 0; b < bins; ++b) {
        double a0 = lo * std::pow(hi / lo, double(b) / bins);
        double a1 = lo * std::pow(hi / lo, double(b + 1) / bins);
        double env = 0;
        for (int i = 0; i < per_bin; ++i) {
            double s = a0 + (a1 - a0) * (i + 0.5) / per_bin;
            Vector xi(2);
            xi << s, 0.0;
            double exact = std::real(sphere_ft_closed_form(2, xi));
            double lead = herz_eval(herz, xi);
            double resid = std::abs(exact - lead);
            env = std::max(env, resid);
            if (i % 16 == 0) csv.row({s, exact, lead, resid});
        }
        bin_x.push_back(std::sqrt(a0 * a1));
        bin_env.push_back(env);
    }
    PowerFit slope = fit_power_law(bin_x, bin_env);

    // phase check: zero crossings of sigma_hat against the predicted cosine zeros
    double max_dev = 0;
    int crossings = 0;
    {
        auto f = [](double s) { return 2.0 * M_PI * bessel_j0(2.0 * M_PI * s); };
        double step = 1e-3;
        double prev = f(20.0);
        for (double s = 20.0 + step; s <= 40.0 + 1e-12; s += step) {
            double curr = f(s);
            if (prev == 0.0 || prev * curr < 0) {
                double a = s - step, b = s;
                for (int it = 0; it < 80; ++it) {
                    double m = 0.5 * (a + b);
                    if (f(a) * f(m) <= 0) b = m;
                    else a = m;
                }
                double zero = 0.5 * (a + b);
                // predicted zeros of cos(2 pi (s - 1/8)): s = 3/8 + k/2
                double k = std::round((zero - 0.375) * 2.0);
                max_dev = std::max(max_dev, std::abs(zero - (0.375 + 0.5 * k)));
                ++crossings;
            }
            prev = curr;
        }
    }

    out.report["residual_slope"] = slope.exponent;
    out.report["residual_slope_std_error"] = slope.std_error;
    out.report["zero_crossings"] = crossings;
    out.report["max_crossing_deviation"] = max_dev;
    out.csv_files["residual"] = csv.text();
    out.metrics["residual_slope"] = slope.exponent;
    out.metrics["max_crossing_deviation"] = max_dev;
    return out;
}

inline RecipeOutcome run_dichotomy(const ExperimentConfig& cfg) {
    RecipeOutcome out;
    Spectrum lambda = lattice_ball(cfg.body_dim, cfg.spectrum_radius);
    ObstructionReport rep = dichotomy_report(cfg.body_dim, lambda, cfg.gamma, cfg.r,
                                             cfg.bessel_hypothetical);
    out.report["obstruction"] = io::obstruction_report_to_json(rep);
    io::CsvWriter csv({"radius", "partial_sum", "count"});
    for (std::size_t i = 0; i < rep.radii.size(); ++i)
        csv.row({rep.radii[i], rep.partial_sums[i], double(rep.counts[i])});
    out.csv_files["ladder"] = csv.text();
    out.metrics["c_min"] = rep.c_min;
    out.metrics["sum_fit_exponent"] = rep.sum_fit.exponent;
    out.metrics["budget_radius"] = rep.budget_radius.value_or(-1.0);
    return out;
}

inline IsometryGroup make_group(const ExperimentConfig& cfg) {
    if (cfg.group_kind == "dihedral") return dihedral_group(cfg.group_n);
    if (cfg.group_kind == "cyclic") return cyclic_group(cfg.group_n);
    return trivial_group();
}

inline RecipeOutcome run_eigenbasis(const ExperimentConfig& cfg) {
    RecipeOutcome out;
    IsometryGroup g = make_group(cfg);
    WedgeDomain dom;
    if (cfg.group_kind == "trivial") {
        dom = full_sphere_domain();
    } else if (cfg.group_kind == "dihedral") {
        dom = hemisphere_wedge(cfg.group_n);
    } else {
        // a cyclic group of order n tiles by full-height wedges of angle 2 pi/n
        dom = hemisphere_wedge(cfg.group_n);
        dom.indicator = [n = cfg.group_n](const Eigen::Vector3d& x) {
            double ph = std::atan2(x[1], x[0]);
            if (ph < 0) ph += 2.0 * M_PI;
            return ph < 2.0 * M_PI / n;
        };
        dom.kind = "sphere-wedge";
        dom.nominal_area = 4.0 * M_PI / cfg.group_n;
        dom.wedge_n = 0;  // adapted quadrature covers the upper wedge only
    }

    TilingReport tiling = tiling_check(dom, g, cfg.tiling_samples);
    ProjectedEigenbasis basis = build_projected_eigenbasis(g, cfg.lmax);

    Json dims = Json::array();
    double max_dim_dev = 0;
    for (int l = 0; l <= cfg.lmax; ++l) {
        double tf = trace_formula_dimension(g, l);
        max_dim_dev = std::max(max_dim_dev, std::abs(tf - basis.dims[l]));
        dims.push_back(Json{{"l", l}, {"dim", basis.dims[l]}, {"trace_formula", tf}});
    }

    BasisVerification ver;
    bool wedge_ok = (dom.kind == "hemisphere-wedge") || (dom.kind == "full-sphere");
    if (wedge_ok) ver = verify_basis(dom, g, basis, cfg.trials, cfg.seed);

    out.report["group"] = g.name;
    out.report["order"] = g.order();
    out.report["tiling"] = Json{{"pass", tiling.pass},
                                {"max_pair_overlap", tiling.max_pair_overlap},
                                {"coverage", tiling.coverage},
                                {"samples", tiling.samples}};
    out.report["dimensions"] = dims;
    out.report["trace_formula_max_deviation"] = max_dim_dev;
    if (wedge_ok) {
        out.report["gram_offdiag_max"] = ver.gram_offdiag_max;
        out.report["gram_diagonal"] = io::vector_to_json(ver.gram_diagonal);
        out.report["max_reconstruction_error"] = ver.max_reconstruction_error;
        out.report["invariance_max"] = ver.invariance_max;
        out.report["basis_size"] = ver.basis_size;
    }

    io::CsvWriter csv({"l", "dim", "trace_formula"});
    for (int l = 0; l <= cfg.lmax; ++l)
        csv.row({double(l), double(basis.dims[l]),
                 out.report["dimensions"][l]["trace_formula"].get<double>()});
    out.csv_files["dimensions"] = csv.text();

    out.metrics["tiling_pass"] = tiling.pass ? 1.0 : 0.0;
    if (wedge_ok) {
        out.metrics["gram_offdiag_max"] = ver.gram_offdiag_max;
        out.metrics["reconstruction_error"] = ver.max_reconstruction_error;
    }
    out.metrics["d0"] = basis.dims.empty() ? -1 : basis.dims[0];
    if (cfg.lmax >= 1) out.metrics["d1"] = basis.dims[1];
    return out;
}

}  // namespace detail

/// Execute one named recipe in memory; the report embeds the resolved config
/// and the artifact version.
inline RecipeOutcome run_recipe(const ExperimentConfig& cfg) {
    RecipeOutcome out;
    if (cfg.kind == "parseval") out = detail::run_parseval(cfg);
    else if (cfg.kind == "triangle-frame")
        out = detail::run_polytope_frame(cfg, unit_triangle_boundary());
    else if (cfg.kind == "square-frame")
        out = detail::run_polytope_frame(cfg, unit_square_boundary());
    else if (cfg.kind == "herz") out = detail::run_herz(cfg);
    else if (cfg.kind == "dichotomy") out = detail::run_dichotomy(cfg);
    else if (cfg.kind == "eigenbasis") out = detail::run_eigenbasis(cfg);
    else throw ConfigInvalid("experiment: unknown kind '" + cfg.kind + "'");
    out.report["experiment"] = cfg.kind;
    out.report["config"] = cfg.to_json();
    out.report["version"] = kVersion;
    return out;
}

/// Run and write <out>/<kind>_report.json plus the recipe CSVs. Exit status:
/// 0 success, 2 construction-hypothesis violations, 3 numerical-stability
/// errors (ConfigInvalid propagates to the caller).
inline int run(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    try {
        RecipeOutcome out = run_recipe(cfg);
        fs::create_directories(cfg.out_dir);
        io::write_json((fs::path(cfg.out_dir) / (cfg.kind + "_report.json")).string(),
                       out.report);
        for (const auto& [stem, text] : out.csv_files)
            io::write_text((fs::path(cfg.out_dir) / (cfg.kind + "_" + stem + ".csv")).string(),
                           text);
        return 0;
    } catch (const HypothesisViolation&) {
        return 2;
    } catch (const DirectionSearchFailed&) {
        return 2;
    } catch (const PhaseDegenerate&) {
        return 2;
    } catch (const SeparationStall&) {
        return 2;
    } catch (const QuadratureUnstable&) {
        return 3;
    } catch (const IllConditionedTestGram&) {
        return 3;
    } catch (const NotIdempotent&) {
        return 3;
    } catch (const GridTooCoarse&) {
        return 3;
    }
}

/// One recipe run per parameter value, one row per run; ConfigInvalid aborts,
/// numerical errors are recorded in the row and the sweep continues.
inline std::string sweep(const ExperimentConfig& base, const std::string& param,
                         const std::vector<double>& values) {
    static const std::vector<std::string> cols = {
        "param", "value", "status", "a_est", "b_est", "eps_min",
        "certificate_eps_sq", "spectrum_size", "c_min", "error"};
    io::CsvWriter csv(cols);
    auto set_param = [&](ExperimentConfig& c, double v) {
        if (param == "N" || param == "n") c.n_shifts = static_cast<int>(v);
        else if (param == "delta") c.delta = v;
        else if (param == "window") c.window = v;
        else if (param == "band") c.band = v;
        else if (param == "resolution") c.resolution = v;
        else if (param == "lmax") c.lmax = static_cast<int>(v);
        else if (param == "gamma") c.gamma = v;
        else if (param == "r") c.r = v;
        else if (param == "spectrum_radius") c.spectrum_radius = v;
        else throw ConfigInvalid("sweep: unknown parameter '" + param + "'");
    };
    char buf[64];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (double v : values) {
        ExperimentConfig cfg = base;
        set_param(cfg, v);
        std::vector<std::string> row(cols.size(), "");
        row[0] = param;
        row[1] = fmt(v);
        try {
            RecipeOutcome out = run_recipe(cfg);
            row[2] = "ok";
            auto put = [&](std::size_t i, const char* key) {
                auto it = out.metrics.find(key);
                if (it != out.metrics.end()) row[i] = fmt(it->second);
            };
            put(3, "a_est");
            put(4, "b_est");
            put(5, "eps_min");
            put(6, "certificate_eps_sq");
            put(7, "spectrum_size");
            put(8, "c_min");
        } catch (const ConfigInvalid&) {
            throw;
        } catch (const Error& e) {
            row[2] = "error";
            row[9] = e.what();
        }
        csv.raw_row(row);
    }
    return csv.text();
}

}  // namespace surfframe
