#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "surfframe/errors.hpp"
#include "surfframe/frame_bounds.hpp"
#include "surfframe/geometry.hpp"
#include "surfframe/obstruction.hpp"
#include "surfframe/polytope_frame.hpp"
#include "surfframe/quadrature.hpp"
#include "surfframe/spectrum.hpp"

namespace surfframe {

using Json = nlohmann::ordered_json;

namespace io {

inline Json vector_to_json(const Vector& v) {
    Json a = Json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

inline Vector vector_from_json(const Json& a, const std::string& field) {
    if (!a.is_array()) throw ConfigInvalid(field + ": expected an array of numbers");
    Vector v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_number()) throw ConfigInvalid(field + ": expected numbers");
        v[static_cast<int>(i)] = a[i].get<double>();
    }
    return v;
}

inline Json matrix_rows_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) rows.push_back(vector_to_json(m.row(i).transpose()));
    return rows;
}

// --- polytope / facet schema ------------------------------------------------
// {"dimension": d, "facets": [{"basis": [[...],...], "offset": [...], "sides": [...]}]}

inline Json facets_to_json(int dimension, const std::vector<Facet>& facets) {
    Json j;
    j["dimension"] = dimension;
    Json fl = Json::array();
    for (const auto& f : facets) {
        Json fj;
        Json basis = Json::array();
        for (int c = 0; c < f.subspace.basis.cols(); ++c)
            basis.push_back(vector_to_json(f.subspace.basis.col(c)));
        fj["basis"] = basis;
        fj["offset"] = vector_to_json(f.subspace.offset);
        fj["sides"] = vector_to_json(f.sides);
        fl.push_back(fj);
    }
    j["facets"] = fl;
    return j;
}

inline std::vector<Facet> facets_from_json(const Json& j) {
    if (!j.contains("dimension") || !j["dimension"].is_number_integer())
        throw ConfigInvalid("dimension: required integer field");
    const int d = j["dimension"].get<int>();
    if (!j.contains("facets") || !j["facets"].is_array() || j["facets"].empty())
        throw ConfigInvalid("facets: required non-empty array");
    std::vector<Facet> out;
    int idx = 0;
    for (const auto& fj : j["facets"]) {
        std::string where = "facets[" + std::to_string(idx++) + "]";
        if (!fj.contains("basis") || !fj["basis"].is_array())
            throw ConfigInvalid(where + ".basis: required array of vectors");
        const auto& bj = fj["basis"];
        Matrix basis(d, bj.size());
        for (std::size_t c = 0; c < bj.size(); ++c) {
            Vector col = vector_from_json(bj[c], where + ".basis");
            if (col.size() != d) throw ConfigInvalid(where + ".basis: vector length != dimension");
            basis.col(static_cast<int>(c)) = col;
        }
        if (!fj.contains("offset")) throw ConfigInvalid(where + ".offset: required");
        Vector offset = vector_from_json(fj["offset"], where + ".offset");
        if (offset.size() != d) throw ConfigInvalid(where + ".offset: length != dimension");
        if (!fj.contains("sides")) throw ConfigInvalid(where + ".sides: required");
        Vector sides = vector_from_json(fj["sides"], where + ".sides");
        if (sides.size() != basis.cols())
            throw ConfigInvalid(where + ".sides: one side length per basis vector");
        out.emplace_back(AffineSubspace(basis, offset), sides);
    }
    return out;
}

// --- spectrum schema ----------------------------------------------------------
// {"frequencies": [[...]], "tags": [{"class": j, "lattice": [..], "phase": s}],
//  "delta": d, "window": R}

inline Json spectrum_to_json(const Spectrum& s) {
    Json j;
    j["frequencies"] = matrix_rows_to_json(s.frequencies);
    Json tags = Json::array();
    for (const auto& t : s.tags) {
        Json tj;
        tj["class"] = t.class_id;
        Json lat = Json::array();
        for (int i = 0; i < t.lattice.size(); ++i) lat.push_back(t.lattice[i]);
        tj["lattice"] = lat;
        tj["phase"] = t.phase;
        tags.push_back(tj);
    }
    j["tags"] = tags;
    if (s.delta) j["delta"] = *s.delta;
    else j["delta"] = nullptr;
    j["window"] = s.window_radius;
    return j;
}

inline Spectrum spectrum_from_json(const Json& j) {
    if (!j.contains("frequencies") || !j["frequencies"].is_array() || j["frequencies"].empty())
        throw ConfigInvalid("frequencies: required non-empty array");
    const auto& fj = j["frequencies"];
    const int d = static_cast<int>(fj[0].size());
    Matrix freq(fj.size(), d);
    for (std::size_t i = 0; i < fj.size(); ++i) {
        Vector r = vector_from_json(fj[i], "frequencies");
        if (r.size() != d) throw ConfigInvalid("frequencies: ragged rows");
        freq.row(static_cast<int>(i)) = r.transpose();
    }
    std::vector<FrequencyTag> tags;
    if (j.contains("tags") && j["tags"].is_array() && !j["tags"].empty()) {
        for (const auto& tj : j["tags"]) {
            FrequencyTag t;
            t.class_id = tj.value("class", -1);
            if (tj.contains("lattice")) {
                const auto& lj = tj["lattice"];
                t.lattice.resize(lj.size());
                for (std::size_t i = 0; i < lj.size(); ++i)
                    t.lattice[static_cast<int>(i)] = lj[i].get<int>();
            }
            t.phase = tj.value("phase", 0);
            tags.push_back(t);
        }
    }
    std::optional<double> delta;
    if (j.contains("delta") && j["delta"].is_number()) delta = j["delta"].get<double>();
    double window = j.value("window", 0.0);
    return Spectrum(std::move(freq), delta, window, std::move(tags));
}

// --- measure schema -----------------------------------------------------------
// geometry schema plus points/weights arrays

inline Json measure_to_json(const QuadratureMeasure& mu) {
    Json j;
    j["dimension"] = mu.dim();
    j["provenance"] = mu.provenance;
    j["resolution"] = mu.resolution;
    j["total_mass"] = mu.total_mass;
    j["points"] = matrix_rows_to_json(mu.points);
    j["weights"] = vector_to_json(mu.weights);
    return j;
}

inline QuadratureMeasure measure_from_json(const Json& j) {
    if (!j.contains("points") || !j.contains("weights"))
        throw ConfigInvalid("measure: points and weights are required");
    const auto& pj = j["points"];
    if (!pj.is_array() || pj.empty()) throw ConfigInvalid("measure.points: non-empty array");
    const int d = static_cast<int>(pj[0].size());
    QuadratureMeasure mu;
    mu.points.resize(pj.size(), d);
    for (std::size_t i = 0; i < pj.size(); ++i)
        mu.points.row(static_cast<int>(i)) =
            vector_from_json(pj[i], "measure.points").transpose();
    mu.weights = vector_from_json(j["weights"], "measure.weights");
    mu.total_mass = j.value("total_mass", mu.weights.sum());
    mu.resolution = j.value("resolution", 0.0);
    mu.provenance = j.value("provenance", "external");
    mu.validate();
    return mu;
}

// --- reports -------------------------------------------------------------------

inline Json frame_report_to_json(const FrameReport& r) {
    Json j;
    j["a_est"] = r.a_est;
    j["b_est"] = r.b_est;
    j["band"] = r.band;
    j["resolution"] = r.resolution;
    Json hist = Json::array();
    for (const auto& h : r.history) {
        Json hj;
        hj["resolution"] = h.resolution;
        hj["a_est"] = h.a_est;
        hj["b_est"] = h.b_est;
        hist.push_back(hj);
    }
    j["history"] = hist;
    j["certified"] = Json{{"a_est", r.a_certified}, {"b_est", r.b_certified}};
    j["test_dim_requested"] = r.test_dim_requested;
    j["test_dim_effective"] = r.test_dim_effective;
    j["gram_cond"] = r.gram_cond;
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}

inline Json obstruction_report_to_json(const ObstructionReport& r) {
    Json j;
    j["gamma"] = r.gamma;
    j["r"] = r.r;
    j["L"] = r.L;
    j["bessel_hypothetical"] = r.bessel_hypothetical;
    j["radii"] = r.radii;
    j["partial_sums"] = r.partial_sums;
    j["counts"] = r.counts;
    j["decay_sup"] = r.decay_sup;
    j["decay_sup_doubled"] = r.decay_sup_doubled;
    j["count_fit"] = Json{{"exponent", r.count_fit.exponent},
                          {"std_error", r.count_fit.std_error}};
    j["sum_fit"] = Json{{"exponent", r.sum_fit.exponent},
                        {"std_error", r.sum_fit.std_error}};
    j["density_requirement_met"] = r.density_requirement_met;
    Json lm = Json::array();
    for (const auto& [n, v] : r.local_masses) lm.push_back(Json{{"norm", n}, {"value", v}});
    j["local_masses"] = lm;
    j["local_mass_infimum"] = r.c_min;
    j["bessel_budget"] = r.bessel_budget;
    if (r.budget_radius) j["budget_radius"] = *r.budget_radius;
    else j["budget_radius"] = nullptr;
    j["verdict"] = r.verdict;
    return j;
}

inline Json certificate_to_json(const LowerBoundCertificate& c) {
    Json j;
    j["epsilon"] = c.epsilon;
    j["c_delta"] = c.c_delta;
    j["n"] = c.n;
    j["m"] = c.m;
    j["max_class_size"] = c.max_class_size;
    j["dim"] = c.dim;
    j["delta"] = c.delta;
    j["value_eps_sq"] = c.value_eps_sq;
    j["value_eps_linear"] = c.value_eps_linear;
    j["n_min_eps_sq"] = c.n_min_eps_sq;
    j["n_min_eps_linear"] = c.n_min_eps_linear;
    return j;
}

// --- files ----------------------------------------------------------------------

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    out << text;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Json read_json(const std::string& path) {
    try {
        return Json::parse(read_text(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigInvalid(path + ": " + e.what());
    }
}

inline void write_json(const std::string& path, const Json& j) {
    write_text(path, j.dump(2) + "\n");
}

/// Fixed-format CSV writer (%.17g) so identical data gives identical bytes.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {
        for (std::size_t i = 0; i < header_.size(); ++i) {
            if (i) body_ += ",";
            body_ += header_[i];
        }
        body_ += "\n";
    }

    void row(const std::vector<double>& values) {
        if (values.size() != header_.size()) throw Error("csv: column count mismatch");
        char buf[64];
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) body_ += ",";
            std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
            body_ += buf;
        }
        body_ += "\n";
    }

    void raw_row(const std::vector<std::string>& cells) {
        if (cells.size() != header_.size()) throw Error("csv: column count mismatch");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) body_ += ",";
            body_ += cells[i];
        }
        body_ += "\n";
    }

    const std::string& text() const { return body_; }
    void save(const std::string& path) const { write_text(path, body_); }

  private:
    std::vector<std::string> header_;
    std::string body_;
};

}  // namespace io
}  // namespace surfframe
