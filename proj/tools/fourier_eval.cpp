// fourier-eval — batch transform evaluation for a quadrature measure, CSV out
// with columns xi_1..xi_d, re, im.
//
//   fourier-eval --measure mu.json --xi freqs.csv --out out.csv
//   fourier-eval --polytope poly.json --resolution 80 --xi freqs.csv --out out.csv
//   fourier-eval --circle 1.0 --resolution 200 --xi freqs.csv --out out.csv

#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "surfframe/fourier.hpp"
#include "surfframe/io.hpp"

using namespace surfframe;

namespace {

Matrix read_xi_csv(const std::string& path, int dim) {
    std::istringstream in(io::read_text(path));
    std::string line;
    std::vector<Vector> rows;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string cell;
        std::vector<double> vals;
        bool numeric = true;
        while (std::getline(ls, cell, ',')) {
            try {
                vals.push_back(std::stod(cell));
            } catch (...) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (first) { first = false; continue; }  // header row
            throw ConfigInvalid("xi csv: non-numeric row");
        }
        first = false;
        if (static_cast<int>(vals.size()) != dim)
            throw ConfigInvalid("xi csv: expected " + std::to_string(dim) + " columns");
        Vector v(dim);
        for (int i = 0; i < dim; ++i) v[i] = vals[i];
        rows.push_back(v);
    }
    Matrix m(rows.size(), dim);
    for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<int>(i)) = rows[i];
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"batch Fourier transform of a quadrature measure"};
    std::string measure_path, polytope_path, xi_path, out_path = "fourier.csv";
    double circle_radius = 0, resolution = 0;
    app.add_option("--measure", measure_path, "measure JSON (points/weights)");
    app.add_option("--polytope", polytope_path, "facet-list JSON to quadrate");
    app.add_option("--circle", circle_radius, "circle radius to quadrate");
    app.add_option("--resolution", resolution, "nodes per unit length");
    app.add_option("--xi", xi_path, "CSV of frequencies (one per row)")->required();
    app.add_option("--out", out_path, "output CSV");
    CLI11_PARSE(app, argc, argv);

    try {
        QuadratureMeasure mu;
        if (!measure_path.empty()) {
            mu = io::measure_from_json(io::read_json(measure_path));
        } else if (!polytope_path.empty()) {
            if (resolution <= 0) throw ConfigInvalid("--resolution required with --polytope");
            auto facets = io::facets_from_json(io::read_json(polytope_path));
            mu = surface_quadrature(facets, resolution);
        } else if (circle_radius > 0) {
            if (resolution <= 0) throw ConfigInvalid("--resolution required with --circle");
            mu = sphere_quadrature(2, circle_radius, resolution);
        } else {
            throw ConfigInvalid("one of --measure, --polytope, --circle is required");
        }

        Matrix xi = read_xi_csv(xi_path, mu.dim());
        std::vector<std::string> header;
        for (int i = 0; i < mu.dim(); ++i) header.push_back("xi_" + std::to_string(i + 1));
        header.push_back("re");
        header.push_back("im");
        io::CsvWriter csv(header);
        int alias_warnings = 0;
        for (int i = 0; i < xi.rows(); ++i) {
            Vector v = xi.row(i).transpose();
            if (alias_risk(mu, v)) ++alias_warnings;
            Complex z = fourier_transform(mu, v);
            std::vector<double> row;
            for (int c = 0; c < mu.dim(); ++c) row.push_back(v[c]);
            row.push_back(z.real());
            row.push_back(z.imag());
            csv.row(row);
        }
        csv.save(out_path);
        if (alias_warnings > 0)
            std::cerr << "alias risk: " << alias_warnings << " frequencies exceed the "
                      << "Nyquist rule for resolution " << mu.resolution << "\n";
        std::cout << xi.rows() << " transforms -> " << out_path << "\n";
    } catch (const ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
