// eigenbasis — group-averaging projectors on the sphere harmonic spaces and
// the fixed-subspace basis, written per degree in the real-harmonic
// convention documented in BASIS.md.
//
//   eigenbasis --group dihedral:3 --lmax 12 --out basis.json

#include <CLI11.hpp>
#include <iostream>

#include "surfframe/eigenbasis.hpp"
#include "surfframe/io.hpp"
#include "surfframe/version.hpp"

using namespace surfframe;

int main(int argc, char** argv) {
    CLI::App app{"symmetry-adapted eigenbasis on the sphere"};
    std::string group = "dihedral:3", out_path = "basis.json";
    int lmax = 12;
    app.add_option("--group", group, "dihedral:<n>, cyclic:<n> or trivial:1");
    app.add_option("--lmax", lmax, "largest harmonic degree")->check(CLI::Range(0, 24));
    app.add_option("--out", out_path, "output basis JSON");
    CLI11_PARSE(app, argc, argv);

    try {
        auto pos = group.find(':');
        if (pos == std::string::npos)
            throw ConfigInvalid("--group: expected '<kind>:<n>'");
        std::string kind = group.substr(0, pos);
        int n = std::stoi(group.substr(pos + 1));
        IsometryGroup g;
        if (kind == "dihedral") g = dihedral_group(n);
        else if (kind == "cyclic") g = cyclic_group(n);
        else if (kind == "trivial") g = trivial_group();
        else throw ConfigInvalid("--group: kind must be dihedral, cyclic or trivial");

        ProjectedEigenbasis basis = build_projected_eigenbasis(g, lmax);
        Json j;
        j["group"] = g.name;
        j["order"] = g.order();
        j["lmax"] = lmax;
        j["convention"] = "real spherical harmonics, orthonormal on S^2, "
                          "no Condon-Shortley phase; see BASIS.md";
        Json per_degree = Json::array();
        for (int l = 0; l <= lmax; ++l) {
            Json dj;
            dj["l"] = l;
            dj["dim"] = basis.dims[l];
            dj["projector"] = io::matrix_rows_to_json(basis.projectors[l]);
            dj["fixed_basis"] = io::matrix_rows_to_json(basis.fixed[l].basis);
            per_degree.push_back(dj);
        }
        j["degrees"] = per_degree;
        j["version"] = kVersion;
        io::write_json(out_path, j);
        std::cout << "basis with " << basis.total_dim() << " fixed directions -> "
                  << out_path << "\n";
    } catch (const ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
