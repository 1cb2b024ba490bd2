// obstruction — the divergence/convergence dichotomy for a candidate spectrum
// against the circle or sphere surface measure.
//
//   obstruction --body circle --spectrum spec.json --gamma 1 --r 5 --out report.json

#include <CLI11.hpp>
#include <iostream>

#include "surfframe/io.hpp"
#include "surfframe/obstruction.hpp"
#include "surfframe/version.hpp"

using namespace surfframe;

int main(int argc, char** argv) {
    CLI::App app{"summability dichotomy for curved surface measures"};
    std::string body = "circle", spectrum_path, out_path = "report.json";
    double gamma = 1.0, r = 5.0, budget = 10.0;
    app.add_option("--body", body, "circle or sphere")
        ->check(CLI::IsMember({"circle", "sphere"}));
    app.add_option("--spectrum", spectrum_path, "candidate spectrum JSON")->required();
    app.add_option("--gamma", gamma, "decay order");
    app.add_option("--r", r, "local-mass ball radius");
    app.add_option("--budget", budget, "hypothetical Bessel bound B");
    app.add_option("--out", out_path, "output report JSON");
    CLI11_PARSE(app, argc, argv);

    try {
        Spectrum lambda = io::spectrum_from_json(io::read_json(spectrum_path));
        int d = (body == "circle") ? 2 : 3;
        if (lambda.dim() != d) {
            std::cerr << "config error: spectrum dimension " << lambda.dim()
                      << " does not match body dimension " << d << "\n";
            return 1;
        }
        ObstructionReport rep = dichotomy_report(d, lambda, gamma, r, budget);
        Json j = io::obstruction_report_to_json(rep);
        j["body"] = body;
        j["version"] = kVersion;
        io::write_json(out_path, j);
        std::cout << rep.verdict << "\n";
    } catch (const ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const QuadratureUnstable& e) {
        std::cerr << "numerical instability: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
