// surfframe — run named experiment recipes from a JSON config, or sweep one
// parameter across a list of values.
//
//   surfframe <recipe> --config cfg.json [--out dir]
//   surfframe sweep --config cfg.json --param N --values 1,2,4,8

#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "surfframe/harness.hpp"

using namespace surfframe;

namespace {

ExperimentConfig load_config(const std::string& path, const std::string& kind,
                             const std::string& out_override) {
    Json j = io::read_json(path);
    if (!kind.empty()) j["experiment"] = kind;
    ExperimentConfig cfg = parse_config(j);
    if (!out_override.empty()) cfg.out_dir = out_override;
    return cfg;
}

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            throw ConfigInvalid("--values: '" + tok + "' is not a number");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for surface-measure Fourier frames"};
    app.require_subcommand(1);

    std::string config_path, out_dir, param, values;

    for (const auto& kind : known_experiments()) {
        auto* sub = app.add_subcommand(kind, "run the " + kind + " recipe");
        sub->add_option("--config", config_path, "experiment config JSON")->required();
        sub->add_option("--out", out_dir, "output directory override");
        sub->callback([kind, &config_path, &out_dir]() {
            ExperimentConfig cfg = load_config(config_path, kind, out_dir);
            int rc = run(cfg);
            if (rc != 0) {
                std::cerr << "run finished with status " << rc << "\n";
                std::exit(rc);
            }
            std::cout << "report written to " << cfg.out_dir << "/" << cfg.kind
                      << "_report.json\n";
        });
    }

    auto* sw = app.add_subcommand("sweep", "run a recipe across parameter values");
    sw->add_option("--config", config_path, "experiment config JSON")->required();
    sw->add_option("--param", param, "parameter to sweep (N, delta, window, band, "
                                     "resolution, lmax, gamma, r, spectrum_radius)")
        ->required();
    sw->add_option("--values", values, "comma-separated values")->required();
    sw->add_option("--out", out_dir, "output directory override");
    sw->callback([&]() {
        ExperimentConfig cfg = load_config(config_path, "", out_dir);
        std::string csv = sweep(cfg, param, parse_values(values));
        namespace fs = std::filesystem;
        fs::create_directories(cfg.out_dir);
        std::string path =
            (fs::path(cfg.out_dir) / (cfg.kind + "_sweep_" + param + ".csv")).string();
        io::write_text(path, csv);
        std::cout << "sweep written to " << path << "\n";
    });

    try {
        CLI11_PARSE(app, argc, argv);
    } catch (const ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
