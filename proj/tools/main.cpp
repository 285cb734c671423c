// speccurve: exact spectral-curve geometry for irregular Higgs fields on the
// projective line. Reads a JSON config, runs the requested pipeline stage
// (and its prerequisites), and emits a machine-readable JSON report.
//
// Exit codes: 0 success, 1 input error, 2 reported check failures.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "speccurve/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"exact spectral curves, blow-up towers and surface geometry"};
    std::string config_path;
    std::string out_path;
    speccurve::RunOptions opt;
    app.add_option("--config", config_path, "path to the JSON config")->required();
    app.add_option("--command", opt.command,
                   "validate|spectral|casimir|tower|verify|geometry|roundtrip|all|sweep")
        ->default_val("all");
    app.add_option("--out", out_path, "write the report here (default: stdout)");
    app.add_option("--seed", opt.seed, "sweep seed")->default_val(0);
    app.add_option("--truncation-extra", opt.truncation_extra,
                   "extra adaptive truncation steps for Puiseux expansions")
        ->default_val(4);
    app.add_option("--jobs", opt.jobs, "parallel sweep width")->default_val(1);
    CLI11_PARSE(app, argc, argv);

    nlohmann::json config;
    {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot open config '" << config_path << "'\n";
            return 1;
        }
        try {
            in >> config;
        } catch (const std::exception& e) {
            std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
            return 1;
        }
    }

    speccurve::RunOutcome outcome;
    try {
        outcome = speccurve::run_command(config, opt);
    } catch (const speccurve::parse_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const speccurve::value_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const speccurve::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    std::string text = outcome.report.dump(2);
    text.push_back('\n');
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write '" << out_path << "'\n";
            return 1;
        }
        out << text;
    }
    return outcome.exit_code;
}
