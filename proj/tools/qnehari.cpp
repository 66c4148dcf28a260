#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qnehari/error.hpp"
#include "qnehari/lab.hpp"

int main(int argc, char** argv) {
    CLI::App app{"qnehari: quaternionic Hardy space experiments"};
    std::string experiment;
    std::string config_path;
    std::vector<std::string> symbols;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    app.add_option("experiment", experiment, "theorem1, theoremA, rkt or selftest")
        ->required()
        ->check(CLI::IsMember(qnehari::kExperiments));
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--symbol", symbols, "symbol spec name:key=value,...; repeatable")->delimiter('+');
    app.add_option("--seed", seed, "master seed");
    app.add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    qnehari::LabConfig cfg;
    try {
        if (!config_path.empty()) cfg = qnehari::load_config(config_path);
        cfg.experiment = experiment;
        if (!symbols.empty()) cfg.symbols = symbols;
        if (seed) cfg.seed = *seed;
        if (out_dir) cfg.out_dir = *out_dir;
        cfg.validate();
    } catch (const qnehari::ConfigError& e) {
        std::cerr << "qnehari: " << e.what() << '\n';
        return 1;
    }

    try {
        const qnehari::LabReport report = qnehari::run_experiment(cfg);
        qnehari::write_report(report, cfg.out_dir);
        qnehari::write_report_csv(std::cout, report);
        if (report.partial()) {
            std::cerr << "qnehari: partial report, see status column\n";
            return 2;
        }
    } catch (const qnehari::ConfigError& e) {
        std::cerr << "qnehari: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "qnehari: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
