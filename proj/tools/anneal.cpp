#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "anneal/harness.hpp"

namespace {

int print_summary(const anneal::RunSummary& summary) {
    for (const auto& line : summary.lines) std::cout << line << "\n";
    for (const auto& path : summary.artifacts) std::cout << "wrote " << path << "\n";
    if (!summary.ok) std::cout << "FAILED\n";
    return summary.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum/classical annealing experiment driver"};
    app.require_subcommand(1);

    std::string spec_path, out_dir = ".";
    auto* run = app.add_subcommand("run", "run an experiment from a spec file");
    run->add_option("spec", spec_path, "spec file (flat key-value with [sections])")
        ->required();
    run->add_option("--out", out_dir, "output directory for artifacts");

    auto* list = app.add_subcommand("list-experiments", "list known experiment ids");

    std::string suite;
    std::uint64_t seed = 20260824;
    auto* verify = app.add_subcommand("verify", "run a property suite");
    verify->add_option("suite", suite, "hopf | ergodicity | gfmc-stationarity | sa-map")
        ->required();
    verify->add_option("--seed", seed, "suite RNG seed");

    std::string csv_path, window = "1e-10:1e-2", x_col = "tau", metric_col = "E_res";
    auto* fit = app.add_subcommand("fit", "least-squares log-log slope of a sweep CSV");
    fit->add_option("csv", csv_path, "CSV file with header row")->required();
    fit->add_option("--window", window, "metric window lo:hi (default 1e-10:1e-2)");
    fit->add_option("--x", x_col, "x column name (default tau)");
    fit->add_option("--metric", metric_col, "metric column name (default E_res)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run)
            return print_summary(anneal::Experiments::run(anneal::Config::load(spec_path),
                                                          out_dir));
        if (*list) {
            for (const auto& name : anneal::Experiments::names()) std::cout << name << "\n";
            return 0;
        }
        if (*verify) return print_summary(anneal::run_verify_suite(suite, seed));
        if (*fit) {
            const auto colon = window.find(':');
            if (colon == std::string::npos)
                throw std::invalid_argument("--window must be lo:hi");
            const double lo = std::stod(window.substr(0, colon));
            const double hi = std::stod(window.substr(colon + 1));
            const anneal::FitResult r = anneal::fit_slope_csv(
                anneal::read_file(csv_path), x_col, metric_col, lo, hi);
            std::printf("slope %.6f +/- %.6f (intercept %.6f, %d points)\n", r.slope,
                        r.stderr_slope, r.intercept, r.points_used);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
