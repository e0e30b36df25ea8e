#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace hyperstab::cli;

int main(int argc, char** argv) {
    CLI::App app{"Linear stability of hyperbolic reaction-diffusion dynamics on directed networks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string edge_list_path;
    std::uint64_t seed = 0;
    bool svg = false;
    std::vector<double> coefficients;

    app.add_option("--config", config_path, "run configuration (INI)");
    app.add_option("--out", out_path, "output file (default: stdout)");
    auto* seed_opt = app.add_option("--seed", seed, "overrides the [network] and [sim] seeds");

    auto* spectrum = app.add_subcommand("spectrum", "sorted Laplacian spectrum as index,re,im CSV");
    spectrum->add_option("--edge-list", edge_list_path, "also write the network as an edge list");
    auto* check = app.add_subcommand("check", "per-mode verdicts; exit 0 stable, 1 unstable, 2 error");
    auto* scan = app.add_subcommand(
        "scan", "stability region CSV; Lambda plane defaults Re in [-6, 0] (widened to the spectrum), Im in [-3, 3]");
    scan->add_flag("--svg", svg, "also write <out>.svg with the spectrum overlaid");
    auto* simulate = app.add_subcommand("simulate", "perturbation experiment; trajectory CSV goes to --out");
    auto* roots = app.add_subcommand("roots", "Routh-Hurwitz pivots and roots of z^4 + sum (a_k + i b_k) z^(4-k)");
    roots->add_option("coefficients", coefficients, "a1 a2 a3 a4 b1 b2 b3 b4")->expected(8)->required();
    for (auto* sub : {spectrum, check, scan, simulate, roots})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kError;
    }

    CommandOptions options;
    if (!out_path.empty())
        options.out = out_path;
    if (!edge_list_path.empty())
        options.edge_list_out = edge_list_path;
    if (seed_opt->count() > 0)
        options.seed = seed;
    options.svg = svg;

    try {
        if (*roots) {
            std::array<double, 8> c{};
            std::copy(coefficients.begin(), coefficients.end(), c.begin());
            return cmd_roots(c, std::cout);
        }
        if (config_path.empty())
            throw ConfigError("--config is required for this command");
        RunConfig config = load_config(config_path);
        apply_seed_override(config, options);
        if (*spectrum)
            return cmd_spectrum(config, options, std::cout);
        if (*check)
            return cmd_check(config, options, std::cout);
        if (*scan)
            return cmd_scan(config, options, std::cout);
        return cmd_simulate(config, options, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kError;
    }
}
