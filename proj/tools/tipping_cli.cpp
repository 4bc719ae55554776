// tipping: command-line front end for the two-restaurant tipping model.

#include "tipping/error.hpp"
#include "tipping/scenario.hpp"
#include "tipping/version.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

int fail(std::string_view category, std::string_view detail) {
    std::cerr << "error: " << category << ": " << detail << '\n';
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-restaurant tipping model"};
    app.set_version_flag("--version", std::string(tipping::kVersion));

    std::string command;
    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n;
    std::optional<std::string> out;
    std::optional<std::string> grid;
    std::optional<std::string> figure;

    std::vector<std::string> commands(std::begin(tipping::kCommands), std::end(tipping::kCommands));
    app.add_option("command", command, "simulate | equilibrium | optimize | threshold | sweep | "
                                       "sensitivity | reproduce-figure")
        ->required()
        ->check(CLI::IsMember(commands));
    app.add_option("--scenario", scenario_path, "scenario file (key = value)")->required();
    app.add_option("--seed", seed, "RNG seed for sampling");
    app.add_option("--n", n, "sample count for sensitivity analysis");
    app.add_option("--out", out, "output directory");
    app.add_option("--grid", grid, "lo:hi:steps grid for threshold or sweep");
    app.add_option("--figure", figure, "figure id for reproduce-figure");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what());
    }

    try {
        tipping::Scenario s = tipping::load_scenario(scenario_path);
        s.run.command = command;
        if (seed) s.run.seed = *seed;
        if (n) s.run.n = *n;
        if (out) s.run.out_dir = *out;
        if (grid) s.run.grid = tipping::parse_grid(*grid);
        if (figure) s.run.figure = *figure;
        if (command == "reproduce-figure" && s.run.figure.empty())
            throw tipping::Error(tipping::ErrorKind::Usage, "reproduce-figure needs --figure");

        const auto summary = tipping::run_command(s);
        for (const auto& [key, value] : summary.facts) std::cout << key << " = " << value << '\n';
        std::cout << "wrote " << summary.artifacts.size() << " artifacts and "
                  << summary.manifest.generic_string() << '\n';
    } catch (const tipping::Error& e) {
        return fail(tipping::category_name(e.kind()), e.what());
    } catch (const std::exception& e) {
        return fail("io", e.what());
    }
    return 0;
}
