#pragma once

#include "tipping/config.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tipping {

struct GridSpec {
    double lo = 0;
    double hi = 0;
    int steps = 2;

    std::vector<double> values() const;
};

// Parses "lo:hi:steps".
GridSpec parse_grid(std::string_view text);

struct RunDirectives {
    std::string command;
    std::uint64_t seed = 1;
    std::size_t n = 100;
    std::optional<GridSpec> grid;
    std::string figure;
    std::filesystem::path out_dir = "out";
    double t_end = 50;
    double max_step = 0.01;
    std::string sweep_parameter = "m";
    std::string sensitivity_target = "threshold";  // or "equilibrium"
    int optimizer_grid = 33;
};

struct Scenario {
    std::string name = "baseline";
    EcosystemConfig config = baseline_config();
    State initial{0.5, 0.5, 0.5};
    RunDirectives run;
};

// Flat "key = value" text; '#' starts a comment. Keys are applied in file
// order on top of the baseline scenario. Throws Error(Parse) with the line
// number for malformed lines and unknown keys, Error(Validation) if the
// resolved configuration is invalid.
Scenario parse_scenario(std::istream& in, std::string_view source = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);

// Every key accepted in a scenario file, in documentation order.
const std::vector<std::string_view>& scenario_keys();

inline constexpr std::string_view kCommands[] = {
    "simulate", "equilibrium", "optimize", "threshold", "sweep", "sensitivity", "reproduce-figure"};

inline constexpr std::string_view kFigures[] = {"fig2",  "fig3",  "fig4",  "fig5",  "figS1",
                                                "figS2", "figS3", "figS4", "figS5", "figS6"};

struct RunSummary {
    std::vector<std::filesystem::path> artifacts;  // relative to the output directory
    std::vector<std::pair<std::string, std::string>> facts;
    std::filesystem::path manifest;
};

// Runs one command, writing CSV/SVG artifacts and manifest.txt into
// scenario.run.out_dir.
RunSummary run_command(const Scenario& scenario);

// key = value lines describing the fully resolved scenario.
void write_resolved_scenario(std::ostream& out, const Scenario& scenario);

} // namespace tipping
