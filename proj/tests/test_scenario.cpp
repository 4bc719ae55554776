#include "tipping/error.hpp"
#include "tipping/figures.hpp"
#include "tipping/scenario.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace tipping;
namespace fs = std::filesystem;

namespace {

Scenario parse(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in, "test");
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("tipping_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(TIPPING_CLI) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::set<std::string> manifest_artifacts(const fs::path& dir) {
    std::set<std::string> out;
    std::istringstream in(slurp(dir / "manifest.txt"));
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("artifact = ", 0) == 0) out.insert(line.substr(11));
    return out;
}

std::set<std::string> files_in(const fs::path& dir) {
    std::set<std::string> out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().filename() != "manifest.txt") out.insert(e.path().filename().string());
    return out;
}

} // namespace

TEST_SUITE("scenario") {

TEST_CASE("empty file is the baseline") {
    const auto s = parse("");
    CHECK(s.config == baseline_config());
    CHECK(s.initial == State{0.5, 0.5, 0.5});
    CHECK(s.run.seed == 1);
}

TEST_CASE("overrides") {
    const auto s = parse("# rival raises its tip\nT2 = 0.25\n");
    auto want = baseline_config();
    want.rival.tip_rate = 0.25;
    CHECK(s.config == want);

    const auto f = parse("m = 10\nT = 0.2\nbW = 5\nbC = 10\nr = 12\nT2 = 0.25 # fig 2a\n");
    CHECK(f.config == figures::simulation_variants().front().config);

    const auto g = parse("quality = StaffPay\ngrid = 0.1:0.3:5\nseed = 99\nout = x/y\n");
    CHECK(g.config.quality == QualityModel::StaffPay);
    REQUIRE(g.run.grid);
    CHECK(g.run.grid->values().size() == 5);
    CHECK(g.run.seed == 99);
}

TEST_CASE("parse errors name the line") {
    CHECK_THROWS_WITH_AS(parse("T1 = 0.2\ntipRate3 = 0.1\n"),
                         doctest::Contains("test:2: unknown key 'tipRate3'"), Error);
    CHECK_THROWS_WITH_AS(parse("\n\nm 10\n"), doctest::Contains("test:3:"), Error);
    CHECK_THROWS_WITH_AS(parse("m = ten\n"), doctest::Contains("expected a number"), Error);
    CHECK_THROWS_WITH_AS(parse("grid = 1:2\n"), doctest::Contains("lo:hi:steps"), Error);
    try {
        parse("m1 = 0\n");
        FAIL("expected a validation error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Validation);
    }
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.txt"), Error);
}

TEST_CASE("resolved scenario round-trips") {
    const auto s = parse("name = odd\nm1 = 11.3\nT2 = 0.2718281828459045\nbC1 = 9.1\n"
                         "gratuity = AsPrinted\nW0 = 0.3\nseed = 12345678901\ngrid = 0.05:0.45:9\n"
                         "command = threshold\nfigure = fig3\n");
    std::ostringstream out;
    write_resolved_scenario(out, s);
    std::istringstream in(out.str());
    const auto back = parse_scenario(in);
    CHECK(back.config == s.config);
    CHECK(back.initial == s.initial);
    CHECK(back.name == s.name);
    CHECK(back.run.seed == s.run.seed);
    CHECK(back.run.grid->lo == s.run.grid->lo);
    CHECK(back.run.grid->steps == 9);
    CHECK(back.run.command == "threshold");

    std::ostringstream again;
    write_resolved_scenario(again, back);
    CHECK(again.str() == out.str());

    for (auto key : scenario_keys()) CHECK(!key.empty());
}

TEST_CASE("run_command writes artifacts listed in the manifest") {
    const auto dir = scratch("simulate");
    auto s = parse("T2 = 0.25\ntEnd = 5\n");
    s.run.command = "simulate";
    s.run.out_dir = dir;
    const auto summary = run_command(s);
    CHECK(summary.artifacts.size() == 2);
    CHECK(manifest_artifacts(dir) == files_in(dir));
    const auto manifest = slurp(dir / "manifest.txt");
    CHECK(manifest.find("seed = 1\n") != std::string::npos);
    CHECK(manifest.find("version = ") != std::string::npos);
    CHECK(manifest.find("T2 = 0.25\n") != std::string::npos);

    s.run.command = "fly";
    CHECK_THROWS_AS(run_command(s), Error);
}

TEST_CASE("cli reruns are byte-identical") {
    const auto dir = scratch("cli");
    {
        std::ofstream f(dir / "s.txt");
        f << "m = 10\nr = 4\nbW2 = 10\nbC2 = 25\nrDW = 10\nrCW = 1\n";
    }
    const auto scenario = (dir / "s.txt").string();
    for (const char* run : {"a", "b"}) {
        const auto out = dir / run;
        CHECK(run_cli("threshold --scenario " + scenario + " --out " + out.string() +
                          " --grid 0.01:0.5:9",
                      dir / "log.txt") == 0);
        CHECK(run_cli("reproduce-figure --figure fig2 --scenario " + scenario + " --out " +
                          (out / "fig2").string(),
                      dir / "log.txt") == 0);
        CHECK(run_cli("sensitivity --scenario " + scenario + " --n 30 --seed 4 --out " +
                          (out / "sens").string(),
                      dir / "log.txt") == 0);
    }
    for (const char* sub : {"", "fig2", "sens"}) {
        const auto a = dir / "a" / sub;
        const auto b = dir / "b" / sub;
        CHECK(manifest_artifacts(a) == files_in(a));
        for (const auto& f : files_in(a)) {
            if (f.ends_with(".csv")) CHECK_MESSAGE(slurp(a / f) == slurp(b / f), f);
        }
    }
    const auto tc = slurp(dir / "a" / "threshold.csv");
    CHECK(tc.find("# Tc,0.24") != std::string::npos);
}

TEST_CASE("cli errors are one line with a category") {
    const auto dir = scratch("errors");
    {
        std::ofstream f(dir / "bad.txt");
        f << "tipRate3 = 0.2\n";
    }
    CHECK(run_cli("simulate --scenario " + (dir / "bad.txt").string(), dir / "log.txt") != 0);
    auto log = slurp(dir / "log.txt");
    CHECK(log.rfind("error: parse: ", 0) == 0);
    CHECK(std::count(log.begin(), log.end(), '\n') == 1);

    CHECK(run_cli("teleport --scenario " + (dir / "bad.txt").string(), dir / "log.txt") != 0);
    CHECK(slurp(dir / "log.txt").rfind("error: usage: ", 0) == 0);

    {
        std::ofstream f(dir / "ok.txt");
    }
    CHECK(run_cli("reproduce-figure --scenario " + (dir / "ok.txt").string() + " --figure fig9 --out " +
                      (dir / "o").string(),
                  dir / "log.txt") != 0);
    CHECK(slurp(dir / "log.txt").rfind("error: usage: ", 0) == 0);
}

} // TEST_SUITE
