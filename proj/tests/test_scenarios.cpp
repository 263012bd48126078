#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>

#include "clsim/io.hpp"
#include "clsim/scenario.hpp"
#include "doctest.h"

using namespace clsim;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("clsim_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

double metric(const std::vector<std::pair<std::string, double>>& m, const std::string& key) {
    for (const auto& [k, v] : m)
        if (k == key) return v;
    FAIL("missing metric: " << key);
    return 0.0;
}

}  // namespace

TEST_CASE("config files parse sections, comments and whitespace") {
    const fs::path dir = fresh_dir("config");
    const fs::path file = dir / "run.ini";
    std::ofstream(file) << "# leading comment\n"
                           "top = 1\n"
                           "[grid]\n"
                           "  n   =  512 \n"
                           "extent=25\n"
                           "; another comment style\n"
                           "\n"
                           "[packet]\n"
                           "width = 0.75\n";

    const ScenarioConfig cfg = ScenarioConfig::from_file(file);
    CHECK(cfg.get_long("top", 0) == 1);
    CHECK(cfg.get_long("grid.n", 0) == 512);
    CHECK(cfg.get_double("grid.extent", 0.0) == doctest::Approx(25.0));
    CHECK(cfg.get_double("packet.width", 0.0) == doctest::Approx(0.75));
    CHECK(cfg.get_double("absent", 7.5) == doctest::Approx(7.5));  // fallback
}

TEST_CASE("config errors carry the offending line or key") {
    const fs::path dir = fresh_dir("config_bad");

    std::ofstream(dir / "nosect.ini") << "[grid\nn = 4\n";
    std::ofstream(dir / "noeq.ini") << "[grid]\njust a dangling phrase\n";
    std::ofstream(dir / "nokey.ini") << " = 3\n";

    CHECK_THROWS_AS(ScenarioConfig::from_file(dir / "nosect.ini"), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_file(dir / "noeq.ini"), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_file(dir / "nokey.ini"), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_file(dir / "missing.ini"), ConfigError);

    try {
        ScenarioConfig::from_file(dir / "noeq.ini");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    ScenarioConfig cfg;
    cfg.set("grid.n", "not-a-number");
    CHECK_THROWS_AS(cfg.get_long("grid.n", 0), ConfigError);
    cfg.set("run.dt", "1.5x");
    CHECK_THROWS_AS(cfg.get_double("run.dt", 0.0), ConfigError);
    try {
        cfg.get_double("run.dt", 0.0);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("run.dt") != std::string::npos);
    }
}

TEST_CASE("command-line overrides win over file values") {
    ScenarioConfig cfg;
    cfg.set("grid.n", "1024");
    cfg.set("run.dt", "1e-3");
    cfg.merge_overrides({{"grid.n", "256"}, {"packet.width", "2"}});
    CHECK(cfg.get_long("grid.n", 0) == 256);
    CHECK(cfg.get_double("run.dt", 0.0) == doctest::Approx(1e-3));
    CHECK(cfg.get_double("packet.width", 0.0) == doctest::Approx(2.0));
}

TEST_CASE("the scenario registry lists every experiment") {
    const auto scenarios = list_scenarios();
    REQUIRE(scenarios.size() == 9);
    const std::vector<std::string> expected = {
        "free-dispersion", "harmonic-soliton", "double-slit",
        "equivariance",    "ehrenfest",        "pure-vs-mixed",
        "exchange-term",   "phase-space",      "bohr"};
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(scenarios[i].name == expected[i]);
        CHECK_FALSE(scenarios[i].description.empty());
        CHECK_FALSE(scenarios[i].defaults.empty());
    }
}

TEST_CASE("unknown scenarios and unknown keys are config errors") {
    const fs::path dir = fresh_dir("unknown");
    CHECK_THROWS_AS(run_scenario("warp-drive", ScenarioConfig(), dir), ConfigError);

    ScenarioConfig cfg;
    cfg.set("grid.nn", "64");  // typo for grid.n
    CHECK_THROWS_AS(run_scenario("free-dispersion", cfg, dir), ConfigError);
}

TEST_CASE("free-dispersion at reduced size reproduces its own oracle") {
    const fs::path dir = fresh_dir("free");
    ScenarioConfig cfg;
    cfg.set("grid.n", "256");
    cfg.set("run.dt", "2e-3");
    const auto m = run_scenario("free-dispersion", cfg, dir);

    CHECK(std::abs(metric(m, "linear_width_ratio") - metric(m, "linear_width_ratio_exact")) <
          1e-4);
    CHECK(metric(m, "linear_width_ratio_exact") == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    // the classical packet must not disperse
    CHECK(metric(m, "classical_width_ratio") == doctest::Approx(1.0).epsilon(1e-3));

    for (const char* f : {"summary.csv", "log.csv", "classical_log.csv",
                          "snapshots/linear_rho_initial.csv", "snapshots/linear_rho_final.csv",
                          "snapshots/classical_rho_final.csv"})
        CHECK_MESSAGE(fs::exists(dir / f), f);
}

TEST_CASE("bohr at reduced size still quantizes and still rejects") {
    const fs::path dir = fresh_dir("bohr");
    ScenarioConfig cfg;
    cfg.set("grid.n", "128");
    cfg.set("levels.n_max", "3");
    const auto m = run_scenario("bohr", cfg, dir);

    CHECK(metric(m, "E_1") == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(metric(m, "E_3") == doctest::Approx(-0.5 / 9.0).epsilon(1e-12));
    CHECK(metric(m, "winding_2") == doctest::Approx(2.0));
    CHECK(metric(m, "winding_residual_max") < 1e-10);
    CHECK(metric(m, "rejected_quantized") == doctest::Approx(0.0));
    CHECK(std::abs(metric(m, "rejected_residual") - 0.5) < 1e-3);
    CHECK(fs::exists(dir / "spectrum.csv"));
}

TEST_CASE("summary files round-trip their metric values") {
    const fs::path dir = fresh_dir("io");
    const std::vector<std::pair<std::string, double>> metrics = {
        {"alpha", 1.0 / 3.0}, {"beta", -2.5e-13}, {"gamma", 4096.0}};
    write_summary_csv(dir / "summary.csv", metrics);

    std::ifstream in(dir / "summary.csv");
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);  // header
    for (const auto& [name, value] : metrics) {
        REQUIRE(std::getline(in, line));
        const auto comma = line.find(',');
        CHECK(line.substr(0, comma) == name);
        CHECK(std::stod(line.substr(comma + 1)) == value);  // exact round trip
    }
}

TEST_CASE("field snapshots carry their grid and exact samples") {
    const fs::path dir = fresh_dir("field_io");
    const Grid g(64, 16.0, 1.0, 2.0);
    ScalarField f(g);
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::sin(0.37 * double(i)) / 3.0;
    write_field_csv(dir / "f.csv", f);

    std::ifstream in(dir / "f.csv");
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line.find("# grid:") != std::string::npos);
    CHECK(line.find("64") != std::string::npos);
    std::getline(in, line);  // column header
    std::size_t rows = 0;
    double max_err = 0.0;
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const std::size_t i = std::stoul(line.substr(0, c1));
        const double v = std::stod(line.substr(c2 == std::string::npos ? c1 + 1 : c2 + 1));
        max_err = std::max(max_err, std::abs(v - f[i]));
        ++rows;
    }
    CHECK(rows == g.size());
    CHECK(max_err == 0.0);  // format_double digits round-trip doubles
}

TEST_CASE("version string identifies the library") {
    CHECK(version_string().find("clsim") != std::string::npos);
}
