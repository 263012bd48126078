#include <cstdio>
#include <exception>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clsim/classical_solver.hpp"
#include "clsim/io.hpp"
#include "clsim/linear_solver.hpp"
#include "clsim/scenario.hpp"

namespace {

std::map<std::string, std::string> parse_sets(const std::vector<std::string>& pairs) {
    std::map<std::string, std::string> out;
    for (const auto& p : pairs) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0)
            throw clsim::ConfigError("--set expects key=value, got '" + p + "'");
        out[p.substr(0, eq)] = p.substr(eq + 1);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"classical and linear wave simulator"};
    app.require_subcommand(1);

    std::string scenario_name, config_path, out_dir = "out";
    std::vector<std::string> set_pairs;
    bool show_defaults = false;

    auto* run = app.add_subcommand("run", "run a scenario and write its outputs");
    run->add_option("scenario", scenario_name, "scenario name (see 'list')")->required();
    run->add_option("--config", config_path, "INI config file with [section] key = value");
    run->add_option("--out", out_dir, "output directory")->capture_default_str();
    run->add_option("--set", set_pairs, "override a config key, e.g. --set grid.n=2048");

    auto* list = app.add_subcommand("list", "list scenarios");
    list->add_flag("--defaults", show_defaults, "also print each scenario's config keys");

    app.add_subcommand("version", "print the version");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("version")) {
            std::printf("%s\n", clsim::version_string().c_str());
            return 0;
        }
        if (app.got_subcommand("list")) {
            for (const auto& info : clsim::list_scenarios()) {
                std::printf("%-18s %s\n", info.name.c_str(), info.description.c_str());
                if (show_defaults)
                    for (const auto& [k, v] : info.defaults)
                        std::printf("    %s = %s\n", k.c_str(), v.c_str());
            }
            return 0;
        }

        clsim::ScenarioConfig cfg;
        if (!config_path.empty()) cfg = clsim::ScenarioConfig::from_file(config_path);
        cfg.merge_overrides(parse_sets(set_pairs));

        const auto metrics = clsim::run_scenario(scenario_name, cfg, out_dir);
        for (const auto& [name, value] : metrics)
            std::printf("%-28s %s\n", name.c_str(), clsim::format_double(value).c_str());
        std::printf("outputs in %s\n", out_dir.c_str());
        return 0;
    } catch (const clsim::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
