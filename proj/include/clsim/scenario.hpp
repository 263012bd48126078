#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clsim/field.hpp"

namespace clsim {

/// Flat key-value configuration with dotted keys ("grid.n"). Loaded from an
/// INI-style file ([section] headers prefix the keys) and overridden by
/// command-line pairs; overrides win. Unknown keys are rejected by run()
/// against the scenario's declared defaults.
class ScenarioConfig {
public:
    ScenarioConfig() = default;
    explicit ScenarioConfig(std::map<std::string, std::string> values) : values_(std::move(values)) {}

    static ScenarioConfig from_file(const std::filesystem::path& path);
    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    void merge_overrides(const std::map<std::string, std::string>& overrides);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

struct ScenarioInfo {
    std::string name;
    std::string description;
    std::map<std::string, std::string> defaults;
};

/// Registered scenarios, fixed order.
std::vector<ScenarioInfo> list_scenarios();

/// Run a named scenario: writes log.csv, summary.csv and snapshots/ under
/// out_dir. Returns the summary metrics (also written to summary.csv).
/// Throws ConfigError for unknown scenarios/keys/bad values; solver errors
/// (CausticError, NormDriftError, SamplingError) propagate.
std::vector<std::pair<std::string, double>> run_scenario(const std::string& name,
                                                         const ScenarioConfig& config,
                                                         const std::filesystem::path& out_dir);

std::string version_string();

}  // namespace clsim
