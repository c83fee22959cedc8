#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "polsq/explorer.hpp"
#include "polsq/fock_oracle.hpp"

namespace polsq {

/// Run-wide defaults, loadable from a JSON file.
struct RunConfig {
    TruncationPolicy policy;
    double relative_tolerance = 1e-6;
    double absolute_tolerance = 1e-8;
    std::string format = "json";
    std::string output; // empty: stdout
    std::uint64_t seed = 20240611;
    int direction_samples = 10000;
    SweepBudget budget;

    void validate() const;
};

/// Environment variable naming a config file used when --config is absent.
inline constexpr const char *kConfigEnvVar = "POLSQ_CONFIG";

RunConfig run_config_from_json(const nlohmann::json &j);
nlohmann::json to_json(const RunConfig &config);

/// Reads `path`; throws InvalidInput when unreadable or malformed.
RunConfig load_run_config(const std::string &path);

/// `cli_path` if non-empty, else $POLSQ_CONFIG if set, else defaults.
RunConfig resolve_run_config(const std::string &cli_path);

} // namespace polsq
