#include "polsq/config.hpp"

#include <cstdlib>
#include <fstream>

#include "polsq/error.hpp"

namespace polsq {

void RunConfig::validate() const {
    policy.validate();
    if (!(relative_tolerance > 0.0))
        throw InvalidInput("relative_tolerance", "must be > 0");
    if (!(absolute_tolerance > 0.0))
        throw InvalidInput("absolute_tolerance", "must be > 0");
    if (format != "json" && format != "csv")
        throw InvalidInput("format", "must be json or csv");
    if (direction_samples < 1)
        throw InvalidInput("direction_samples", "must be >= 1");
    if (budget.analytic_points < 1 || budget.oracle_points < 1)
        throw InvalidInput("budget", "point budgets must be >= 1");
}

RunConfig run_config_from_json(const nlohmann::json &j) {
    RunConfig c;
    try {
        if (const auto it = j.find("truncation"); it != j.end()) {
            const auto &t = *it;
            c.policy.epsilon_trunc = t.value("epsilon_trunc", c.policy.epsilon_trunc);
            c.policy.observable_tol = t.value("observable_tol", c.policy.observable_tol);
            c.policy.max_cutoff = t.value("max_cutoff", c.policy.max_cutoff);
            c.policy.growth_guard = t.value("growth_guard", c.policy.growth_guard);
            c.policy.verify_doubling = t.value("verify_doubling", c.policy.verify_doubling);
            c.policy.max_enlargements = t.value("max_enlargements", c.policy.max_enlargements);
        }
        c.relative_tolerance = j.value("relative_tolerance", c.relative_tolerance);
        c.absolute_tolerance = j.value("absolute_tolerance", c.absolute_tolerance);
        c.format = j.value("format", c.format);
        c.output = j.value("output", c.output);
        c.seed = j.value("seed", c.seed);
        c.direction_samples = j.value("direction_samples", c.direction_samples);
        if (const auto it = j.find("budget"); it != j.end()) {
            c.budget.analytic_points = it->value("analytic_points", c.budget.analytic_points);
            c.budget.oracle_points = it->value("oracle_points", c.budget.oracle_points);
        }
    } catch (const nlohmann::json::exception &e) {
        throw InvalidInput("config", e.what());
    }
    c.validate();
    return c;
}

nlohmann::json to_json(const RunConfig &c) {
    return {
        {"truncation",
         {{"epsilon_trunc", c.policy.epsilon_trunc},
          {"observable_tol", c.policy.observable_tol},
          {"max_cutoff", c.policy.max_cutoff},
          {"growth_guard", c.policy.growth_guard},
          {"verify_doubling", c.policy.verify_doubling},
          {"max_enlargements", c.policy.max_enlargements}}},
        {"relative_tolerance", c.relative_tolerance},
        {"absolute_tolerance", c.absolute_tolerance},
        {"format", c.format},
        {"output", c.output},
        {"seed", c.seed},
        {"direction_samples", c.direction_samples},
        {"budget",
         {{"analytic_points", c.budget.analytic_points},
          {"oracle_points", c.budget.oracle_points}}},
    };
}

RunConfig load_run_config(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("config", "cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw InvalidInput("config", "'" + path + "': " + e.what());
    }
    return run_config_from_json(j);
}

RunConfig resolve_run_config(const std::string &cli_path) {
    if (!cli_path.empty())
        return load_run_config(cli_path);
    if (const char *env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0')
        return load_run_config(env);
    return RunConfig{};
}

} // namespace polsq
