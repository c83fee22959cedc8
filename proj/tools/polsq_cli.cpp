// polsq: command-line front end.
//
//   polsq evaluate --amplitude 1 --theta 45 --phi-x 135 --phi-y 135 --degrees
//                  --time 1 --method both
//   polsq region   --time-max 3 --steps 60
//   polsq optimize --time 2
//   polsq sweep    --grid "T=0.5,1,2" --method analytic
//   polsq scenario --amplitude 1 --time 1 --phase 2.35619449
//   polsq validate
//
// Exit codes: 0 success, 1 validation failure, 2 usage error, 3 numerical
// capacity/convergence failure.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "polsq/config.hpp"
#include "polsq/error.hpp"
#include "polsq/explorer.hpp"
#include "polsq/report.hpp"
#include "polsq/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

polsq::Direction parse_direction(const std::string &text) {
    if (text == "x" || text == "1")
        return polsq::Direction::axis(0);
    if (text == "y" || text == "2")
        return polsq::Direction::axis(1);
    if (text == "z" || text == "3")
        return polsq::Direction::axis(2);
    std::stringstream in(text);
    std::string item;
    Eigen::Vector3d v;
    int k = 0;
    while (std::getline(in, item, ',')) {
        if (k >= 3)
            throw polsq::InvalidInput("direction", "expected x|y|z or nx,ny,nz");
        try {
            v[k++] = std::stod(item);
        } catch (const std::exception &) {
            throw polsq::InvalidInput("direction", "cannot parse '" + item + "'");
        }
    }
    if (k != 3)
        throw polsq::InvalidInput("direction", "expected x|y|z or nx,ny,nz");
    return polsq::Direction::normalized(v);
}

void emit(const std::string &text, const std::string &path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw polsq::InvalidInput("output", "cannot write '" + path + "'");
    out << text;
}

std::string dump(const nlohmann::json &j) { return j.dump(2) + "\n"; }

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Polarization squeezing of coherent light under non-degenerate "
                 "parametric amplification"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_path;
    std::string format;
    app.add_option("--config", config_path,
                   std::string("JSON run configuration (default: $") + polsq::kConfigEnvVar + ")");
    app.add_option("-o,--output", output_path, "Write output to a file instead of stdout");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));

    // evaluate
    auto *evaluate = app.add_subcommand("evaluate", "Stokes moments and squeezing assessment");
    double amplitude = 1.0, theta = 0.0, phi_x = 0.0, phi_y = 0.0, time = 0.0;
    std::string method = "analytic";
    std::string direction = "x";
    bool degrees = false;
    evaluate->add_option("--amplitude", amplitude, "A = sqrt(mean photon number)")->required();
    evaluate->add_option("--theta", theta, "Mode split angle (radians)")->required();
    evaluate->add_option("--phi-x", phi_x, "Phase of the x mode (radians)")->required();
    evaluate->add_option("--phi-y", phi_y, "Phase of the y mode (radians)")->required();
    evaluate->add_option("--time", time, "Interaction time T = k t")->required();
    evaluate->add_option("--method", method, "analytic | fock | both")
        ->check(CLI::IsMember({"analytic", "fock", "both"}));
    evaluate->add_option("--direction", direction, "x | y | z | nx,ny,nz");
    evaluate->add_flag("--degrees", degrees, "Angles are given in degrees");

    // region
    auto *region = app.add_subcommand("region", "No-squeezing band boundary as CSV");
    double time_max = 3.0;
    int steps = 60;
    region->add_option("--time-max", time_max, "Largest T")->required();
    region->add_option("--steps", steps, "Number of samples (>= 2)")->required();

    // optimize
    auto *optimize = app.add_subcommand("optimize", "Minimize the S1 squeezing factor");
    double opt_time = 1.0;
    double resolution = polsq::kDefaultGridResolution;
    optimize->add_option("--time", opt_time, "Interaction time T")->required();
    optimize->add_option("--resolution", resolution, "Grid step in radians, (0, 0.1]");

    // sweep
    auto *sweep = app.add_subcommand("sweep", "Evaluate a parameter grid");
    std::string grid_text;
    std::string sweep_method = "analytic";
    std::string sweep_direction = "x";
    bool sweep_degrees = false;
    sweep->add_option("--grid", grid_text,
                      "e.g. \"A=1;theta=0:1.5:4;phi_x=2.356;phi_y=2.356;T=0.5,1,2\"")
        ->required();
    sweep->add_option("--method", sweep_method, "analytic | fock | both")
        ->check(CLI::IsMember({"analytic", "fock", "both"}));
    sweep->add_option("--direction", sweep_direction, "x | y | z | nx,ny,nz");
    sweep->add_flag("--degrees", sweep_degrees, "theta/phi_x/phi_y axes are in degrees");

    // scenario
    auto *scenario = app.add_subcommand(
        "scenario", "Equal-split linear input (theta = pi/4, phi_x = phi_y = phase)");
    double sc_amplitude = 1.0, sc_time = 1.0, sc_phase = 0.75 * std::numbers::pi;
    bool sc_degrees = false;
    scenario->add_option("--amplitude", sc_amplitude, "A")->required();
    scenario->add_option("--time", sc_time, "Interaction time T")->required();
    scenario->add_option("--phase", sc_phase, "Common input phase (radians)");
    scenario->add_flag("--degrees", sc_degrees, "Phase is given in degrees");

    // validate
    auto *validate = app.add_subcommand("validate", "Run the invariant and oracle suite");
    double tolerance = 0.0;
    double abs_tolerance = 0.0;
    int points = 100;
    long long seed = -1;
    validate->add_option("--tolerance", tolerance, "Relative tolerance override");
    validate->add_option("--abs-tolerance", abs_tolerance, "Absolute tolerance override");
    validate->add_option("--points", points, "Random oracle points (>= 100 for a pass)");
    validate->add_option("--seed", seed, "Seed for sampled checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        polsq::RunConfig config = polsq::resolve_run_config(config_path);
        if (!format.empty())
            config.format = format;
        if (!output_path.empty())
            config.output = output_path;
        const double to_rad = std::numbers::pi / 180.0;

        if (*evaluate) {
            if (config.format != "json")
                throw polsq::InvalidInput("format", "evaluate writes JSON only");
            polsq::EvaluateRequest req;
            const double scale = degrees ? to_rad : 1.0;
            req.amplitude = amplitude;
            req.theta = theta * scale;
            req.phi_x = phi_x * scale;
            req.phi_y = phi_y * scale;
            req.time = time;
            req.method = polsq::parse_sweep_method(method);
            req.direction = parse_direction(direction);
            req.policy = config.policy;
            emit(dump(polsq::evaluate_report(req)), config.output);
        } else if (*region) {
            const polsq::BoundaryCurve curve = polsq::boundary_curve(time_max, steps);
            std::ostringstream out;
            polsq::write_boundary_csv(out, curve);
            emit(out.str(), config.output);
        } else if (*optimize) {
            const polsq::OptimumReport r =
                polsq::optimize_factor(polsq::InteractionTime(opt_time), resolution);
            emit(dump(polsq::to_json(r)), config.output);
        } else if (*sweep) {
            polsq::SweepGrid grid = polsq::SweepGrid::parse(grid_text);
            if (sweep_degrees)
                for (auto *axis : {&grid.theta, &grid.phi_x, &grid.phi_y})
                    for (double &v : *axis)
                        v *= to_rad;
            polsq::SweepOptions options;
            options.direction = parse_direction(sweep_direction);
            options.policy = config.policy;
            options.budget = config.budget;
            const polsq::SweepTable table =
                polsq::sweep(grid, polsq::parse_sweep_method(sweep_method), options);
            if (!format.empty() && format == "json") {
                emit(dump(polsq::to_json(table)), config.output);
            } else {
                std::ostringstream out;
                polsq::write_sweep_csv(out, table);
                emit(out.str(), config.output);
            }
        } else if (*scenario) {
            const polsq::ScenarioReport r = polsq::equal_split_scenario(
                sc_amplitude, polsq::InteractionTime(sc_time),
                sc_degrees ? sc_phase * to_rad : sc_phase, config.policy);
            emit(dump(polsq::to_json(r)), config.output);
        } else if (*validate) {
            polsq::ValidationOptions opt;
            opt.relative_tolerance = tolerance > 0.0 ? tolerance : config.relative_tolerance;
            opt.absolute_tolerance = abs_tolerance > 0.0 ? abs_tolerance : config.absolute_tolerance;
            opt.random_points = points;
            opt.seed = seed >= 0 ? static_cast<std::uint64_t>(seed) : config.seed;
            opt.direction_samples = config.direction_samples;
            opt.policy = config.policy;
            const auto results = polsq::run_validation(opt);
            std::ostringstream out;
            bool all_passed = true;
            for (const auto &r : results) {
                const char *status = r.informational ? "INFO" : (r.passed ? "PASS" : "FAIL");
                all_passed = all_passed && r.passed;
                out << std::left << std::setw(6) << status << std::setw(24) << r.name
                    << std::right << std::setw(9) << std::fixed << std::setprecision(2)
                    << r.seconds << "s  " << r.detail << '\n';
            }
            out << (all_passed ? "all checks passed" : "validation FAILED") << '\n';
            emit(out.str(), config.output);
            return all_passed ? kExitOk : kExitValidationFailed;
        }
    } catch (const polsq::CapacityError &e) {
        std::cerr << "numerical capacity error: " << e.what() << '\n';
        if (e.needed_cutoff() > 0)
            std::cerr << "needed ladder length >= " << e.needed_cutoff() << '\n';
        return kExitNumerical;
    } catch (const polsq::ConvergenceError &e) {
        std::cerr << "convergence error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const polsq::OverflowError &e) {
        std::cerr << "overflow: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const polsq::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}
