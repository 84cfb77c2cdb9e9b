#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

namespace monofit {

// Exit codes shared by the CLI and the config runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;      // bad arguments / malformed config
inline constexpr int kExitCapacity = 2;   // a named resource limit was exceeded
inline constexpr int kExitInfeasible = 3; // requested construction cannot be built

struct ExperimentResult {
    std::string csv;                 // full CSV artifact, header + rows
    nlohmann::json provenance;       // config echo + seeds + version
    std::filesystem::path csv_path;  // <output>.csv
    std::filesystem::path provenance_path;  // <output>.provenance.json
};

// Validates the config (unknown fields are errors), runs the experiment, and
// returns the artifacts without writing them. The "experiment" field selects
// among risk-curve, baseline-compare, spectral-check, influence-profile, and
// lower-bound.
ExperimentResult run_experiment(const nlohmann::json& config,
                                std::optional<std::uint64_t> seed_override = {});

// Loads a config file (or a provenance file: an object with a "config" key),
// runs it, and writes <output>.csv and <output>.provenance.json. Nothing is
// written when the run fails.
ExperimentResult run_config_file(const std::filesystem::path& path,
                                 std::optional<std::uint64_t> seed_override = {});

// Packing-based minimax demonstration: builds the budgeted family at the
// requested size s, verifies it, and reports separations and the
// information-budget check for the (n, sigma) experiment.
nlohmann::json lower_bound_demo(int s, double k_budget, double sigma, long long n,
                                std::uint64_t seed, int target_count = 0);

// Full command-line entry point; maps errors to the exit codes above.
int cli_main(int argc, const char* const* argv);

}  // namespace monofit
