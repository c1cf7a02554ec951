#pragma once

#include "hawkes/kernel.hpp"
#include "hawkes/simulation.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hawkes::cli {

/// All validation failures of a configuration, reported together.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> errors);

    [[nodiscard]] const std::vector<std::string>& errors() const noexcept { return errors_; }

private:
    std::vector<std::string> errors_;
};

struct ServiceSpec {
    std::string kind = "shifted_cluster";   // deterministic | exponential | shifted_cluster | empirical
    double value = 0.0;                     // duration or rate
    std::vector<double> samples;            // empirical
    std::optional<double> gamma;            // override of the tail rate
};

struct RunConfig {
    SignedKernel kernel;
    double lambda = 0.0;
    double window = 0.0;                    // A
    double horizon = 0.0;                   // T
    PointConfiguration initial;
    std::optional<std::string> initial_file;
    std::uint64_t seed = 0;
    std::size_t replicas = 1;
    std::size_t first_replica = 0;

    std::string functional = "indicator_empty";
    double eta = 0.05;
    double level = 0.95;
    std::optional<double> alpha;
    std::vector<double> alpha_grid;
    std::vector<double> s_grid{0.5, 1.0, 2.0};
    std::vector<double> epsilon_grid;
    ServiceSpec service;
    std::size_t cluster_samples = 100'000;
    std::size_t mc_samples = 100'000;
    bool coupled = false;
    std::optional<std::string> paths_file;
};

/// Parses and validates a JSON document; relative file paths resolve against `base_dir`.
[[nodiscard]] RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = ".");

[[nodiscard]] RunConfig load_config(const std::filesystem::path& file);

/// Re-checks invariants after command-line overrides; throws ConfigError.
void validate(const RunConfig& config);

/// Hex FNV-1a hash of the effective configuration, written into output headers.
[[nodiscard]] std::string config_hash(const RunConfig& config);

/// Reads initial-condition atoms (one time per line, '#' comments allowed).
[[nodiscard]] std::vector<double> read_times_csv(const std::filesystem::path& file);

} // namespace hawkes::cli
